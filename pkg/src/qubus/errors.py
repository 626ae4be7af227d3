"""Exception types shared across the package.

Each error carries a stable kebab-case ``code`` used by the CLI for
machine-parsable reporting (``ERROR <code>: message``) and for mapping to
exit codes (configuration problems exit 1, numerical failures exit 2).
"""


class QubusError(Exception):
    """Base class for all package errors."""

    code = "error"


class DimensionMismatchError(QubusError):
    code = "dimension-mismatch"


class NotHermitianError(QubusError):
    code = "not-hermitian"


class NoConvergenceError(QubusError):
    code = "no-convergence"


class PhotonOverflowError(QubusError):
    code = "photon-overflow"


class TraceDriftError(QubusError):
    code = "trace-drift"


class NegativeEigenvalueError(QubusError):
    code = "negative-eigenvalue"


class UnknownPresetError(QubusError):
    code = "unknown-preset"


class ConfigError(QubusError):
    code = "config-invalid"


class TruncationWarning(UserWarning):
    """Fock-space truncation leakage exceeded its gate; results re-run at larger M."""


# Errors that indicate a bad configuration (CLI exit code 1) as opposed to a
# numerical failure during a run (CLI exit code 2).
CONFIG_ERRORS = (ConfigError, PhotonOverflowError, UnknownPresetError, DimensionMismatchError)
NUMERICAL_ERRORS = (TraceDriftError, NoConvergenceError, NegativeEigenvalueError, NotHermitianError)
