import numpy as np
import pytest

from qubus import linalg
from qubus.errors import DimensionMismatchError, NotHermitianError
from qubus.model import SIGMA_MINUS, SIGMA_PLUS, SIGMA_X, SIGMA_Z, annihilation


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def test_kron_identities():
    i2 = np.eye(2)
    np.testing.assert_array_equal(linalg.kron(i2, i2), np.eye(4))
    np.testing.assert_array_equal(linalg.kron(SIGMA_Z, i2), np.diag([1, 1, -1, -1]).astype(complex))


def test_kron_block_placement():
    # a(M=1) tensor I2 has its sqrt(1) entry replicated at (0,2) and (1,3)
    out = linalg.kron(annihilation(1), np.eye(2))
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 2] = expected[1, 3] = 1.0
    np.testing.assert_array_equal(out, expected)


def test_kron_associativity():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    c = rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4))
    left = linalg.kron(linalg.kron(a, b), c)
    right = linalg.kron(a, linalg.kron(b, c))
    np.testing.assert_allclose(left, right, atol=1e-14)


def test_hermitian_eig_diagonal():
    eig = linalg.hermitian_eig(np.diag([3.0, 1.0, 2.0]).astype(complex))
    np.testing.assert_allclose(eig.eigenvalues, [1.0, 2.0, 3.0], atol=1e-14)


def test_hermitian_eig_pauli_x():
    eig = linalg.hermitian_eig(SIGMA_X)
    np.testing.assert_allclose(eig.eigenvalues, [-1.0, 1.0], atol=1e-14)


def test_hermitian_eig_quadrature():
    # X = a + a^dag at M=2: characteristic polynomial is lam^3 - 3 lam
    a = annihilation(2)
    eig = linalg.hermitian_eig(a + a.conj().T)
    roots = np.sort(np.roots([1.0, 0.0, -3.0, 0.0]).real)
    np.testing.assert_allclose(eig.eigenvalues, roots, atol=1e-12)
    np.testing.assert_allclose(eig.eigenvalues, [-np.sqrt(3), 0.0, np.sqrt(3)], atol=1e-12)


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        linalg.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_hermitian_eig_random_reconstruction():
    rng = np.random.default_rng(2)
    for n in range(2, 17):
        a = random_hermitian(rng, n)
        eig = linalg.hermitian_eig(a)
        scale = np.max(np.abs(a))
        assert np.max(np.abs(eig.reconstruct() - a)) < 1e-10 * scale
        gram = eig.eigenvectors.conj().T @ eig.eigenvectors
        assert np.max(np.abs(gram - np.eye(n))) < 1e-10
        assert np.all(np.diff(eig.eigenvalues) >= 0)


def test_func_hermitian_cosine_cases():
    np.testing.assert_allclose(
        linalg.func_hermitian(np.zeros((3, 3)), np.cos), np.eye(3), atol=1e-14
    )
    out = linalg.func_hermitian(np.diag([0.0, np.pi]).astype(complex), np.cos)
    np.testing.assert_allclose(out, np.diag([1.0, -1.0]), atol=1e-14)


def test_func_hermitian_identity_function():
    rng = np.random.default_rng(3)
    a = random_hermitian(rng, 6)
    np.testing.assert_allclose(linalg.func_hermitian(a, lambda w: w), a, atol=1e-10)


def test_func_hermitian_pythagorean():
    rng = np.random.default_rng(4)
    for n in (2, 5, 9):
        a = random_hermitian(rng, n)
        total = (
            linalg.func_hermitian(a, np.cos) @ linalg.func_hermitian(a, np.cos)
            + linalg.func_hermitian(a, np.sin) @ linalg.func_hermitian(a, np.sin)
        )
        np.testing.assert_allclose(total, np.eye(n), atol=1e-9)


def test_matmul_sigma_plus_minus():
    np.testing.assert_array_equal(linalg.matmul(SIGMA_PLUS, SIGMA_MINUS), np.diag([4.0, 0.0]).astype(complex))


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        linalg.matmul(np.eye(2), np.eye(3))


def test_matvec_and_adjoint():
    a = annihilation(2)
    vacuum = np.array([1.0, 0.0, 0.0], dtype=complex)
    np.testing.assert_allclose(linalg.matvec(linalg.adjoint(a), vacuum), [0.0, 1.0, 0.0], atol=1e-15)


def test_trace():
    assert linalg.trace(np.eye(4)) == pytest.approx(4.0)
    rng = np.random.default_rng(5)
    a = random_hermitian(rng, 8)
    assert abs(linalg.trace(a).imag) <= 1e-12
    with pytest.raises(DimensionMismatchError):
        linalg.trace(np.ones((2, 3)))
