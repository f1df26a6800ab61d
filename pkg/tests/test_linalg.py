import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from psdcomplete.generators import random_gram, random_psd, random_unitary
from psdcomplete.linalg import (
    DEFAULT_TOL,
    TolerancePolicy,
    as_hermitian,
    hermitian_eig,
    is_psd,
    numerical_rank,
    pinv,
    range_projector,
)

from conftest import rel_err


def penrose_residuals(H, X):
    """Relative residuals of the four Penrose conditions."""
    nh = max(np.linalg.norm(H), 1e-300)
    nx = max(np.linalg.norm(X), 1e-300)
    return [
        np.linalg.norm(H @ X @ H - H) / nh,
        np.linalg.norm(X @ H @ X - X) / nx,
        np.linalg.norm((H @ X).conj().T - H @ X) / max(np.linalg.norm(H @ X), 1e-300),
        np.linalg.norm((X @ H).conj().T - X @ H) / max(np.linalg.norm(X @ H), 1e-300),
    ]


def test_diagonal_eigenvalues_descending():
    eig = hermitian_eig(np.diag([1.0, 3.0, 2.0]))
    np.testing.assert_array_equal(eig.eigenvalues, [3.0, 2.0, 1.0])


def test_pauli_y_eigenvalues():
    eig = hermitian_eig(np.array([[0, -1j], [1j, 0]]))
    np.testing.assert_allclose(eig.eigenvalues, [1.0, -1.0], atol=1e-14)
    np.testing.assert_allclose(eig.reconstruct(), [[0, -1j], [1j, 0]], atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_eigenvalues_are_roots_of_characteristic_polynomial(n, rng):
    # independent oracle: roots of det(tI - H) from its coefficients
    H = random_psd(n, n, rng) - 2 * np.eye(n)
    coeffs = np.poly(H).real
    roots = np.sort(np.roots(coeffs).real)[::-1]
    np.testing.assert_allclose(hermitian_eig(H).eigenvalues, roots, rtol=1e-8, atol=1e-8)


def test_eig_matches_numpy_and_vectors_unitary(rng):
    for n in (6, 13, 20):
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H = (G + G.conj().T) / 2
        eig = hermitian_eig(H)
        np.testing.assert_allclose(eig.eigenvalues, np.linalg.eigvalsh(H)[::-1], atol=1e-11)
        V = eig.vectors
        np.testing.assert_allclose(V.conj().T @ V, np.eye(n), atol=1e-12)
        assert rel_err(eig.reconstruct(), H) < 1e-13


def test_eig_results_are_read_only():
    eig = hermitian_eig(np.eye(2))
    with pytest.raises(ValueError):
        eig.eigenvalues[0] = 5


@pytest.mark.parametrize("bad", [np.ones((2, 3)), np.zeros((0, 0)), np.array([[1, 2], [3, 4]]),
                                 np.array([[np.nan, 0], [0, 1]])])
def test_as_hermitian_rejects(bad):
    with pytest.raises(ValueError):
        as_hermitian(bad)


def test_tolerance_policy_validates():
    with pytest.raises(ValueError):
        TolerancePolicy(rank_rtol=0)
    with pytest.raises(ValueError):
        TolerancePolicy(psd_rtol=float("nan"))


def test_rank_examples():
    assert numerical_rank(np.diag([1.0, 1e-12, 0.0])) == 1
    assert numerical_rank(np.zeros((3, 3))) == 0
    assert numerical_rank(np.ones((4, 4))) == 1


def test_pinv_examples():
    np.testing.assert_allclose(pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]), atol=1e-15)
    np.testing.assert_allclose(pinv(np.ones((2, 2))), np.ones((2, 2)) / 4, atol=1e-15)
    np.testing.assert_array_equal(pinv(np.zeros((3, 3))), np.zeros((3, 3)))


def test_pinv_matches_numpy_oracle(rng):
    for r in (1, 3, 6):
        H = random_gram(8, r, rng)
        assert rel_err(pinv(H), np.linalg.pinv(H, rcond=1e-9, hermitian=True)) < 1e-8


def test_is_psd_examples():
    assert is_psd(np.diag([1.0, 0.0]))
    assert not is_psd(np.diag([1.0, -1e-3]))
    assert is_psd(np.diag([1.0, -1e-12]))
    assert not is_psd(np.array([[1, 2], [2, 1]]))


def test_range_projector_is_orthogonal_projector(rng):
    H = random_gram(7, 3, rng)
    Pr = range_projector(H)
    np.testing.assert_allclose(Pr @ Pr, Pr, atol=1e-12)
    np.testing.assert_allclose(Pr @ H, H, atol=1e-12)
    assert round(np.trace(Pr).real) == 3


def test_rank_is_unitarily_invariant(rng):
    for _ in range(20):
        n = int(rng.integers(2, 12))
        r = int(rng.integers(0, n + 1))
        H = random_psd(n, r, rng)
        U = random_unitary(n, rng)
        assert numerical_rank(H) == numerical_rank(U @ H @ U.conj().T) == r


def test_gram_matrices_are_psd_and_pinv_satisfies_penrose(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 21))
        r = int(rng.integers(1, n + 1))
        H = random_gram(n, r, rng)
        assert is_psd(H)
        assert numerical_rank(H) == r
    for _ in range(50):
        n = int(rng.integers(1, 21))
        H = random_gram(n, int(rng.integers(1, n + 1)), rng)
        assert max(penrose_residuals(H, pinv(H))) < 1e-8


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3))
def test_rank_and_pinv_scale(n, seed, c):
    rng = np.random.default_rng(seed)
    H = random_gram(n, int(rng.integers(1, n + 1)), rng)
    assert numerical_rank(c * H) == numerical_rank(H)
    assert rel_err(pinv(c * H), pinv(H) / c) < 1e-9


def test_default_policy_values():
    assert (DEFAULT_TOL.rank_rtol, DEFAULT_TOL.psd_rtol, DEFAULT_TOL.zero_atol) == (1e-9, 1e-9, 1e-12)
