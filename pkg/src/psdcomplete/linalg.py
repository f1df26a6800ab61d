"""Dense Hermitian linear algebra: eigendecomposition, rank, pseudoinverse.

Everything here works on plain complex ``numpy`` arrays. ``as_hermitian``
is the single entry point that validates input; the other functions call it
so they accept anything array-like.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

__all__ = [
    "ConvergenceError",
    "EigenDecomposition",
    "TolerancePolicy",
    "DEFAULT_TOL",
    "as_hermitian",
    "hermitian_eig",
    "numerical_rank",
    "rank",
    "pinv",
    "is_psd",
    "range_projector",
]

# relative asymmetry accepted (and symmetrized away) by as_hermitian
ASYMMETRY_RTOL = 1e-8

OFFDIAG_RTOL = 1e-14
MAX_SWEEPS = 100


class ConvergenceError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds that stand in for exact rank and definiteness.

    Parameters
    ----------
    rank_rtol : float
        Eigenvalues with ``|lam| <= rank_rtol * max|lam|`` count as zero.
    psd_rtol : float
        A matrix is PSD when ``lam_min >= -psd_rtol * max(lam_max, 1)``.
    zero_atol : float
        Absolute threshold for "this block is zero" style checks.
    """

    rank_rtol: float = 1e-9
    psd_rtol: float = 1e-9
    zero_atol: float = 1e-12

    def __post_init__(self):
        for name in ("rank_rtol", "psd_rtol", "zero_atol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")


DEFAULT_TOL = TolerancePolicy()


class EigenDecomposition(NamedTuple):
    """Eigenvalues sorted descending and matching orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        U = self.vectors
        return (U * self.eigenvalues) @ U.conj().T


def as_hermitian(M) -> np.ndarray:
    """Return ``(M + M*)/2`` as a read-only complex array.

    Raises ``ValueError`` for non-square, empty or non-finite input, and when
    the asymmetry ``||M - M*||_F`` exceeds ``1e-8 * ||M||_F``.
    """
    A = np.array(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    AH = A.conj().T
    scale = np.linalg.norm(A)
    if np.linalg.norm(A - AH) > ASYMMETRY_RTOL * scale:
        raise ValueError("matrix is not Hermitian")
    H = (A + AH) / 2
    H.flags.writeable = False
    return H


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Pairings for a cyclic sweep: every (p, q) exactly once, n/2 disjoint per round."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def hermitian_eig(H, max_sweeps: int = MAX_SWEEPS) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each sweep visits every off-diagonal pair once, grouped into rounds of
    disjoint pairs so that a whole round is applied with vectorized updates.
    Iteration stops when the off-diagonal Frobenius mass drops below
    ``1e-14 * ||H||_F``.

    Returns
    -------
    EigenDecomposition
        ``eigenvalues`` real and sorted descending (stable with respect to the
        Jacobi output order), ``vectors`` unitary with eigenvectors as columns.

    Raises
    ------
    ConvergenceError
        If the tolerance is not reached within ``max_sweeps`` sweeps.
    """
    H = as_hermitian(H)
    return _cached_eig(H.shape[0], H.tobytes(), max_sweeps)


@lru_cache(maxsize=256)
def _cached_eig(n: int, raw: bytes, max_sweeps: int) -> EigenDecomposition:
    A = np.frombuffer(raw, dtype=np.complex128).reshape(n, n).copy()
    V = np.eye(n, dtype=np.complex128)
    target = OFFDIAG_RTOL * np.linalg.norm(A)

    offmask = ~np.eye(n, dtype=bool)

    def offdiag():
        return np.linalg.norm(A[offmask])

    rounds = _round_robin(n) if n > 1 else []
    sweeps = 0
    while n > 1 and offdiag() > target:
        if sweeps == max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for P, Q in rounds:
            b = A[P, Q]
            mag = np.abs(b)
            active = mag > 0
            if not active.any():
                continue
            P, Q, b, mag = P[active], Q[active], b[active], mag[active]
            app, aqq = A[P, P].real, A[Q, Q].real
            # real 2x2 symmetric Schur step on [[app, |b|], [|b|, aqq]]
            tau = (aqq - app) / (2 * mag)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1 / np.sqrt(1 + t * t)
            s = t * c
            phase = (b / mag).conj()  # diag(1, conj(e^{i phi})) makes the pair real
            # block-diagonal rotation for the whole round; columns p, q of J
            J = np.eye(n, dtype=np.complex128)
            J[P, P] = c
            J[P, Q] = s
            J[Q, P] = -s * phase
            J[Q, Q] = c * phase
            A = J.conj().T @ A @ J
            A[P, Q] = 0
            A[Q, P] = 0
            V = V @ J

    w = np.diag(A).real.copy()
    order = np.argsort(-w, kind="stable")
    w, V = w[order], V[:, order]
    w.flags.writeable = False
    V.flags.writeable = False
    return EigenDecomposition(w, V)


def _eig(H) -> EigenDecomposition:
    return H if isinstance(H, EigenDecomposition) else hermitian_eig(H)


def _threshold(w: np.ndarray, tol: TolerancePolicy, scale: float | None = None) -> float:
    if scale is None:
        scale = np.max(np.abs(w)) if w.size else 0.0
    return tol.rank_rtol * scale


def numerical_rank(eig, tol: TolerancePolicy = DEFAULT_TOL, scale: float | None = None) -> int:
    """Number of eigenvalues with ``|lam| > rank_rtol * max|lam|``.

    Accepts an ``EigenDecomposition`` or a Hermitian matrix. The zero matrix
    has rank 0. Pass ``scale`` to measure against ``rank_rtol * scale``
    instead; comparing the rank of a matrix with the ranks of its blocks
    needs one common threshold, otherwise a block made only of rounding
    noise counts as full rank.
    """
    w = _eig(eig).eigenvalues
    return int(np.count_nonzero(np.abs(w) > _threshold(w, tol, scale)))


rank = numerical_rank


def pinv(H, tol: TolerancePolicy = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Moore-Penrose inverse of a Hermitian matrix.

    Eigenvalues above the rank threshold are inverted, the rest are set to
    zero. The result is Hermitian by construction. ``scale`` has the same
    meaning as in ``numerical_rank``.
    """
    w, U = _eig(H)
    keep = np.abs(w) > _threshold(w, tol, scale)
    inv = np.zeros_like(w)
    inv[keep] = 1 / w[keep]
    return as_hermitian((U * inv) @ U.conj().T)


def is_psd(H, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    w = _eig(H).eigenvalues
    return bool(w[-1] >= -tol.psd_rtol * max(w[0], 1.0))


def range_projector(H, tol: TolerancePolicy = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Orthogonal projector ``H H^+`` onto the range of ``H``."""
    w, U = _eig(H)
    Ur = U[:, np.abs(w) > _threshold(w, tol, scale)]
    return as_hermitian(Ur @ Ur.conj().T)
