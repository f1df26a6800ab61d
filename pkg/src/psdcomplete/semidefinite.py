"""Partitioned PSD matrices, the generalized determinant and Schur complements.

A Hermitian ``H`` is split as ``[[A, B], [B*, C]]`` with ``A`` of size
``k x k``. For PSD ``H`` the ranges of ``B`` and ``B*`` sit inside those of
``A`` and ``C``; ``H`` is *of maximal rank* when
``rank H = rank A + rank C``, i.e. when ``N(H) = N(A) + N(C)``. On that class
Fischer's inequality, the Schur determinant formula and the Banachiewicz
block inverse carry over to singular matrices once the determinant is
replaced by ``gendet`` (product of nonzero eigenvalues) and inverses by
Moore-Penrose inverses.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    TolerancePolicy,
    _eig,
    as_hermitian,
    hermitian_eig,
    is_psd,
    numerical_rank,
    pinv,
)

__all__ = [
    "PreconditionError",
    "BlockPartition",
    "BlockView",
    "split",
    "column_inclusion_holds",
    "is_maximal_rank",
    "gendet",
    "gendet_limit",
    "schur_complement",
    "FischerReport",
    "SchurDetReport",
    "verify_fischer",
    "verify_schur_det",
    "banachiewicz_pinv",
    "nullspace_direct_sum_check",
]


class PreconditionError(ValueError):
    """An input violates the hypothesis a result is stated under."""


@dataclass(frozen=True)
class BlockPartition:
    """Split of ``{0..n-1}`` into a leading block of size ``k`` and a trailing one of size ``l``."""

    k: int
    l: int

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ValueError(f"both blocks must be non-empty, got k={self.k}, l={self.l}")

    @classmethod
    def at(cls, k: int, n: int) -> "BlockPartition":
        return cls(k, n - k)

    @property
    def n(self) -> int:
        return self.k + self.l


class BlockView(NamedTuple):
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def assemble(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.B.conj().T, self.C]])


def _partition(H: np.ndarray, p) -> BlockPartition:
    if not isinstance(p, BlockPartition):
        p = BlockPartition.at(int(p), H.shape[0])
    if p.n != H.shape[0]:
        raise ValueError(f"partition of size {p.n} does not fit a {H.shape[0]}x{H.shape[0]} matrix")
    return p


def split(H, p) -> BlockView:
    """Blocks ``A, B, C`` of ``H`` under ``p`` (a ``BlockPartition`` or the leading size ``k``)."""
    H = as_hermitian(H)
    p = _partition(H, p)
    k = p.k
    return BlockView(H[:k, :k], H[:k, k:], H[k:, k:])


def _discarded_mass(H, tol: TolerancePolicy) -> tuple[np.ndarray, np.ndarray, float]:
    """Eigenvectors below the rank threshold, their eigenvalues, and max |eigenvalue|."""
    w, U = hermitian_eig(H)
    top = np.max(np.abs(w))
    small = np.abs(w) <= tol.rank_rtol * top
    return U[:, small], w[small], top


def column_inclusion_holds(H, p, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Check ``R(B) <= R(A)`` and ``R(B*) <= R(C)`` numerically.

    The residuals ``||(I - A A^+) B||_F`` and ``||(I - C C^+) B*||_F`` are
    compared with ``zero_atol * (1 + ||B||_F)``. Eigen-directions of ``A``
    that the rank threshold discards still carry a little of ``B`` even for
    exactly PSD input: for PSD ``H`` and unit ``w`` with ``A w = lam w``,
    ``||B* w||^2 <= lam * ||C||_2``. That amount is added to the allowance.
    """
    A, B, C = split(H, p)
    base = tol.zero_atol * (1 + np.linalg.norm(B))
    for X, Y, M in ((A, C, B), (C, A, B.conj().T)):
        Ux, wx, _ = _discarded_mass(X, tol)
        ymax = _spectral_radius(Y)
        residual = np.linalg.norm(Ux.conj().T @ M)
        if residual > base + np.sqrt(np.sum(np.abs(wx)) * ymax):
            return False
    return True


def _spectral_radius(M) -> float:
    return float(np.max(np.abs(hermitian_eig(M).eigenvalues)))


def is_maximal_rank(H, p, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """``rank H == rank A + rank C`` for a PSD ``H``.

    All three ranks use the threshold of ``H``. Raises ``PreconditionError``
    if ``H`` is not PSD.
    """
    H = as_hermitian(H)
    eig = hermitian_eig(H)
    if not is_psd(eig, tol):
        raise PreconditionError("maximal rank is defined for positive semidefinite matrices only")
    A, _, C = split(H, p)
    scale = float(np.max(np.abs(eig.eigenvalues)))
    return numerical_rank(eig, tol) == numerical_rank(A, tol, scale) + numerical_rank(C, tol, scale)


def gendet(H, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Generalized determinant: the determinant of ``H`` restricted to its range.

    Computed as the product of the eigenvalues above the rank threshold, so
    it equals ``det H`` for nonsingular ``H`` and is 1 for the zero matrix.
    Indefinite input is allowed; the sign follows the retained eigenvalues.
    Accepts a matrix or its ``EigenDecomposition``.
    """
    w = _eig(H).eigenvalues
    kept = w[np.abs(w) > tol.rank_rtol * np.max(np.abs(w))]
    return float(np.prod(kept)) if kept.size else 1.0


def _neville(x: Sequence[float], y: Sequence[float], x0: float = 0.0) -> float:
    p = list(y)
    m = len(x)
    for k in range(1, m):
        for i in range(m - k):
            p[i] = ((x0 - x[i + k]) * p[i] + (x[i] - x0) * p[i + 1]) / (x[i] - x[i + k])
    return p[0]


def gendet_limit(H, r: int, eps_sequence: Sequence[float] = (1e-3, 1e-4, 1e-5), full_output: bool = False):
    """Evaluate ``lim det(H + eps I) / eps^(n-r)`` as ``eps -> 0``.

    The ratio is sampled at each ``eps`` in ``eps_sequence`` and extrapolated
    to ``eps = 0`` with Neville's scheme (Richardson extrapolation for the
    polynomial dependence on ``eps``). Only ``numpy.linalg.det`` is used, so
    this serves as an independent check of ``gendet``. The samples should be
    small compared with the smallest nonzero eigenvalue of ``H``.

    Parameters
    ----------
    H : array_like
        Hermitian matrix.
    r : int
        Rank of ``H``.
    eps_sequence : sequence of float
        Distinct positive shifts.
    full_output : bool
        If true, also return a dict with the sampled ``values`` and the
        observed convergence ``ratio`` ``|v[-1] - v[-2]| / |v[-2] - v[-3]|``
        (``nan`` with fewer than three samples).

    Returns
    -------
    float or (float, dict)
    """
    H = as_hermitian(H)
    n = H.shape[0]
    if not 0 <= r <= n:
        raise ValueError(f"rank {r} out of range for n={n}")
    eps = [float(e) for e in eps_sequence]
    if not eps or any(e <= 0 for e in eps) or len(set(eps)) != len(eps):
        raise ValueError("eps_sequence must hold distinct positive values")
    eye = np.eye(n)
    values = [np.linalg.det(H + e * eye).real / e ** (n - r) for e in eps]
    limit = float(_neville(eps, values))
    if not full_output:
        return limit
    ratio = float("nan")
    if len(values) >= 3 and values[-2] != values[-3]:
        ratio = abs(values[-1] - values[-2]) / abs(values[-2] - values[-3])
    return limit, {"values": values, "ratio": ratio}


def schur_complement(H, p, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """``H/A = C - B* A^+ B``.

    ``A^+`` uses the rank threshold of ``H``, so rounding noise in a
    numerically zero ``A`` is not inverted.
    """
    H = as_hermitian(H)
    A, B, C = split(H, p)
    return as_hermitian(C - B.conj().T @ pinv(A, tol, _spectral_radius(H)) @ B)


def _require_maximal_rank(H, p, tol):
    if not is_maximal_rank(H, p, tol):
        raise PreconditionError("matrix is not of maximal rank with respect to the partition")


@dataclass(frozen=True)
class FischerReport:
    lhs: float
    rhs: float
    b_is_zero: bool
    holds: bool
    equality: bool


@dataclass(frozen=True)
class SchurDetReport:
    lhs: float
    rhs: float
    holds: bool


def verify_fischer(H, p, tol: TolerancePolicy = DEFAULT_TOL, rtol: float = 1e-9) -> FischerReport:
    """Compare ``gendet(H)`` with ``gendet(A) * gendet(C)``.

    For PSD ``H`` of maximal rank the first never exceeds the second, with
    equality exactly when ``B = 0`` (tested as ``||B||_F <= zero_atol``).
    Equality is judged relative to ``rhs``, absolutely if ``rhs == 0``.
    """
    H = as_hermitian(H)
    _require_maximal_rank(H, p, tol)
    A, B, C = split(H, p)
    lhs = gendet(H, tol)
    rhs = gendet(A, tol) * gendet(C, tol)
    slack = rtol * abs(rhs) if rhs != 0 else tol.zero_atol
    return FischerReport(
        lhs=lhs,
        rhs=rhs,
        b_is_zero=bool(np.linalg.norm(B) <= tol.zero_atol),
        holds=bool(lhs <= rhs + slack),
        equality=bool(abs(lhs - rhs) <= slack),
    )


def verify_schur_det(H, p, tol: TolerancePolicy = DEFAULT_TOL, rtol: float = 1e-7) -> SchurDetReport:
    """Check ``gendet(H) == gendet(A) * gendet(H/A)`` on a maximal-rank PSD ``H``."""
    H = as_hermitian(H)
    _require_maximal_rank(H, p, tol)
    A, _, _ = split(H, p)
    lhs = gendet(H, tol)
    rhs = gendet(A, tol) * gendet(schur_complement(H, p, tol), tol)
    return SchurDetReport(lhs=lhs, rhs=rhs, holds=bool(abs(lhs - rhs) <= rtol * abs(rhs)))


def banachiewicz_pinv(H, p, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse of a maximal-rank PSD ``H`` from ``A^+`` and ``(H/A)^+``::

        [[A+ + A+ B S+ B* A+,  -A+ B S+],
         [-S+ B* A+,            S+     ]]      with S = H/A

    Raises ``PreconditionError`` outside the maximal-rank class, where the
    formula does not give the Moore-Penrose inverse in general.
    """
    H = as_hermitian(H)
    _require_maximal_rank(H, p, tol)
    A, B, _ = split(H, p)
    scale = _spectral_radius(H)
    Ap = pinv(A, tol, scale)
    Sp = pinv(schur_complement(H, p, tol), tol, scale)
    K = Ap @ B @ Sp  # A+ B S+
    top = np.hstack([Ap + K @ B.conj().T @ Ap, -K])
    bottom = np.hstack([-K.conj().T, Sp])
    return as_hermitian(np.vstack([top, bottom]))


def nullspace_direct_sum_check(H, p, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Check ``N(A) + N(C) <= N(H)`` on eigenvector bases of the two null spaces.

    Each basis vector ``w`` (padded with zeros) must satisfy
    ``||H w|| <= zero_atol * ||H||_F`` up to the same allowance for
    discarded eigen-directions as ``column_inclusion_holds``.
    """
    H = as_hermitian(H)
    if not is_psd(H, tol):
        raise PreconditionError("the null space relation is asserted for PSD matrices only")
    A, _, C = split(H, p)
    k = A.shape[0]
    base = tol.zero_atol * np.linalg.norm(H)
    for X, Y, lead in ((A, C, True), (C, A, False)):
        Ux, wx, _ = _discarded_mass(X, tol)
        if not wx.size:
            continue
        ymax = _spectral_radius(Y)
        pad = np.zeros((H.shape[0], Ux.shape[1]), dtype=complex)
        if lead:
            pad[:k] = Ux
        else:
            pad[k:] = Ux
        residuals = np.linalg.norm(H @ pad, axis=0)
        allowance = base + np.abs(wx) + np.sqrt(np.abs(wx) * ymax)
        if np.any(residuals > allowance):
            return False
    return True
