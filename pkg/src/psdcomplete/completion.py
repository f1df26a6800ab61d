"""PSD completion of partial Hermitian matrices over chordal patterns.

Two overlapping cliques ``alpha`` and ``beta`` with ``gamma = alpha & beta``
give the layout::

    [[A,  B,  X],        A = H[alpha-gamma], C = H[gamma], E = H[beta-gamma]
     [B*, C,  D],        X = H[alpha-gamma, beta-gamma] is unknown
     [X*, D*, E]]

and ``X = B C^+ D`` makes the whole matrix PSD whenever ``H[alpha]`` and
``H[beta]`` are. A chordal pattern is completed by applying this step along
a clique tree. When every merge satisfies the maximal-rank hypotheses the
result is the unique PSD, maximal-rank completion of largest generalized
determinant, and its Moore-Penrose inverse vanishes at every unspecified
position.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .chordal import clique_tree, is_chordal, maximal_cliques, pattern_graph
from .linalg import DEFAULT_TOL, TolerancePolicy, as_hermitian, hermitian_eig, is_psd, numerical_rank, pinv
from .semidefinite import PreconditionError, gendet, is_maximal_rank

__all__ = [
    "PartialHermitianMatrix",
    "TriPartition",
    "MergeRecord",
    "CompletionReport",
    "ZeroPatternReport",
    "MaximalityReport",
    "NotChordalError",
    "CliqueNotPSDError",
    "CompletionError",
    "complete_edge",
    "complete",
    "rank_additivity_check",
    "explicit_block_pinv",
    "verify_pinv_zero_pattern",
    "verify_det_maximality",
]


class NotChordalError(ValueError):
    def __init__(self, witness):
        self.witness = list(witness)
        super().__init__(f"specification graph is not chordal; chordless cycle {self.witness}")


class CliqueNotPSDError(ValueError):
    def __init__(self, clique):
        self.clique = tuple(clique)
        super().__init__(f"submatrix on clique {self.clique} is not positive semidefinite")


class CompletionError(RuntimeError):
    """The completed matrix failed a hard check (PSD or preserved entries)."""


@dataclass(frozen=True, eq=False)
class PartialHermitianMatrix:
    """Hermitian matrix with a symmetric mask of specified entries.

    Unspecified entries are stored as zeros and never read. The specified
    part must be conjugate symmetric (up to the same ``1e-8`` relative
    slack as ``as_hermitian``); it is symmetrized on construction.
    """

    entries: np.ndarray
    specified: np.ndarray

    def __post_init__(self):
        mask = np.array(self.specified, dtype=bool)
        M = np.array(self.entries, dtype=np.complex128)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape != mask.shape or M.shape[0] == 0:
            raise ValueError("entries and mask must be square arrays of the same shape")
        if not np.array_equal(mask, mask.T):
            raise ValueError("specification pattern is not symmetric")
        if not mask.diagonal().all():
            raise ValueError("all diagonal entries must be specified")
        M = np.where(mask, M, 0)
        if not np.all(np.isfinite(M)):
            raise ValueError("specified entries must be finite")
        MH = M.conj().T
        if np.linalg.norm(M - MH) > 1e-8 * np.linalg.norm(M):
            raise ValueError("specified entries are not conjugate symmetric")
        M = (M + MH) / 2
        M.flags.writeable = False
        mask.flags.writeable = False
        object.__setattr__(self, "entries", M)
        object.__setattr__(self, "specified", mask)

    @classmethod
    def from_upper(cls, n: int, values: dict) -> "PartialHermitianMatrix":
        """Build from ``{(i, j): value}`` with ``i <= j``; the lower triangle is implied."""
        M = np.zeros((n, n), dtype=np.complex128)
        mask = np.zeros((n, n), dtype=bool)
        for (i, j), v in values.items():
            if i > j:
                i, j, v = j, i, np.conj(v)
            M[i, j] = v
            M[j, i] = np.conj(v)
            mask[i, j] = mask[j, i] = True
        return cls(M, mask)

    @classmethod
    def full(cls, H) -> "PartialHermitianMatrix":
        H = as_hermitian(H)
        return cls(H, np.ones(H.shape, dtype=bool))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def is_complete(self) -> bool:
        return bool(self.specified.all())

    def unspecified_positions(self) -> list[tuple[int, int]]:
        """Upper-triangle positions ``(i, j)``, ``i < j``, that are not specified."""
        i, j = np.nonzero(np.triu(~self.specified, 1))
        return list(zip(i.tolist(), j.tolist()))


class TriPartition(NamedTuple):
    """Index sets ``alpha - gamma``, ``gamma`` and ``beta - gamma``."""

    alpha_only: tuple[int, ...]
    gamma: tuple[int, ...]
    beta_only: tuple[int, ...]

    @classmethod
    def of(cls, alpha: Sequence[int], beta: Sequence[int]) -> "TriPartition":
        a, b = set(alpha), set(beta)
        return cls(tuple(sorted(a - b)), tuple(sorted(a & b)), tuple(sorted(b - a)))

    @classmethod
    def contiguous(cls, k: int, m: int, l: int) -> "TriPartition":
        return cls(tuple(range(k)), tuple(range(k, k + m)), tuple(range(k + m, k + m + l)))

    @property
    def alpha(self) -> tuple[int, ...]:
        return self.alpha_only + self.gamma

    @property
    def beta(self) -> tuple[int, ...]:
        return self.gamma + self.beta_only

    @property
    def order(self) -> tuple[int, ...]:
        return self.alpha_only + self.gamma + self.beta_only


def _blocks(M: np.ndarray, t: TriPartition):
    a, g, b = (list(s) for s in t)
    ix = np.ix_
    return M[ix(a, a)], M[ix(a, g)], M[ix(g, g)], M[ix(g, b)], M[ix(b, b)]


def _clique_scale(M: np.ndarray, t: TriPartition) -> float:
    """Largest eigenvalue modulus of ``H[alpha]`` and ``H[beta]``."""
    return max(float(np.max(np.abs(hermitian_eig(M[np.ix_(s, s)]).eigenvalues))) for s in (t.alpha, t.beta))


def _fill(M: np.ndarray, t: TriPartition, tol: TolerancePolicy) -> np.ndarray:
    _, B, C, D, _ = _blocks(M, t)
    if not t.gamma:
        return np.zeros((len(t.alpha_only), len(t.beta_only)), dtype=np.complex128)
    # threshold C against the clique blocks: a numerically zero C must give X = 0
    return B @ pinv(C, tol, _clique_scale(M, t)) @ D


def complete_edge(H, t: TriPartition, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """The block ``X = B C^+ D`` that joins ``H[alpha]`` and ``H[beta]``.

    ``H`` is a ``PartialHermitianMatrix`` (or an array, read only on
    ``alpha`` and ``beta``). Both clique submatrices must be fully specified
    and PSD. With an empty ``gamma`` the block is zero.
    """
    if isinstance(H, PartialHermitianMatrix):
        M, mask = H.entries, H.specified
    else:
        M = np.asarray(H, dtype=np.complex128)
        mask = np.ones(M.shape, dtype=bool)
    for name, idx in (("alpha", t.alpha), ("beta", t.beta)):
        sub = np.ix_(idx, idx)
        if not mask[sub].all():
            raise PreconditionError(f"H[{name}] is not fully specified")
        if not is_psd(M[sub], tol):
            raise PreconditionError(f"H[{name}] is not positive semidefinite")
    return _fill(M, t, tol)


def _maximal_rank_split(M, first, second, tol) -> bool:
    """Maximal rank of ``M[first + second]`` for that two-block split; vacuous if a block is empty."""
    if not first or not second:
        return True
    idx = list(first) + list(second)
    return is_maximal_rank(M[np.ix_(idx, idx)], len(first), tol)


def rank_additivity_check(H, t: TriPartition, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """``rank H[alpha | beta] == rank A + rank C + rank E``.

    Holds for ``X = B C^+ D`` when both clique blocks are of maximal rank;
    otherwise it reports ``False`` without raising.
    """
    H = np.asarray(H)
    order = list(t.order)
    eig = hermitian_eig(H[np.ix_(order, order)])
    scale = float(np.max(np.abs(eig.eigenvalues)))
    parts = sum(numerical_rank(H[np.ix_(s, s)], tol, scale) for s in t if s)
    return numerical_rank(eig, tol) == parts


@dataclass(frozen=True)
class MergeRecord:
    parent: int
    child: int
    separator: tuple[int, ...]
    shape: tuple[int, int]
    hypotheses_hold: bool
    rank_additive: bool
    schur_cross_norm: float


@dataclass(frozen=True)
class ZeroPatternReport:
    ok: bool
    max_ratio: float
    violations: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class CompletionReport:
    completed: np.ndarray
    psd: bool
    rank: int
    rank_additive: bool
    hypotheses_hold: bool
    pinv_zero_pattern_ok: bool
    gendet_value: float
    cliques: list[tuple[int, ...]] = field(default_factory=list)
    merge_log: list[MergeRecord] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def _schur_cross_norm(M, t, tol) -> float:
    """Norm of the off-diagonal block of ``H/C``; zero exactly when ``X = B C^+ D``."""
    A, B, C, D, E = _blocks(M, t)
    a, b = t.alpha_only, t.beta_only
    X = M[np.ix_(a, b)]
    if not t.gamma:
        return float(np.linalg.norm(X))
    return float(np.linalg.norm(X - B @ pinv(C, tol, _clique_scale(M, t)) @ D))


def complete(P: PartialHermitianMatrix, tol: TolerancePolicy = DEFAULT_TOL, root: int = 0) -> CompletionReport:
    """Complete ``P`` to a PSD matrix over a clique tree of its pattern.

    Cliques are merged in breadth-first order from clique ``root``. At each
    step ``alpha`` is everything merged so far, ``beta`` the next clique and
    ``gamma`` their separator; the block ``H[alpha-gamma, beta-gamma]`` is set
    to ``B C^+ D``.

    Raises
    ------
    NotChordalError
        The pattern graph is not chordal (``.witness`` holds a chordless cycle).
    CliqueNotPSDError
        Some clique submatrix is not PSD (``.clique`` names it).
    CompletionError
        The output is not PSD or lost a specified entry.

    Maximal-rank hypotheses and the uniqueness checks do not raise; failures
    are listed in ``warnings``.
    """
    G = pattern_graph(P)
    chordal = is_chordal(G)
    if not chordal:
        raise NotChordalError(chordal.witness)
    cliques = maximal_cliques(G, chordal.peo)
    for c in cliques:
        if not is_psd(P.entries[np.ix_(c, c)], tol):
            raise CliqueNotPSDError(c)
    tree = clique_tree(cliques, root=root)

    M = np.array(P.entries)
    filled = np.array(P.specified)
    merged = list(cliques[tree.root])
    log = []
    for step in tree.merge_order:
        t = TriPartition.of(merged, cliques[step.child])
        hyp = _maximal_rank_split(M, t.alpha_only, t.gamma, tol) and _maximal_rank_split(M, t.gamma, t.beta_only, tol)
        X = _fill(M, t, tol)
        ix = np.ix_(t.alpha_only, t.beta_only)
        if filled[ix].any():
            raise AssertionError("merge would overwrite an existing entry")
        M[ix] = X
        M[np.ix_(t.beta_only, t.alpha_only)] = X.conj().T
        filled[ix] = True
        filled[np.ix_(t.beta_only, t.alpha_only)] = True
        log.append(
            MergeRecord(
                parent=step.parent,
                child=step.child,
                separator=step.separator,
                shape=X.shape,
                hypotheses_hold=hyp,
                rank_additive=rank_additivity_check(M, t, tol),
                schur_cross_norm=_schur_cross_norm(M, t, tol),
            )
        )
        merged = sorted(set(merged) | set(cliques[step.child]))

    if not filled.all():
        raise AssertionError("clique tree did not cover every position")
    completed = as_hermitian(M)
    if not np.array_equal(completed[P.specified], P.entries[P.specified]):
        raise CompletionError("a specified entry changed during completion")
    eig = hermitian_eig(completed)
    psd = is_psd(eig, tol)
    if not psd:
        raise CompletionError(f"completed matrix is not PSD (lambda_min = {eig.eigenvalues[-1]:.3e})")

    hypotheses = all(r.hypotheses_hold for r in log)
    additive = all(r.rank_additive for r in log)
    zeros = verify_pinv_zero_pattern(P, completed, tol)
    warnings = []
    if not hypotheses:
        bad = [r.child for r in log if not r.hypotheses_hold]
        warnings.append(f"maximal-rank hypotheses fail when merging cliques {bad}")
    if not additive:
        warnings.append("rank is not additive over some merge")
    if not zeros.ok:
        warnings.append(f"pseudoinverse is nonzero at unspecified positions {zeros.violations}")
    return CompletionReport(
        completed=completed,
        psd=psd,
        rank=numerical_rank(eig, tol),
        rank_additive=additive,
        hypotheses_hold=hypotheses,
        pinv_zero_pattern_ok=zeros.ok,
        gendet_value=gendet(completed, tol),
        cliques=cliques,
        merge_log=log,
        warnings=warnings,
    )


def verify_pinv_zero_pattern(P: PartialHermitianMatrix, completed, tol: TolerancePolicy = DEFAULT_TOL,
                             atol: float = 1e-8) -> ZeroPatternReport:
    """Check ``|H^+[i, j]| <= atol * ||H^+||_F`` at every unspecified ``(i, j)``."""
    Hp = pinv(completed, tol)
    scale = np.linalg.norm(Hp)
    positions = P.unspecified_positions()
    if not positions or scale == 0:
        return ZeroPatternReport(True, 0.0, [])
    ratios = {(i, j): abs(Hp[i, j]) / scale for i, j in positions}
    violations = [pos for pos, r in ratios.items() if r > atol]
    return ZeroPatternReport(not violations, float(max(ratios.values())), violations)


def explicit_block_pinv(H, t: TriPartition, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse of a completed three-block matrix, block by block.

    With ``Sa = H[alpha]/C``, ``Sb = H[beta]/C``, and ``Sa+``, ``Sb+`` their
    pseudoinverses, the blocks in ``(alpha-gamma, gamma, beta-gamma)`` order
    are::

        [[Sa+,            -Sa+ B C+,  0         ],
         [-C+ B* Sa+,     Xi,         -C+ D Sb+ ],
         [0,              -Sb+ D* C+, Sb+       ]]

        Xi = C+ + C+ B* Sa+ B C+ + C+ D Sb+ D* C+

    ``t`` must partition all indices of ``H``; the result uses the original
    index order. Raises ``PreconditionError`` unless ``X = B C^+ D`` and both
    ``H[alpha]`` and ``H[beta]`` are PSD of maximal rank.
    """
    H = as_hermitian(H)
    n = H.shape[0]
    order = list(t.order)
    if sorted(order) != list(range(n)):
        raise ValueError("tri-partition must cover every index exactly once")
    if not (t.alpha_only and t.beta_only):
        raise ValueError("alpha - gamma and beta - gamma must be non-empty")
    for idx in (t.alpha, t.beta):
        if not is_psd(H[np.ix_(idx, idx)], tol):
            raise PreconditionError("clique block is not PSD")
    if not (_maximal_rank_split(H, t.alpha_only, t.gamma, tol) and _maximal_rank_split(H, t.gamma, t.beta_only, tol)):
        raise PreconditionError("clique blocks are not of maximal rank")
    A, B, C, D, E = _blocks(H, t)
    scale = float(np.max(np.abs(hermitian_eig(H).eigenvalues)))
    Cp = pinv(C, tol, scale) if t.gamma else np.zeros((0, 0), dtype=np.complex128)
    X = H[np.ix_(t.alpha_only, t.beta_only)]
    if np.linalg.norm(X - B @ Cp @ D) > 1e-8 * max(np.linalg.norm(H), 1.0):
        raise PreconditionError("H[alpha-gamma, beta-gamma] is not B C^+ D")

    Sa = pinv(as_hermitian(A - B @ Cp @ B.conj().T), tol, scale)
    Sb = pinv(as_hermitian(E - D.conj().T @ Cp @ D), tol, scale)
    CpBs = Cp @ B.conj().T  # C+ B*
    CpD = Cp @ D
    Xi = Cp + CpBs @ Sa @ CpBs.conj().T + CpD @ Sb @ CpD.conj().T
    a, g, b = len(t.alpha_only), len(t.gamma), len(t.beta_only)
    Z = np.zeros((a, b), dtype=np.complex128)
    blocks = np.block([
        [Sa, -(Sa @ CpBs.conj().T), Z],
        [-(CpBs @ Sa), Xi, -(CpD @ Sb)],
        [Z.T, -(Sb @ CpD.conj().T), Sb],
    ])
    out = np.empty_like(blocks)
    out[np.ix_(order, order)] = blocks
    return as_hermitian(out)


@dataclass
class MaximalityReport:
    status: str  # "passed", "failed" or "vacuous"
    reference: float
    sampled: int
    admissible: int
    best_ratio: float
    violations: list[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "passed"


def verify_det_maximality(P: PartialHermitianMatrix, completed, tol: TolerancePolicy = DEFAULT_TOL,
                          trials: int = 100, magnitude: float = 1e-3, rng=None,
                          rtol: float = 1e-9, window: float = 1e-12) -> MaximalityReport:
    """Search around ``completed`` for a better PSD completion of the same rank.

    Each trial adds a random Hermitian perturbation of entrywise modulus at
    most ``magnitude`` to the originally unspecified entries. A perturbed
    matrix is *admissible* if it is PSD with the rank of ``completed``,
    judged with the narrow ``window``: ``lam_min >= -window * lam_max`` and
    exactly ``r`` eigenvalues above ``window * lam_max``. A violation is an
    admissible matrix whose ``r`` leading eigenvalues have a product above
    ``gendet(completed) * (1 + rtol)``.

    The window is much narrower than the policy tolerances on purpose. A
    matrix with ``lam_min = -delta`` passes the policy PSD test for small
    ``delta``, yet pushing a null eigenvalue down lifts the others and can
    raise the product by ``O(delta)``. With ``delta`` near ``1e-9`` that gain
    is of the order of ``rtol`` itself.

    Sampling continues past ``trials`` until ``min(trials, 20)`` admissible
    matrices are found or ``50 * trials`` samples are spent. The status is
    "vacuous" if no sample was admissible.
    """
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    H = as_hermitian(completed)
    eig = hermitian_eig(H)
    ref = gendet(eig, tol)
    r = numerical_rank(eig, tol)
    top = float(np.max(np.abs(eig.eigenvalues)))
    positions = P.unspecified_positions()
    if not positions or magnitude == 0 or trials <= 0:
        return MaximalityReport("passed", ref, 0, 0, 1.0 if positions else float("nan"))
    rows, cols = (np.array(x) for x in zip(*positions))
    kernel = eig.vectors[:, r:]
    Hp = pinv(eig, tol)
    wanted = min(trials, 20)
    sampled = admissible = 0
    best = -np.inf
    violations = []
    while sampled < 50 * trials and (sampled < trials or admissible < wanted):
        sampled += 1
        size = len(positions)
        delta = magnitude * rng.uniform(0, 1, size) * np.exp(2j * np.pi * rng.uniform(0, 1, size))
        K = np.array(H)
        K[rows, cols] += delta
        K[cols, rows] += delta.conj()
        if kernel.shape[1]:
            # cheap rejection: the Rayleigh quotient of any vector bounds lam_min(K) from above;
            # x = v - H^+ Delta v follows the null vector v of H to second order
            X = kernel - Hp @ ((K - H) @ kernel)
            quotients = np.real(np.einsum("pi,pi->i", X.conj(), K @ X)) / np.real(np.einsum("pi,pi->i", X.conj(), X))
            if quotients.min() < -window * (top + 2 * np.linalg.norm(delta)):
                continue
        w = hermitian_eig(K).eigenvalues
        cut = window * w[0]
        if w[-1] < -cut or np.count_nonzero(np.abs(w) > cut) != r:
            continue
        admissible += 1
        value = float(np.prod(w[:r]))
        ratio = value / ref
        best = max(best, ratio)
        if value > ref * (1 + rtol):
            violations.append(ratio)
    status = "vacuous" if admissible == 0 else ("failed" if violations else "passed")
    return MaximalityReport(status, ref, sampled, admissible, float(best), violations)
