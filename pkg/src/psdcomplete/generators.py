"""Random test matrices and partial matrices with controlled rank structure."""
from __future__ import annotations

import numpy as np

from .chordal import PatternGraph, clique_tree, maximal_cliques
from .linalg import as_hermitian, hermitian_eig, is_psd
from .semidefinite import is_maximal_rank

__all__ = [
    "complex_gaussian",
    "random_unitary",
    "random_gram",
    "random_psd",
    "random_maximal_rank",
    "random_graph",
    "random_chordal_graph",
    "random_partial",
]


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def complex_gaussian(shape, rng=None) -> np.ndarray:
    rng = _rng(rng)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(n: int, rng=None) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a complex Gaussian matrix."""
    Q, R = np.linalg.qr(complex_gaussian((n, n), rng))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_gram(n: int, r: int | None = None, rng=None) -> np.ndarray:
    """``G G*`` for a complex Gaussian ``G`` of shape ``n x r`` (rank ``min(n, r)``)."""
    G = complex_gaussian((n, n if r is None else r), rng)
    return as_hermitian(G @ G.conj().T)


def random_psd(n: int, r: int | None = None, rng=None, spread: float = 10.0) -> np.ndarray:
    """PSD matrix of exact rank ``r`` with nonzero eigenvalues log-uniform in ``[1, spread]``."""
    rng = _rng(rng)
    r = n if r is None else r
    U = random_unitary(n, rng)[:, :r]
    lam = np.exp(rng.uniform(0, np.log(spread), r))
    return as_hermitian((U * lam) @ U.conj().T)


def random_maximal_rank(
    n: int,
    k: int,
    rank_a: int | None = None,
    rank_c: int | None = None,
    rng=None,
    zero_b: bool = False,
    max_halvings: int = 60,
) -> np.ndarray:
    """PSD ``[[A, B], [B*, C]]`` with ``rank H = rank A + rank C``.

    ``A`` and ``C`` are positive definite on random subspaces of the requested
    ranks and ``B = beta * P_A G P_C`` for the range projectors ``P_A, P_C``,
    which builds in column inclusion. ``beta`` starts at 1 and is halved until
    the result is PSD and of maximal rank with a visible spectral gap.
    """
    rng = _rng(rng)
    l = n - k
    rank_a = k if rank_a is None else rank_a
    rank_c = l if rank_c is None else rank_c
    if not (1 <= k < n and 0 <= rank_a <= k and 0 <= rank_c <= l):
        raise ValueError("inconsistent sizes")
    A = random_psd(k, rank_a, rng)
    C = random_psd(l, rank_c, rng)
    if zero_b:
        return as_hermitian(np.block([[A, np.zeros((k, l))], [np.zeros((l, k)), C]]))
    Ua = hermitian_eig(A).vectors[:, :rank_a]
    Uc = hermitian_eig(C).vectors[:, :rank_c]
    B0 = Ua @ Ua.conj().T @ complex_gaussian((k, l), rng) @ Uc @ Uc.conj().T
    beta = 1.0
    r = rank_a + rank_c
    for _ in range(max_halvings):
        H = as_hermitian(np.block([[A, beta * B0], [beta * B0.conj().T, C]]))
        w = hermitian_eig(H).eigenvalues
        gap_ok = r == 0 or w[r - 1] > 1e-6 * w[0]
        if is_psd(H) and gap_ok and is_maximal_rank(H, k):
            return H
        beta /= 2
    raise RuntimeError("could not generate a maximal-rank matrix")


def random_graph(n: int, p: float = 0.5, rng=None) -> PatternGraph:
    """Erdos-Renyi graph ``G(n, p)``."""
    rng = _rng(rng)
    upper = np.triu(rng.random((n, n)) < p, 1)
    return PatternGraph(upper | upper.T)


def random_chordal_graph(n: int, p: float = 0.3, rng=None) -> PatternGraph:
    """Triangulate ``G(n, p)`` by the elimination game on a random vertex order."""
    rng = _rng(rng)
    adj = np.array(random_graph(n, p, rng).adjacency)
    eliminated = np.zeros(n, dtype=bool)
    for v in rng.permutation(n):
        later = np.flatnonzero(adj[v] & ~eliminated)
        adj[np.ix_(later, later)] = True
        eliminated[v] = True
    np.fill_diagonal(adj, False)
    return PatternGraph(adj)


def _psd_with_kernel(m: int, support: np.ndarray, nullity: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """PSD ``m x m`` matrix whose null space is spanned by ``nullity`` random vectors on ``support``.

    Returns the matrix and the orthogonal projector onto its range.
    """
    if nullity == m:
        return np.zeros((m, m), dtype=np.complex128), np.zeros((m, m))
    N = np.zeros((m, nullity), dtype=np.complex128)
    if nullity:
        N[support] = complex_gaussian((len(support), nullity), rng)
        N, _ = np.linalg.qr(N)
    proj = np.eye(m) - N @ N.conj().T
    core = random_psd(m, m, rng)
    S = proj @ core @ proj
    return as_hermitian((S + S.conj().T) / 2), proj


def random_partial(G: PatternGraph, kind: str = "pd", rng=None, rank: int | None = None):
    """Partial Hermitian matrix on the pattern of ``G`` with PSD clique blocks.

    ``kind`` selects the data:

    ``"pd"``
        a random positive definite matrix restricted to the pattern;
    ``"maximal_rank"``
        singular clique blocks built so that every merge of the completion
        satisfies the maximal-rank hypotheses: null vectors live only on
        coordinates that appear in no clique separator, and each new block
        ``[[C, D], [D*, E]]`` uses ``D = C Z P`` and ``E = P Z* C Z P + S``
        with ``P`` the range projector of the PSD Schur complement ``S``;
    ``"gram"``
        a rank-``rank`` Gram matrix restricted to the pattern (clique blocks
        PSD, hypotheses usually violated).

    Returns the ``PartialHermitianMatrix``.
    """
    from .completion import PartialHermitianMatrix

    rng = _rng(rng)
    n = G.n
    mask = G.adjacency | np.eye(n, dtype=bool)
    if kind == "pd":
        M = random_psd(n, n, rng)
    elif kind == "gram":
        M = random_gram(n, rank if rank is not None else max(1, n // 2), rng)
    elif kind == "maximal_rank":
        M = _maximal_rank_data(G, rng)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return PartialHermitianMatrix(np.where(mask, M, 0), mask)


def _maximal_rank_data(G: PatternGraph, rng) -> np.ndarray:
    cliques = maximal_cliques(G)
    tree = clique_tree(cliques)
    exposed = set()
    for _, _, sep in tree.edges:
        exposed |= set(sep)

    def new_block(idx):
        free = np.array([i for i, v in enumerate(idx) if v not in exposed], dtype=int)
        nullity = int(rng.integers(0, len(free) + 1))
        return _psd_with_kernel(len(idx), free, nullity, rng)

    M = np.zeros((G.n, G.n), dtype=np.complex128)
    root = list(cliques[tree.root])
    M[np.ix_(root, root)], _ = new_block(root)
    for step in tree.merge_order:
        gamma = list(step.separator)
        nu = [v for v in cliques[step.child] if v not in step.separator]
        S, proj = new_block(nu)
        if not gamma:
            M[np.ix_(nu, nu)] = S
            continue
        C = M[np.ix_(gamma, gamma)]
        Z = 0.5 * complex_gaussian((len(gamma), len(nu)), rng)
        D = C @ Z @ proj
        E = proj @ Z.conj().T @ C @ Z @ proj + S
        M[np.ix_(gamma, nu)] = D
        M[np.ix_(nu, gamma)] = D.conj().T
        M[np.ix_(nu, nu)] = (E + E.conj().T) / 2
    return M
