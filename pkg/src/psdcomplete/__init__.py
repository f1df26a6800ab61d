"""Positive semidefinite completion of partial Hermitian matrices.

The completion fills a partial matrix with a chordal specification pattern
clique by clique, setting each unspecified block to ``X = B C^+ D``. Under
maximal-rank hypotheses this completion is the unique one that maximizes the
generalized determinant, and its pseudoinverse vanishes where the input was
unspecified.
"""
from .chordal import (
    ChordalityResult,
    CliqueTree,
    MergeStep,
    PatternGraph,
    clique_tree,
    is_chordal,
    is_perfect_elimination_order,
    maximal_cliques,
    mcs_order,
    pattern_graph,
)
from .completion import (
    CliqueNotPSDError,
    CompletionError,
    CompletionReport,
    MaximalityReport,
    NotChordalError,
    PartialHermitianMatrix,
    TriPartition,
    ZeroPatternReport,
    complete,
    complete_edge,
    explicit_block_pinv,
    rank_additivity_check,
    verify_det_maximality,
    verify_pinv_zero_pattern,
)
from .fileio import ParseError, format_partial, parse_partial, read_partial, write_partial
from .linalg import (
    DEFAULT_TOL,
    ConvergenceError,
    EigenDecomposition,
    TolerancePolicy,
    as_hermitian,
    hermitian_eig,
    is_psd,
    numerical_rank,
    pinv,
    range_projector,
)
from .semidefinite import (
    BlockPartition,
    BlockView,
    FischerReport,
    PreconditionError,
    SchurDetReport,
    banachiewicz_pinv,
    column_inclusion_holds,
    gendet,
    gendet_limit,
    is_maximal_rank,
    nullspace_direct_sum_check,
    schur_complement,
    split,
    verify_fischer,
    verify_schur_det,
)

__version__ = "0.1.0"
