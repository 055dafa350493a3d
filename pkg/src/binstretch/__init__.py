"""Exact solvers, strategy-tree proofs and convergence arithmetic for
online bin stretching at integer granularity.

The two game solvers bracket the optimal stretching factor from both
sides, proofs round-trip through a canonical JSON format with an
independent verifier, and the lifting machinery turns an optimal
lower-game policy into an upper-game strategy with a checked
performance bound.
"""

from binstretch.bounds import (
    BoundReport,
    implied_lower_bound,
    inner_granularity_real,
    render_decimal,
    report_implied,
    report_sandwich,
    sandwich_interval,
)
from binstretch.core import (
    VERSION as __version__,
    Config,
    InvariantError,
    Multiset,
    ResourceLimitExceeded,
    Score,
    canonicalize,
    distinct_bin_moves,
    place,
)
from binstretch.feasibility import (
    KERNEL_BACKEND,
    FeasibilityOracle,
    Packing,
    PreconditionError,
    find_packing,
    fits,
    repack_incremented,
)
from binstretch.lifting import (
    InnerInfeasibilityError,
    LiftedAlgorithm,
    LiftReport,
    PlayoutRecord,
    delta_in_bounds,
    evaluate_lifted,
    evaluate_lifted_report,
    inner_granularity,
    lift_observe_overflow,
    lift_step,
    performance_bound_holds,
    run_playout,
)
from binstretch.lower_game import (
    AdversaryNode,
    IllegalSequenceError,
    LowerGamePolicy,
    LowerGameSolver,
    LowerState,
    algorithm_policy,
    extract_adversary_strategy,
    legal_items_lower,
    solve_lower,
)
from binstretch.proofs import (
    IncompleteStrategyError,
    InfeasibleItemError,
    MalformedTreeError,
    ProofDocument,
    ProofError,
    ProofParseError,
    deserialize,
    lower_proof_document,
    read_proof,
    serialize,
    upper_proof_document,
    verify,
    verify_lower,
    verify_upper,
    write_proof,
)
from binstretch.upper_game import (
    AlgorithmMove,
    AlgorithmNode,
    UpperGameSolver,
    UpperState,
    extract_algorithm_strategy,
    legal_moves_upper,
    solve_upper,
)

__all__ = [
    "__version__",
    "AdversaryNode",
    "AlgorithmMove",
    "AlgorithmNode",
    "BoundReport",
    "Config",
    "FeasibilityOracle",
    "IllegalSequenceError",
    "IncompleteStrategyError",
    "InfeasibleItemError",
    "InnerInfeasibilityError",
    "InvariantError",
    "KERNEL_BACKEND",
    "LiftReport",
    "LiftedAlgorithm",
    "LowerGamePolicy",
    "LowerGameSolver",
    "LowerState",
    "MalformedTreeError",
    "Multiset",
    "Packing",
    "PlayoutRecord",
    "PreconditionError",
    "ProofDocument",
    "ProofError",
    "ProofParseError",
    "ResourceLimitExceeded",
    "Score",
    "UpperGameSolver",
    "UpperState",
    "algorithm_policy",
    "canonicalize",
    "delta_in_bounds",
    "deserialize",
    "distinct_bin_moves",
    "evaluate_lifted",
    "evaluate_lifted_report",
    "extract_adversary_strategy",
    "extract_algorithm_strategy",
    "find_packing",
    "fits",
    "implied_lower_bound",
    "inner_granularity",
    "inner_granularity_real",
    "legal_items_lower",
    "legal_moves_upper",
    "lift_observe_overflow",
    "lift_step",
    "lower_proof_document",
    "performance_bound_holds",
    "place",
    "read_proof",
    "render_decimal",
    "repack_incremented",
    "report_implied",
    "report_sandwich",
    "run_playout",
    "sandwich_interval",
    "serialize",
    "solve_lower",
    "solve_upper",
    "upper_proof_document",
    "verify",
    "verify_lower",
    "verify_upper",
    "write_proof",
]
