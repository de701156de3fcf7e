"""Search with dynamic heuristics: engine, oracle and verification layer."""

from .costs import INF, Cost
from .transition_system import (
    FormatError,
    GenerationError,
    Path,
    Transition,
    TransitionSystem,
    generate_random,
    parse,
    path_cost,
    serialize,
    validate,
)
from .oracle import gstar_all, hstar_all, optimal_solution_cost
from .info import (
    ContractViolation,
    InformationSource,
    ProgressionSource,
    StateMap,
    enumerate_reachable_infos,
    extract_path,
    landmark_source,
    lazy_source,
    monotonic_wrap,
    parent_source,
    progression_to_information,
    scripted_source,
)
from .heuristics import (
    DynamicHeuristic,
    PropertyVerdict,
    check_property,
    hlm,
    label_landmarks,
    lazy_heuristic,
    oracle_family,
    scripted_heuristic,
    static_adapter,
)
from .framework import (
    DeclareSolvable,
    DeclareUnsolvable,
    FrameworkState,
    GenKnown,
    GenUnknown,
    Refine,
    applicable_operations,
    apply_operation,
    run_policy,
)
from .dynastar import SearchResult, search
from .verify import assert_optimal, optex, popped_f_nondecreasing, reopen_count

__version__ = "0.1.0"
