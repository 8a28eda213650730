"""tuve: vertex enumeration for covering polyhedra of 0/1 TU matrices."""

from .hypergraph import (
    Hypergraph,
    ParseError,
    ReductionTrace,
    StructuralViolation,
    VertexSet,
    canonicalize,
    conjunction,
    contract,
    disjunction,
    format_hypergraph,
    induced,
    is_minimal_transversal,
    minimize,
    parse_hypergraph,
    project,
    trace_class,
)
from .oracle import (
    BudgetExceeded,
    TransversalSet,
    VerificationResult,
    berge_dualize,
    verify_dual_pair,
)
from .tumatrix import (
    A0,
    TreeRepresentation,
    TUMatrix,
    format_matrix,
    generate_network_instance,
    hypergraph_of,
    is_totally_unimodular,
    parse_matrix,
    recognize_network,
)
from .decomp import (
    CaseTag,
    DecompositionCase,
    DetectBudget,
    detect,
    validate,
)
from .dualizer import (
    DualizationStats,
    DualizerConfig,
    combine_1sum,
    combine_2sum,
    dual_H0,
    dualize,
    reduce_special,
    solve_case1,
    solve_case2,
    solve_case3,
)
from .cli import (
    EnumerationSummary,
    Vector01,
    dual_polyhedron_vertices,
    enumerate_vertices,
    extreme_directions,
    transversal_to_vertex,
)

__version__ = "0.1.0"
