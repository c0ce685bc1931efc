"""Dense shallow topological minors: exact solvers, hardness reductions, certificates."""

from .graph import Graph, GraphError, density, smooth_vertex, subdivide_edge
from .matching import SD1, STM_HALF, build_aux_graph, densest_fixed_nails, max_bipartite_matching
from .models import SHALLOW, SUBDIVISION, MinorSummary, ModelError, TopoMinorModel, minor_graph, verify_model
from .reductions import (
    CnfFormula,
    Positive1in3Formula,
    assignment_to_model,
    build_parity_reduction,
    check_1in3,
    eliminate_negations,
    ensure_min_frequency,
)
from .solvers import (
    SearchBudgetExceeded,
    SolveLimits,
    brute_force_densest,
    dense_bipartite_subdivision,
    densest_depth1_exact,
    densest_subgraph,
)
from .treedecomp import TreeDecomposition, verify_tree_decomposition
from .twreduction import (
    build_tw_reduction,
    cop_tree_decomposition,
    pad_formula,
    structured_tw_search,
    tw_assignment_to_model,
)

__version__ = "0.1.0"
