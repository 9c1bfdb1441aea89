"""Exact walk counting and spectral branching-ratio analysis for directed
multigraphs."""

from branchtool.graph import (
    GraphError,
    MultiGraph,
    UnknownNodeError,
    adjacency_matrix,
    induced_subgraph,
    is_acyclic,
    parse_edge_list,
    serialize_edge_list,
)
from branchtool.growth import (
    AsymptoticProfile,
    BranchingRatioReport,
    InsufficientDataError,
    ResidueFit,
    SandwichCheck,
    branching_ratio,
    critical_modulus,
    degree_bound,
    fit_asymptotics,
    sandwich_check,
)
from branchtool.scc import (
    NotStronglyConnectedError,
    SccDecomposition,
    SccPeriod,
    UpstreamSet,
    block_triangular_order,
    scc_decompose,
    scc_period,
    upstream,
)
from branchtool.spectral import (
    GdPolynomial,
    NumericalError,
    PerronData,
    SpectrumEstimate,
    cesaro_average,
    char_poly,
    gd_polynomial,
    perron,
    perron_projection,
    rho_equal,
    spectrum_small,
)
from branchtool.walks import (
    BudgetExceededError,
    InputTree,
    RatioDiagnostics,
    RatioVerdict,
    TreeNode,
    WalkCountSeries,
    all_walk_counts,
    brute_force_walk_count,
    empirical_branching_ratio,
    enumeration_budget,
    input_tree,
    ratio_sequence,
    tree_to_dict,
    tree_to_text,
    walk_counts,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticProfile",
    "BranchingRatioReport",
    "BudgetExceededError",
    "GdPolynomial",
    "GraphError",
    "InputTree",
    "InsufficientDataError",
    "MultiGraph",
    "NotStronglyConnectedError",
    "NumericalError",
    "PerronData",
    "RatioDiagnostics",
    "RatioVerdict",
    "ResidueFit",
    "SandwichCheck",
    "SccDecomposition",
    "SccPeriod",
    "SpectrumEstimate",
    "TreeNode",
    "UnknownNodeError",
    "UpstreamSet",
    "WalkCountSeries",
    "adjacency_matrix",
    "all_walk_counts",
    "block_triangular_order",
    "branching_ratio",
    "brute_force_walk_count",
    "cesaro_average",
    "char_poly",
    "critical_modulus",
    "degree_bound",
    "empirical_branching_ratio",
    "enumeration_budget",
    "fit_asymptotics",
    "gd_polynomial",
    "induced_subgraph",
    "input_tree",
    "is_acyclic",
    "parse_edge_list",
    "perron",
    "perron_projection",
    "ratio_sequence",
    "rho_equal",
    "sandwich_check",
    "scc_decompose",
    "scc_period",
    "serialize_edge_list",
    "spectrum_small",
    "tree_to_dict",
    "tree_to_text",
    "upstream",
    "walk_counts",
    "__version__",
]
