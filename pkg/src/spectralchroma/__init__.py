"""spectralchroma: eigenvalue-sum and semidefinite bounds for graph coloring.

Computes the Lovász theta number, its weighted trace-level generalization,
Hoffman-style eigenvalue-sum bounds, exact and fractional chromatic numbers,
and a certified integer bracket for the eigenvalue-sum threshold h(G), with
machine-checkable witnesses for every bound.
"""

__version__ = "0.1.0"

from .graphs import (
    FamilySpec,
    Graph,
    adjacency_matrix,
    complement,
    complete,
    complete_multipartite,
    cycle,
    empty,
    erdos_renyi,
    generate,
    kneser,
    petersen,
)
from .formats import encode_graph6, parse_dimacs, parse_edge_list, parse_graph6
from .linalg import EigenDecomposition, cholesky_spd, eigh, eigvalsh, kyfan_sum, solve_spd
from .lp import LinearProgram, LPSolution, solve_lp
from .sdp import BlockSdp, SdpSolution, check_solution, sdp_from_json, sdp_to_json, solve_sdp
from .theta import (
    ThetaKResult,
    evaluate_Z,
    interpolate_dual,
    lovasz_theta,
    recover_primal_from_Z,
    theta_k,
    theta_k_dual,
    theta_k_primal,
)
from .chromatic import (
    FractionalColoring,
    chromatic_number,
    equality_form,
    fractional_chromatic,
    maximal_cocliques,
    stability_number,
)
from .hoffman import (
    HBracket,
    h_bracket,
    hoffman_bound,
    hoffman_partial_sum,
    min_k_for_weight,
    ratio_bound,
    w_search_refute,
    w_to_z,
    z_search,
    z_to_w,
)
from .certify import (
    ChainReport,
    ColoringCertificate,
    builtin_corpus,
    certificate_from_coloring,
    verify_chain,
    verify_dual_feasible,
)

__all__ = [
    "__version__",
    "FamilySpec", "Graph", "adjacency_matrix", "complement", "complete",
    "complete_multipartite", "cycle", "empty", "erdos_renyi", "generate",
    "kneser", "petersen",
    "encode_graph6", "parse_dimacs", "parse_edge_list", "parse_graph6",
    "EigenDecomposition", "cholesky_spd", "eigh", "eigvalsh", "kyfan_sum", "solve_spd",
    "LinearProgram", "LPSolution", "solve_lp",
    "BlockSdp", "SdpSolution", "check_solution", "sdp_from_json", "sdp_to_json", "solve_sdp",
    "ThetaKResult", "evaluate_Z", "interpolate_dual", "lovasz_theta",
    "recover_primal_from_Z", "theta_k", "theta_k_dual", "theta_k_primal",
    "FractionalColoring", "chromatic_number", "equality_form",
    "fractional_chromatic", "maximal_cocliques", "stability_number",
    "HBracket", "h_bracket", "hoffman_bound", "hoffman_partial_sum",
    "min_k_for_weight", "ratio_bound", "w_search_refute", "w_to_z", "z_search", "z_to_w",
    "ChainReport", "ColoringCertificate", "builtin_corpus",
    "certificate_from_coloring", "verify_chain", "verify_dual_feasible",
]
