"""divmax: diversity maximization on social graphs.

Given an undirected weighted graph and a +/-1 exposure vector, select a
budget-feasible set of nodes whose exposure flips maximize the network's
diversity index.  The package provides the graph/objective core, greedy and
relaxation-based solvers, exact search, instance-specific upper bounds,
generators, and a benchmarking CLI.
"""

__version__ = "0.1.0"

from .bounds import BoundReport, bound_eigen, bound_gersh, bound_rowsum, compute_bounds
from .exact import branch_and_bound, enumerate_exact
from .generators import gen_random_exposure, gen_subsetsum, gen_two_community
from .glover import compute_LU, export_lp, round_lp, solve_glover, solve_glover_relaxation
from .graph import (
    FlipSet,
    Graph,
    Instance,
    ObjectiveMatrix,
    apply_flips,
    build_graph,
    build_objective,
    diversity_index,
    objective_gain,
    unit_instance,
)
from .greedy import GreedyConfig, i_greedy, local_search, marginal_gain, s_greedy
from .karate import karate_exposure, karate_graph, karate_instance
from .profiling import NodeProfile, node_profile, pagerank
from .report import SolverReport
from .sdp import (
    SdpProblem,
    SdpSolution,
    export_sdpa,
    gaussian_round,
    import_sdpa_solution,
    solve_sdp,
    solve_sdp_relaxation,
)

__all__ = [
    "BoundReport", "bound_eigen", "bound_gersh", "bound_rowsum", "compute_bounds",
    "branch_and_bound", "enumerate_exact",
    "gen_random_exposure", "gen_subsetsum", "gen_two_community",
    "compute_LU", "export_lp", "round_lp", "solve_glover", "solve_glover_relaxation",
    "FlipSet", "Graph", "Instance", "ObjectiveMatrix", "apply_flips", "build_graph",
    "build_objective", "diversity_index", "objective_gain", "unit_instance",
    "GreedyConfig", "i_greedy", "local_search", "marginal_gain", "s_greedy",
    "karate_exposure", "karate_graph", "karate_instance",
    "NodeProfile", "node_profile", "pagerank",
    "SolverReport",
    "SdpProblem", "SdpSolution", "export_sdpa", "gaussian_round",
    "import_sdpa_solution", "solve_sdp", "solve_sdp_relaxation",
    "__version__",
]
