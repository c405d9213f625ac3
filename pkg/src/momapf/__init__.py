"""Multi-objective multi-agent path finding: MO-CBS, MO-SIPP and brute-force oracles on grid maps."""
from .conflicts import Conflict, detect_first_conflict, split_conflict
from .instance import CostModelSpec, Instance, Scenario, build_costs, parse_map, parse_scen
from .lowlevel import Constraint, boa_st, build_heuristic, namoa_dr_st
from .model import EdgeCosts, GridGraph, dominates, dominates_or_equal, lex_less, pareto_front
from .mocbs import Metrics, SolutionFront, SolveResult, solve
from .mosipp import ObstacleTrajectory, compute_safe_intervals, mosipp_solve
from .oracle import joint_front_bruteforce, single_agent_front_bruteforce

__all__ = [
    "Conflict", "Constraint", "CostModelSpec", "EdgeCosts", "GridGraph", "Instance", "Metrics",
    "ObstacleTrajectory", "Scenario", "SolutionFront", "SolveResult", "boa_st", "build_costs",
    "build_heuristic", "compute_safe_intervals", "detect_first_conflict", "dominates",
    "dominates_or_equal", "joint_front_bruteforce", "lex_less", "mosipp_solve", "namoa_dr_st",
    "pareto_front", "parse_map", "parse_scen", "single_agent_front_bruteforce", "solve", "split_conflict",
]
__version__ = "0.1.0"
