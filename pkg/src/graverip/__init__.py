"""Graver-basis augmentation for two-stage and multi-stage stochastic integer programs."""
from .blockip import Solution, solve_small_ip
from .cones import GeneratorSet, cone_member, intersect_many, intersect_two
from .core import Cycle, IntMatrix, TwoStageInstance, assemble_matrix, validate_instance
from .errors import BudgetExceeded, IncompleteBasis, InvalidInstance
from .formats import ParseError, parse_instance, serialize_instance
from .graver import GraverBasis, decompose_into_graver, graver_basis, graver_norm_bound
from .lowerbound import gen_encoded, gen_harmonic, growth_table, min_first_coordinate
from .multistage import TreeInstance, build_tree, solve_multistage, tower_bound
from .steinitz import prefix_radius, steinitz_reorder
from .subrep import VectorMultiset, find_common_submultisets, subrep_size_bound
from .twostage import SolveReport, SolverConfig, best_cycle, solve, two_stage_graver_bound

__all__ = [
    "BudgetExceeded", "Cycle", "GeneratorSet", "GraverBasis", "IncompleteBasis", "IntMatrix",
    "InvalidInstance", "ParseError", "Solution", "SolveReport", "SolverConfig", "TreeInstance",
    "TwoStageInstance", "VectorMultiset", "assemble_matrix", "best_cycle", "build_tree", "cone_member",
    "decompose_into_graver", "find_common_submultisets", "gen_encoded", "gen_harmonic", "graver_basis",
    "graver_norm_bound", "growth_table", "intersect_many", "intersect_two", "min_first_coordinate",
    "parse_instance", "prefix_radius", "serialize_instance", "solve", "solve_multistage",
    "solve_small_ip", "steinitz_reorder", "subrep_size_bound", "tower_bound", "two_stage_graver_bound",
    "validate_instance",
]
