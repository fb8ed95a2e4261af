"""
MAX 솔버 모듈

정확한 분기 한정 탐색과 근사 솔버 (BT, NG, BS, AMAP, KBT)
"""

from ..spn.result import SolveStatus, SolveResult, SearchStats
from .budget import Deadline, SolverTimeout
from .best_tree import best_tree, best_tree_value, normalized_greedy
from .kbt import TopKList, merge_sum, merge_product, top_k_lists, k_best_trees
from .beam import BeamState, BeamSearch, beam_search
from .amap import argmax_product
from .exact import (
    SearchConfig,
    ExactSolver,
    marginal_checking,
    forward_checking,
    forward_checking_table,
    choose_variable,
    order_values,
    stage_reduce,
    max_exact,
)
from .registry import (
    SolverSpec,
    parse_solver,
    parse_solver_list,
    load_lineups,
    resolve_solvers,
)

__all__ = [
    "SolveStatus",
    "SolveResult",
    "SearchStats",
    "Deadline",
    "SolverTimeout",
    "best_tree",
    "best_tree_value",
    "normalized_greedy",
    "TopKList",
    "merge_sum",
    "merge_product",
    "top_k_lists",
    "k_best_trees",
    "BeamState",
    "BeamSearch",
    "beam_search",
    "argmax_product",
    "SearchConfig",
    "ExactSolver",
    "marginal_checking",
    "forward_checking",
    "forward_checking_table",
    "choose_variable",
    "order_values",
    "stage_reduce",
    "max_exact",
    "SolverSpec",
    "parse_solver",
    "parse_solver_list",
    "load_lineups",
    "resolve_solvers",
]
