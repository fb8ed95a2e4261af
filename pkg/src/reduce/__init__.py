"""
변환 모듈

MAP → MAX 변환, 트리 BN → SPN 컴파일, 문제 파일 파서
"""

from .problem import (
    MapProblem,
    parse_assignment,
    parse_problem,
    parse_problems,
    load_problems,
    format_problems,
)
from .map2max import ensure_sum_root, map_to_max, simplify
from .bn import (
    TreeBn,
    BnCompiler,
    parse_bn,
    serialize_bn,
    load_bn,
    bn_to_spn,
    random_tree_bn,
)

__all__ = [
    "MapProblem",
    "parse_assignment",
    "parse_problem",
    "parse_problems",
    "load_problems",
    "format_problems",
    "ensure_sum_root",
    "map_to_max",
    "simplify",
    "TreeBn",
    "BnCompiler",
    "parse_bn",
    "serialize_bn",
    "load_bn",
    "bn_to_spn",
    "random_tree_bn",
]
