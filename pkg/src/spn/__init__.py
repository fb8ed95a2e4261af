"""
SPN 코어 모듈

데이터 모델, 텍스트 포맷, 구조 검증, 순방향/도함수 평가, 오라클
"""

from .models import (
    NodeKind,
    Node,
    VariableTable,
    Spn,
    ParseTree,
    SpnStats,
    spn_stats,
    compact_nodes,
)
from .evidence import PartialEvidence
from .inference import (
    DerivativeTable,
    node_values,
    evaluate,
    score,
    subnetwork_value,
    derivatives,
)
from .validation import FailureKind, ValidationReport, validate
from .parser import parse_spn, serialize_spn, load_spn, save_spn
from .result import SolveStatus, SolveResult, SearchStats
from .oracle import count_parse_trees, enumerate_parse_trees, brute_force_max
from .generator import random_spn

__all__ = [
    "NodeKind",
    "Node",
    "VariableTable",
    "Spn",
    "ParseTree",
    "SpnStats",
    "spn_stats",
    "compact_nodes",
    "PartialEvidence",
    "DerivativeTable",
    "node_values",
    "evaluate",
    "score",
    "subnetwork_value",
    "derivatives",
    "FailureKind",
    "ValidationReport",
    "validate",
    "parse_spn",
    "serialize_spn",
    "load_spn",
    "save_spn",
    "SolveStatus",
    "SolveResult",
    "SearchStats",
    "count_parse_trees",
    "enumerate_parse_trees",
    "brute_force_max",
    "random_spn",
]
