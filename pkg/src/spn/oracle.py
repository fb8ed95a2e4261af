"""
지수 시간 오라클 (테스트 및 소규모 검증 전용)

- enumerate_parse_trees: 모든 파스 트리 열거
- brute_force_max: 전수 탐색 MAX
"""

import itertools
import logging
import time
from typing import Optional

from ..config import settings
from ..errors import OracleLimitError
from .evidence import PartialEvidence
from .inference import node_values
from .models import NodeKind, ParseTree, Spn
from .result import SearchStats, SolveResult, SolveStatus

logger = logging.getLogger(__name__)

# (값, 선택 목록, 부분 할당)
_Partial = tuple[float, tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]


def count_parse_trees(spn: Spn) -> int:
    """파스 트리 개수 (정수 연산, 열거하지 않음)"""
    counts = [0] * len(spn.nodes)
    for node_id, node in enumerate(spn.nodes):
        if node.kind is NodeKind.INDICATOR:
            counts[node_id] = 1
        elif node.kind is NodeKind.SUM:
            counts[node_id] = sum(counts[child] for child in node.children)
        else:
            total = 1
            for child in node.children:
                total *= counts[child]
            counts[node_id] = total
    return counts[-1]


def enumerate_parse_trees(spn: Spn, cap: Optional[int] = None) -> list[ParseTree]:
    """
    모든 파스 트리를 결정적 순서(자식 인덱스 사전순)로 한 번씩 열거

    Args:
        spn: 유효한 SPN (테스트 규모)
        cap: 트리 개수 상한 (기본값 settings.parse_tree_cap)

    Returns:
        ParseTree 리스트

    Raises:
        OracleLimitError: 트리 개수가 상한을 넘는 경우
    """
    cap = settings.parse_tree_cap if cap is None else cap
    total = count_parse_trees(spn)
    if total > cap:
        raise OracleLimitError("파스 트리 개수가 상한을 넘었습니다", total, cap)

    partials: list[list[_Partial]] = [[] for _ in spn.nodes]
    reachable = spn.reachable()

    for node_id, node in enumerate(spn.nodes):
        if node_id not in reachable:
            continue
        if node.kind is NodeKind.INDICATOR:
            partials[node_id] = [(1.0, (), ((node.var, node.value),))]
        elif node.kind is NodeKind.SUM:
            trees: list[_Partial] = []
            for child, weight in zip(node.children, node.weights):
                for value, choices, assignment in partials[child]:
                    trees.append((weight * value, ((node_id, child),) + choices, assignment))
            partials[node_id] = trees
        else:
            trees = []
            for combo in itertools.product(*(partials[child] for child in node.children)):
                value = 1.0
                choices: tuple[tuple[int, int], ...] = ()
                assignment: tuple[tuple[int, int], ...] = ()
                for part_value, part_choices, part_assignment in combo:
                    value *= part_value
                    choices += part_choices
                    assignment += part_assignment
                trees.append((value, choices, assignment))
            partials[node_id] = trees

    result = []
    for value, choices, assignment in partials[-1]:
        full = [0] * spn.num_vars
        for var, val in assignment:
            full[var] = val
        result.append(ParseTree(tuple(sorted(choices)), tuple(full), value))

    logger.debug(f"파스 트리 {len(result)}개 열거")
    return result


def brute_force_max(spn: Spn, cap: Optional[int] = None) -> SolveResult:
    """
    전수 탐색으로 정확한 MAX 계산

    루트 스코프 변수만 열거하고 스코프 밖 변수는 0으로 둔다. 동점이면 사전순으로 가장 작은 할당.

    Raises:
        OracleLimitError: 할당 개수가 상한을 넘는 경우
    """
    cap = settings.brute_force_cap if cap is None else cap
    started = time.perf_counter()

    scope = spn.scope_variables
    total = spn.variables.num_assignments(scope)
    if total > cap:
        raise OracleLimitError("전수 탐색 할당 개수가 상한을 넘었습니다", total, cap)

    buffer = [0.0] * len(spn.nodes)
    current = [0] * spn.num_vars
    best_score = float("-inf")
    best: Optional[tuple[int, ...]] = None

    ranges = [range(spn.variables.cardinality(var)) for var in scope]
    for values in itertools.product(*ranges):
        for var, value in zip(scope, values):
            current[var] = value
        evidence = PartialEvidence(spn.variables, [1 << v for v in current])
        candidate = node_values(spn, evidence, buffer)[-1]
        if candidate > best_score:
            best_score = candidate
            best = tuple(current)

    stats = SearchStats(
        nodes_expanded=total,
        defaulted_variables=spn.num_vars - len(scope),
    )
    return SolveResult(
        assignment=best,
        score=best_score,
        status=SolveStatus.FINISHED,
        elapsed=time.perf_counter() - started,
        stats=stats,
        zero_mass=best_score == 0.0,
        solver="brute",
    )
