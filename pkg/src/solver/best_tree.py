"""
Best Tree (BT)와 Normalized Greedy (NG)

둘 다 파스 트리 하나를 골라 그 트리가 유도하는 할당을 돌려준다. 보고 점수는 트리 값이
아니라 spn-core의 evaluate로 다시 계산한 할당 점수다.
"""

import logging
from typing import Optional

from ..spn.inference import score
from ..spn.models import NodeKind, Spn
from ..spn.result import SearchStats, SolveResult, SolveStatus
from .budget import Deadline

logger = logging.getLogger(__name__)


def max_product_values(spn: Spn) -> list[float]:
    """합 노드를 max 노드로 바꾼 상향식 패스 (곱은 1.0부터 왼쪽→오른쪽)"""
    values = [0.0] * len(spn.nodes)
    for node_id, node in enumerate(spn.nodes):
        if node.kind is NodeKind.INDICATOR:
            values[node_id] = 1.0
        elif node.kind is NodeKind.SUM:
            best = float("-inf")
            for child, weight in zip(node.children, node.weights):
                candidate = weight * values[child]
                if candidate > best:
                    best = candidate
            values[node_id] = best
        else:
            product = 1.0
            for child in node.children:
                product *= values[child]
            values[node_id] = product
    return values


def induced_assignment(spn: Spn, choose) -> tuple[tuple[int, ...], int]:
    """
    루트에서 하향식으로 파스 트리를 따라가며 할당을 만든다

    Args:
        choose: 합 노드 id → 선택한 자식 id

    Returns:
        (할당, 기본값 0으로 채운 변수 수)
    """
    assignment: list[Optional[int]] = [None] * spn.num_vars
    stack = [spn.root]
    visited = set()
    while stack:
        node_id = stack.pop()
        if node_id in visited:
            continue
        visited.add(node_id)
        node = spn.nodes[node_id]
        if node.kind is NodeKind.INDICATOR:
            assignment[node.var] = node.value
        elif node.kind is NodeKind.SUM:
            stack.append(choose(node_id))
        else:
            stack.extend(node.children)

    defaulted = sum(1 for value in assignment if value is None)
    return tuple(0 if value is None else value for value in assignment), defaulted


def best_tree(spn: Spn) -> SolveResult:
    """최댓값 파스 트리의 할당 (동점이면 선언 순서가 앞선 자식)"""
    deadline = Deadline()
    values = max_product_values(spn)

    def choose(node_id: int) -> int:
        node = spn.nodes[node_id]
        best_child, best_value = node.children[0], float("-inf")
        for child, weight in zip(node.children, node.weights):
            candidate = weight * values[child]
            if candidate > best_value:
                best_child, best_value = child, candidate
        return best_child

    assignment, defaulted = induced_assignment(spn, choose)
    result_score = score(spn, assignment)
    logger.debug(f"BT: 트리 값 {values[-1]!r}, 점수 {result_score!r}")
    return SolveResult(
        assignment=assignment,
        score=result_score,
        status=SolveStatus.FINISHED,
        elapsed=deadline.elapsed,
        stats=SearchStats(defaulted_variables=defaulted),
        zero_mass=result_score == 0.0,
        solver="bt",
    )


def best_tree_value(spn: Spn) -> float:
    """BT가 고른 트리의 값 (모든 파스 트리 값의 최댓값)"""
    return max_product_values(spn)[-1]


def normalized_greedy(spn: Spn) -> SolveResult:
    """
    합 노드마다 정규화 가중치 w/Σw가 가장 큰 자식을 선택

    가중치가 모두 0인 합 노드는 첫 자식을 고르고 통계에 기록한다.
    """
    deadline = Deadline()
    stats = SearchStats()

    def choose(node_id: int) -> int:
        node = spn.nodes[node_id]
        total = sum(node.weights)
        if total <= 0.0:
            stats.zero_weight_sums += 1
            return node.children[0]
        best_child, best_weight = node.children[0], float("-inf")
        for child, weight in zip(node.children, node.weights):
            normalized = weight / total
            if normalized > best_weight:
                best_child, best_weight = child, normalized
        return best_child

    assignment, stats.defaulted_variables = induced_assignment(spn, choose)
    result_score = score(spn, assignment)
    if stats.zero_weight_sums:
        logger.debug(f"NG: 가중치가 모두 0인 합 노드 {stats.zero_weight_sums}개")
    return SolveResult(
        assignment=assignment,
        score=result_score,
        status=SolveStatus.FINISHED,
        elapsed=deadline.elapsed,
        stats=stats,
        zero_mass=result_score == 0.0,
        solver="ng",
    )
