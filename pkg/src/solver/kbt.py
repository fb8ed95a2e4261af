"""
K-Best Tree (KBT)

노드마다 값이 큰 상위 K개 파스 트리 목록(TopKList)을 상향식으로 만들고, 루트의 K개 트리를
역추적해 얻은 할당을 evaluate로 다시 채점한다. K=1이면 BT와 같은 할당을 낸다.

동점 순서:
    합 노드  (-값, 자식 위치, 자식 목록 내 순위)
    곱 노드  왼쪽부터 두 목록씩 병합, (-값, 왼쪽 순위, 오른쪽 순위)
"""

import heapq
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from ..spn.inference import node_values
from ..spn.evidence import PartialEvidence
from ..spn.models import NodeKind, Spn
from ..spn.result import SearchStats, SolveResult, SolveStatus
from .budget import Deadline, SolverTimeout

logger = logging.getLogger(__name__)

# 합 노드: (자식 위치, 자식 목록 내 순위) / 곱 노드: 자식별 순위 튜플 / 지시 함수: None
Provenance = Union[None, tuple[int, int], tuple[int, ...]]


@dataclass
class TopKList:
    """값 내림차순으로 정렬된 최대 K개의 (값, 출처) 다중집합"""
    values: list[float] = field(default_factory=list)
    provenance: list[Provenance] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.values)

    def append(self, value: float, origin: Provenance) -> None:
        self.values.append(value)
        self.provenance.append(origin)

    @classmethod
    def leaf(cls) -> "TopKList":
        return cls([1.0], [None])


def merge_sum(lists: Sequence[TopKList], weights: Sequence[float], k: int) -> TopKList:
    """
    가중 합집합의 상위 K개 (지연 힙)

    힙 초기화 O(|ch|) 후 K번 꺼내므로 O(|ch| + K log |ch|).
    """
    heap = [
        (-weight * child.values[0], position, 0)
        for position, (child, weight) in enumerate(zip(lists, weights))
        if len(child)
    ]
    heapq.heapify(heap)

    result = TopKList()
    while heap and len(result) < k:
        neg_value, position, rank = heapq.heappop(heap)
        result.append(-neg_value, (position, rank))
        child = lists[position]
        if rank + 1 < len(child):
            heapq.heappush(heap, (-weights[position] * child.values[rank + 1], position, rank + 1))
    return result


def merge_pair(left: TopKList, right: TopKList, k: int) -> list[tuple[float, int, int]]:
    """두 목록의 곱집합 상위 K개 [(값, 왼쪽 순위, 오른쪽 순위)] (지연 힙 + 방문 집합)"""
    if not len(left) or not len(right):
        return []
    heap = [(-(left.values[0] * right.values[0]), 0, 0)]
    visited = {(0, 0)}
    result = []
    while heap and len(result) < k:
        neg_value, i, j = heapq.heappop(heap)
        result.append((-neg_value, i, j))
        for ni, nj in ((i + 1, j), (i, j + 1)):
            if ni < len(left) and nj < len(right) and (ni, nj) not in visited:
                visited.add((ni, nj))
                heapq.heappush(heap, (-(left.values[ni] * right.values[nj]), ni, nj))
    return result


def merge_product(lists: Sequence[TopKList], k: int) -> TopKList:
    """
    곱집합의 상위 K개 (왼쪽부터 두 개씩 병합, O(K |ch| log K))

    값은 1.0부터 자식 순서대로 곱한 것과 같다.
    """
    first = lists[0]
    current = TopKList(
        [1.0 * value for value in first.values[:k]],
        [(rank,) for rank in range(min(k, len(first)))],
    )
    for child in lists[1:]:
        merged = TopKList()
        for value, i, j in merge_pair(current, child, k):
            merged.append(value, current.provenance[i] + (j,))
        current = merged
    return current


def top_k_lists(spn: Spn, k: int, deadline: Optional[Deadline] = None) -> list[Optional[TopKList]]:
    """루트에서 도달 가능한 모든 노드의 TopKList (저장 순서)"""
    reachable = spn.reachable()
    lists: list[Optional[TopKList]] = [None] * len(spn.nodes)
    for node_id, node in enumerate(spn.nodes):
        if node_id not in reachable:
            continue
        if deadline is not None:
            deadline.check()
        if node.kind is NodeKind.INDICATOR:
            lists[node_id] = TopKList.leaf()
        elif node.kind is NodeKind.SUM:
            lists[node_id] = merge_sum([lists[c] for c in node.children], node.weights, k)
        else:
            lists[node_id] = merge_product([lists[c] for c in node.children], k)
    return lists


def backtrack(spn: Spn, lists: list[Optional[TopKList]], rank: int) -> tuple[int, ...]:
    """루트 목록의 rank번째 트리가 유도하는 완전 할당 (스코프 밖 변수는 0)"""
    assignment = [0] * spn.num_vars
    stack = [(spn.root, rank)]
    while stack:
        node_id, entry = stack.pop()
        node = spn.nodes[node_id]
        origin = lists[node_id].provenance[entry]
        if node.kind is NodeKind.INDICATOR:
            assignment[node.var] = node.value
        elif node.kind is NodeKind.SUM:
            position, child_rank = origin
            stack.append((node.children[position], child_rank))
        else:
            stack.extend(zip(node.children, origin))
    return tuple(assignment)


def k_best_trees(spn: Spn, k: int, deadline: Optional[Deadline] = None) -> SolveResult:
    """
    상위 K개 파스 트리의 할당 중 SPN 점수가 가장 높은 것

    같은 할당이 여러 트리에서 나와도 중복 제거 없이 모두 다시 채점한다.
    동점이면 트리 순위가 앞선 할당.
    """
    if k < 1:
        raise ValueError(f"K는 1 이상이어야 합니다: {k}")
    deadline = deadline or Deadline()

    try:
        lists = top_k_lists(spn, k, deadline)
        root_list = lists[spn.root]

        buffer = [0.0] * len(spn.nodes)
        best: Optional[tuple[int, ...]] = None
        best_score = float("-inf")
        for rank in range(len(root_list)):
            deadline.check()
            assignment = backtrack(spn, lists, rank)
            evidence = PartialEvidence.from_assignment(spn.variables, assignment)
            candidate = node_values(spn, evidence, buffer)[-1]
            if candidate > best_score:
                best, best_score = assignment, candidate
    except SolverTimeout:
        logger.info(f"KBT{k}: 예산 소진")
        return SolveResult.no_result(deadline.elapsed, solver=f"kbt{k}")

    stats = SearchStats(
        candidates=len(root_list),
        defaulted_variables=spn.num_vars - len(spn.scope_variables),
    )
    logger.debug(f"KBT{k}: 후보 {len(root_list)}개, 점수 {best_score!r}")
    return SolveResult(
        assignment=best,
        score=best_score,
        status=SolveStatus.FINISHED,
        elapsed=deadline.elapsed,
        stats=stats,
        zero_mass=best_score == 0.0,
        solver=f"kbt{k}",
    )
