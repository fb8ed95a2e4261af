"""
Argmax-Product (AMAP)

노드마다 스코프 위의 후보 할당을 상향식으로 만든다. 합 노드에서는 자식 후보마다 그 합 노드를
루트로 하는 하위 네트워크를 평가해 가장 좋은 후보를 고른다 (O(Σ_S |ch(S)| · 하위 네트워크 크기)).
"""

import logging
from typing import Optional

from ..spn.evidence import PartialEvidence
from ..spn.inference import score, subnetwork_value
from ..spn.models import NodeKind, Spn
from ..spn.result import SearchStats, SolveResult, SolveStatus
from .budget import Deadline, SolverTimeout

logger = logging.getLogger(__name__)


def argmax_product(spn: Spn, deadline: Optional[Deadline] = None) -> SolveResult:
    """
    AMAP 할당과 SPN 점수

    루트 스코프 밖 변수는 0으로 채우고 통계의 defaulted_variables에 기록한다.
    """
    deadline = deadline or Deadline()
    stats = SearchStats()
    full_masks = PartialEvidence.full(spn.variables).masks
    buffer = [0.0] * len(spn.nodes)
    reachable = spn.reachable()
    candidates: list[Optional[dict[int, int]]] = [None] * len(spn.nodes)

    try:
        for node_id, node in enumerate(spn.nodes):
            if node_id not in reachable:
                continue
            deadline.check()
            if node.kind is NodeKind.INDICATOR:
                candidates[node_id] = {node.var: node.value}
            elif node.kind is NodeKind.PRODUCT:
                merged: dict[int, int] = {}
                for child in node.children:
                    merged.update(candidates[child])
                candidates[node_id] = merged
            else:
                best: Optional[dict[int, int]] = None
                best_value = float("-inf")
                for child in node.children:
                    candidate = candidates[child]
                    masks = list(full_masks)
                    for var, value in candidate.items():
                        masks[var] = 1 << value
                    value = subnetwork_value(spn, PartialEvidence(spn.variables, masks), node_id, buffer)
                    stats.nodes_expanded += 1
                    if value > best_value:
                        best, best_value = candidate, value
                candidates[node_id] = best
    except SolverTimeout:
        logger.info("AMAP: 예산 소진")
        return SolveResult.no_result(deadline.elapsed, solver="amap", stats=stats)

    root_candidate = candidates[spn.root]
    assignment = tuple(root_candidate.get(var, 0) for var in range(spn.num_vars))
    stats.defaulted_variables = spn.num_vars - len(root_candidate)
    result_score = score(spn, assignment)
    return SolveResult(
        assignment=assignment,
        score=result_score,
        status=SolveStatus.FINISHED,
        elapsed=deadline.elapsed,
        stats=stats,
        zero_mass=result_score == 0.0,
        solver="amap",
    )
