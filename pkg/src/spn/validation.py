"""
SPN 구조 검증 (완전성, 분해성, 도달성)
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

from .models import Spn

logger = logging.getLogger(__name__)


class FailureKind(Enum):
    """검증 실패 유형"""
    COMPLETENESS = "completeness"          # 합 노드 자식들의 스코프가 다름
    DECOMPOSABILITY = "decomposability"    # 곱 노드 자식들의 스코프가 겹침
    UNREACHABLE = "unreachable"            # 루트에서 도달 불가
    MULTIPLE_ROOTS = "multiple_roots"      # 마지막 노드 외에 부모 없는 노드
    NEGATIVE_WEIGHT = "negative_weight"    # 음수 가중치


@dataclass
class ValidationReport:
    """실패 유형별 문제 노드 id 목록. 비어 있으면 유효."""
    failures: dict[FailureKind, list[int]] = field(default_factory=dict)

    def add(self, kind: FailureKind, node_id: int) -> None:
        self.failures.setdefault(kind, []).append(node_id)

    @property
    def is_valid(self) -> bool:
        return not self.failures

    def nodes(self, kind: FailureKind) -> list[int]:
        return self.failures.get(kind, [])

    def summary(self) -> str:
        if self.is_valid:
            return "OK"
        return "; ".join(
            f"{kind.value}: {', '.join(str(n) for n in ids)}"
            for kind, ids in self.failures.items()
        )

    def __bool__(self) -> bool:
        return not self.is_valid


def validate(spn: Spn) -> ValidationReport:
    """
    완전성, 분해성, 도달성 검사

    Args:
        spn: 검사할 SPN (구조적으로 파싱 가능한 노드 목록)

    Returns:
        ValidationReport (비어 있으면 유효)
    """
    report = ValidationReport()
    nodes = spn.nodes

    for node_id, node in enumerate(nodes):
        if node.is_sum:
            if any(weight < 0 for weight in node.weights):
                report.add(FailureKind.NEGATIVE_WEIGHT, node_id)
            first = nodes[node.children[0]].scope
            if any(nodes[child].scope != first for child in node.children[1:]):
                report.add(FailureKind.COMPLETENESS, node_id)
        elif node.is_product:
            seen: set[int] = set()
            for child in node.children:
                scope = nodes[child].scope
                if seen & scope:
                    report.add(FailureKind.DECOMPOSABILITY, node_id)
                    break
                seen |= scope

    reachable = spn.reachable()
    parents = spn.parents()
    for node_id in range(len(nodes) - 1):
        if node_id in reachable:
            continue
        if not parents[node_id]:
            report.add(FailureKind.MULTIPLE_ROOTS, node_id)
        report.add(FailureKind.UNREACHABLE, node_id)

    if not report.is_valid:
        logger.debug(f"SPN 검증 실패: {report.summary()}")
    return report
