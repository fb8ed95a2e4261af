"""
SPN 순방향 평가 및 도함수 평가

선형 영역 배정밀도 연산. 두 패스 모두 아크 수에 선형이다.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

from .evidence import PartialEvidence
from .models import NodeKind, Spn


def _check_variables(spn: Spn, evidence: PartialEvidence) -> None:
    if len(evidence.masks) != spn.num_vars:
        raise ValueError(
            f"변수 개수 불일치: SPN {spn.num_vars}개, 증거 {len(evidence.masks)}개"
        )


def node_values(
    spn: Spn,
    evidence: PartialEvidence,
    out: Optional[list[float]] = None
) -> list[float]:
    """
    모든 노드 값을 상향식으로 계산

    Args:
        spn: 평가할 SPN
        evidence: 부분 증거 λ(𝒳)
        out: 호출자 소유 스크래치 버퍼 (길이 len(spn))

    Returns:
        노드별 값 리스트 (마지막 원소가 S(𝒳))
    """
    _check_variables(spn, evidence)
    masks = evidence.masks
    values = out if out is not None else [0.0] * len(spn.nodes)

    for node_id, node in enumerate(spn.nodes):
        kind = node.kind
        if kind is NodeKind.INDICATOR:
            values[node_id] = 1.0 if masks[node.var] >> node.value & 1 else 0.0
        elif kind is NodeKind.SUM:
            total = 0.0
            for child, weight in zip(node.children, node.weights):
                total += weight * values[child]
            values[node_id] = total
        else:
            product = 1.0
            for child in node.children:
                product *= values[child]
            values[node_id] = product

    return values


def evaluate(spn: Spn, evidence: PartialEvidence) -> float:
    """S(𝒳) = Σ_{x∈𝒳} Φ(x)"""
    return node_values(spn, evidence)[-1]


def score(spn: Spn, assignment: Sequence[int]) -> float:
    """완전 할당의 SPN 점수 S(x)"""
    return evaluate(spn, PartialEvidence.from_assignment(spn.variables, assignment))


def subnetwork_value(
    spn: Spn,
    evidence: PartialEvidence,
    node_id: int,
    out: Optional[list[float]] = None
) -> float:
    """node_id를 루트로 하는 하위 네트워크만 평가 (하위 네트워크 크기에 선형)"""
    _check_variables(spn, evidence)
    masks = evidence.masks
    values = out if out is not None else [0.0] * len(spn.nodes)
    nodes = spn.nodes

    for current in spn.descendants(node_id):
        node = nodes[current]
        kind = node.kind
        if kind is NodeKind.INDICATOR:
            values[current] = 1.0 if masks[node.var] >> node.value & 1 else 0.0
        elif kind is NodeKind.SUM:
            total = 0.0
            for child, weight in zip(node.children, node.weights):
                total += weight * values[child]
            values[current] = total
        else:
            product = 1.0
            for child in node.children:
                product *= values[child]
            values[current] = product

    return values[node_id]


@dataclass
class DerivativeTable:
    """
    ∂S/∂λ_{X=x} 테이블

    entry (X, x)는 수정된 증거 {x} × 𝒳[X∖{X}]에서의 S 값과 같다.
    """
    table: list[list[float]]
    value: float  # S(𝒳)

    def __getitem__(self, key: tuple[int, int]) -> float:
        var, value = key
        return self.table[var][value]

    def row(self, var: int) -> list[float]:
        return self.table[var]


def _product_partials(children: Sequence[int], values: list[float], grads: list[float], upstream: float) -> None:
    """
    곱 노드의 자식별 편미분을 누적

    0인 자식 수를 세어 처리한다. 0이 두 개 이상이면 모든 편미분이 0,
    하나면 그 자식만 나머지의 곱을 받고, 없으면 접두/접미 곱으로 계산한다 (나눗셈 없음).
    """
    zero_count = 0
    zero_child = -1
    nonzero_product = 1.0
    for child in children:
        value = values[child]
        if value == 0.0:
            zero_count += 1
            zero_child = child
        else:
            nonzero_product *= value

    if zero_count >= 2:
        return
    if zero_count == 1:
        grads[zero_child] += upstream * nonzero_product
        return

    count = len(children)
    suffix = [1.0] * (count + 1)
    for i in range(count - 1, -1, -1):
        suffix[i] = suffix[i + 1] * values[children[i]]
    prefix = 1.0
    for i, child in enumerate(children):
        grads[child] += upstream * prefix * suffix[i + 1]
        prefix *= values[child]


def derivatives(
    spn: Spn,
    evidence: PartialEvidence,
    values: Optional[list[float]] = None
) -> DerivativeTable:
    """
    모든 (변수, 값) 쌍의 도함수를 순방향 1회 + 역방향 1회로 계산

    Args:
        spn: 평가할 SPN
        evidence: 부분 증거
        values: 이미 계산한 node_values 결과 (재사용)

    Returns:
        DerivativeTable
    """
    if values is None:
        values = node_values(spn, evidence)
    else:
        _check_variables(spn, evidence)

    nodes = spn.nodes
    grads = [0.0] * len(nodes)
    grads[-1] = 1.0
    table = [[0.0] * card for card in spn.variables.cardinalities]

    for node_id in range(len(nodes) - 1, -1, -1):
        upstream = grads[node_id]
        node = nodes[node_id]
        kind = node.kind
        if kind is NodeKind.INDICATOR:
            table[node.var][node.value] += upstream
        elif upstream == 0.0:
            continue
        elif kind is NodeKind.SUM:
            for child, weight in zip(node.children, node.weights):
                grads[child] += weight * upstream
        else:
            _product_partials(node.children, values, grads, upstream)

    return DerivativeTable(table=table, value=values[-1])
