"""
시드 고정 무작위 SPN 생성기

완전하고 분해 가능한 DAG를 만든다. 같은 스코프의 하위 네트워크를 확률적으로 재사용하므로
여러 파스 트리를 갖는 (모호한) SPN이 나온다. 가중치는 [0, 1] 균등분포이며 정규화하지 않는다.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from .models import Node, Spn, VariableTable, compact_nodes

logger = logging.getLogger(__name__)


class _SpnBuilder:
    """재귀 생성 도우미 (노드는 후위 순서로 추가되므로 자식이 항상 먼저)"""

    def __init__(
        self,
        variables: VariableTable,
        rng: np.random.Generator,
        max_depth: int,
        max_sum_children: int,
        reuse: float,
        leaf_prob: float,
    ):
        self.variables = variables
        self.rng = rng
        self.max_depth = max_depth
        self.max_sum_children = max_sum_children
        self.reuse = reuse
        self.leaf_prob = leaf_prob
        self.nodes: list[Node] = []
        self._indicators: dict[tuple[int, int], int] = {}
        self._by_scope: dict[tuple[int, ...], list[int]] = {}

    def _add(self, node: Node, scope: tuple[int, ...]) -> int:
        self.nodes.append(node)
        node_id = len(self.nodes) - 1
        self._by_scope.setdefault(scope, []).append(node_id)
        return node_id

    def _indicator(self, var: int, value: int) -> int:
        key = (var, value)
        if key not in self._indicators:
            self.nodes.append(Node.indicator(var, value))
            self._indicators[key] = len(self.nodes) - 1
        return self._indicators[key]

    def _weights(self, count: int) -> list[float]:
        return [float(w) for w in self.rng.uniform(0.0, 1.0, size=count)]

    def build(self, scope: tuple[int, ...], depth: int) -> int:
        existing = self._by_scope.get(scope)
        if existing and self.rng.random() < self.reuse:
            return existing[int(self.rng.integers(len(existing)))]

        if len(scope) == 1:
            var = scope[0]
            card = self.variables.cardinality(var)
            if self.rng.random() < self.leaf_prob:
                return self._indicator(var, int(self.rng.integers(card)))
            children = [self._indicator(var, value) for value in range(card)]
            return self._add(Node.sum(children, self._weights(card)), scope)

        if depth >= self.max_depth:
            children = [self.build((var,), depth + 1) for var in scope]
            return self._add(Node.product(children), scope)

        num_children = int(self.rng.integers(2, self.max_sum_children + 1))
        children = [self._split(scope, depth) for _ in range(num_children)]
        return self._add(Node.sum(children, self._weights(num_children)), scope)

    def _split(self, scope: tuple[int, ...], depth: int) -> int:
        """스코프를 2~3개로 분할한 곱 노드"""
        shuffled = list(self.rng.permutation(scope))
        parts_count = 3 if len(scope) >= 3 and self.rng.random() < 0.3 else 2
        cuts = sorted(int(c) for c in self.rng.choice(np.arange(1, len(scope)), size=parts_count - 1, replace=False))
        bounds = [0, *cuts, len(scope)]
        children = []
        for start, end in zip(bounds, bounds[1:]):
            part = tuple(sorted(int(v) for v in shuffled[start:end]))
            children.append(self.build(part, depth + 1))
        return self._add(Node.product(children), scope)


def random_spn(
    num_vars: int,
    seed: Optional[int] = None,
    cardinalities: Optional[Sequence[int]] = None,
    max_depth: int = 2,
    max_sum_children: int = 3,
    reuse: float = 0.3,
    leaf_prob: float = 0.1,
) -> Spn:
    """
    무작위 유효 SPN 생성

    Args:
        num_vars: 변수 개수
        seed: 난수 시드 (같은 시드면 같은 SPN)
        cardinalities: 변수별 카디널리티 (기본 모두 2)
        max_depth: 합 노드 층 수 (이후는 완전 분해)
        max_sum_children: 합 노드 자식 수 상한 (하한 2)
        reuse: 같은 스코프의 기존 노드를 재사용할 확률
        leaf_prob: 단변수 스코프를 합 대신 지시 함수 하나로 둘 확률

    Returns:
        완전하고 분해 가능한 Spn (루트는 합 노드, 단 num_vars == 1이면 지시 함수일 수 있음)
    """
    variables = (
        VariableTable(tuple(cardinalities)) if cardinalities is not None
        else VariableTable.binary(num_vars)
    )
    rng = np.random.default_rng(seed)
    builder = _SpnBuilder(variables, rng, max_depth, max_sum_children, reuse, leaf_prob)

    root = builder.build(tuple(range(variables.count)), 0)
    # 재사용으로 루트 이후에 노드가 남지 않도록 루트를 마지막에 둔다
    nodes = builder.nodes[: root + 1]

    draft = Spn(variables, nodes)
    spn = Spn(variables, compact_nodes(draft.nodes, set(draft.reachable())))
    logger.debug(f"무작위 SPN 생성: seed={seed}, {spn!r}")
    return spn
