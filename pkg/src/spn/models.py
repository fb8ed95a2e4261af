"""
SPN 데이터 모델 정의

노드는 저장 순서가 곧 역위상 순서다 (자식이 항상 부모보다 앞). 루트는 마지막 노드.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Optional, Sequence

from ..errors import SpnStructureError


class NodeKind(Enum):
    """노드 유형 (텍스트 포맷의 태그와 동일)"""
    INDICATOR = "L"
    SUM = "S"
    PRODUCT = "P"


@dataclass(frozen=True)
class VariableTable:
    """변수 개수와 변수별 카디널리티"""
    cardinalities: tuple[int, ...]

    def __post_init__(self):
        if not self.cardinalities:
            raise SpnStructureError("변수가 최소 1개 필요합니다")
        for var, card in enumerate(self.cardinalities):
            if card < 2:
                raise SpnStructureError(f"변수 {var}의 카디널리티는 2 이상이어야 합니다: {card}")

    @classmethod
    def binary(cls, count: int) -> "VariableTable":
        """이진 변수 count개"""
        return cls(tuple([2] * count))

    @property
    def count(self) -> int:
        return len(self.cardinalities)

    def cardinality(self, var: int) -> int:
        return self.cardinalities[var]

    def __len__(self) -> int:
        return len(self.cardinalities)

    def num_assignments(self, variables: Optional[Sequence[int]] = None) -> int:
        """완전 할당 개수 (variables 지정 시 해당 변수만)"""
        total = 1
        for var in (range(self.count) if variables is None else variables):
            total *= self.cardinalities[var]
        return total


@dataclass(frozen=True)
class Node:
    """SPN 노드 (지시 함수, 합, 곱)"""
    kind: NodeKind
    children: tuple[int, ...] = ()
    weights: tuple[float, ...] = ()
    var: int = -1
    value: int = -1
    scope: frozenset[int] = field(default=frozenset(), compare=False)

    @classmethod
    def indicator(cls, var: int, value: int) -> "Node":
        return cls(NodeKind.INDICATOR, var=var, value=value)

    @classmethod
    def sum(cls, children: Sequence[int], weights: Sequence[float]) -> "Node":
        return cls(NodeKind.SUM, children=tuple(children), weights=tuple(float(w) for w in weights))

    @classmethod
    def product(cls, children: Sequence[int]) -> "Node":
        return cls(NodeKind.PRODUCT, children=tuple(children))

    @property
    def is_leaf(self) -> bool:
        return self.kind is NodeKind.INDICATOR

    @property
    def is_sum(self) -> bool:
        return self.kind is NodeKind.SUM

    @property
    def is_product(self) -> bool:
        return self.kind is NodeKind.PRODUCT


class Spn:
    """
    합곱 네트워크

    생성 후 불변이며 여러 작업자가 공유해도 안전하다. 구조 검사(참조 범위, 전방 참조,
    인자 개수, 지시 함수 값 범위)는 생성 시 수행하고, 완전성/분해성/도달성은
    validation.validate()에서 보고한다.
    """

    __slots__ = ("variables", "nodes", "_descendants", "_parents")

    def __init__(self, variables: VariableTable, nodes: Sequence[Node]):
        if not nodes:
            raise SpnStructureError("노드가 최소 1개 필요합니다")

        built: list[Node] = []
        for node_id, node in enumerate(nodes):
            built.append(self._check_and_scope(variables, built, node_id, node))

        self.variables = variables
        self.nodes: tuple[Node, ...] = tuple(built)
        self._descendants: dict[int, tuple[int, ...]] = {}
        self._parents: Optional[tuple[tuple[int, ...], ...]] = None

    @staticmethod
    def _check_and_scope(
        variables: VariableTable,
        built: list[Node],
        node_id: int,
        node: Node
    ) -> Node:
        """노드 하나를 검사하고 스코프를 채워 반환"""
        if node.is_leaf:
            if not 0 <= node.var < variables.count:
                raise SpnStructureError(f"변수 인덱스 범위 초과: {node.var}", node_id)
            if not 0 <= node.value < variables.cardinality(node.var):
                raise SpnStructureError(
                    f"변수 {node.var}의 값 범위 초과: {node.value}", node_id
                )
            return replace(node, scope=frozenset((node.var,)))

        if not node.children:
            raise SpnStructureError("내부 노드에 자식이 없습니다", node_id)
        if node.is_sum and len(node.weights) != len(node.children):
            raise SpnStructureError("합 노드의 가중치 개수가 자식 수와 다릅니다", node_id)

        scope: set[int] = set()
        for child in node.children:
            if child < 0:
                raise SpnStructureError(f"잘못된 자식 참조: {child}", node_id)
            if child >= node_id:
                raise SpnStructureError(f"전방 참조: {child}", node_id)
            scope |= built[child].scope
        return replace(node, scope=frozenset(scope))

    # ------------------------------------------------------------------
    # 기본 속성

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def root_node(self) -> Node:
        return self.nodes[-1]

    @property
    def num_vars(self) -> int:
        return self.variables.count

    @property
    def num_arcs(self) -> int:
        return sum(len(node.children) for node in self.nodes)

    @property
    def size(self) -> int:
        """노드 수 + 아크 수"""
        return len(self.nodes) + self.num_arcs

    @property
    def scope_variables(self) -> tuple[int, ...]:
        """루트 스코프의 변수 (오름차순)"""
        return tuple(sorted(self.root_node.scope))

    def scope(self, node_id: int) -> frozenset[int]:
        return self.nodes[node_id].scope

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[Node]:
        return iter(self.nodes)

    def __getitem__(self, node_id: int) -> Node:
        return self.nodes[node_id]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Spn):
            return NotImplemented
        return self.variables == other.variables and self.nodes == other.nodes

    def __hash__(self) -> int:
        return hash((self.variables, self.nodes))

    def __repr__(self) -> str:
        return f"<Spn(vars={self.num_vars}, nodes={len(self.nodes)}, arcs={self.num_arcs})>"

    def __getstate__(self):
        return {"variables": self.variables, "nodes": self.nodes}

    def __setstate__(self, state):
        self.variables = state["variables"]
        self.nodes = state["nodes"]
        self._descendants = {}
        self._parents = None

    # ------------------------------------------------------------------
    # 그래프 탐색

    def parents(self) -> tuple[tuple[int, ...], ...]:
        """노드별 부모 목록 (캐시)"""
        if self._parents is None:
            parents: list[list[int]] = [[] for _ in self.nodes]
            for node_id, node in enumerate(self.nodes):
                for child in node.children:
                    parents[child].append(node_id)
            self._parents = tuple(tuple(p) for p in parents)
        return self._parents

    def descendants(self, node_id: int) -> tuple[int, ...]:
        """node_id를 루트로 하는 하위 네트워크의 노드들 (저장 순서, 자기 자신 포함)"""
        cached = self._descendants.get(node_id)
        if cached is not None:
            return cached

        seen = {node_id}
        stack = [node_id]
        while stack:
            current = stack.pop()
            for child in self.nodes[current].children:
                if child not in seen:
                    seen.add(child)
                    stack.append(child)

        result = tuple(sorted(seen))
        self._descendants[node_id] = result
        return result

    def reachable(self) -> frozenset[int]:
        """루트에서 도달 가능한 노드"""
        return frozenset(self.descendants(self.root))


@dataclass(frozen=True)
class ParseTree:
    """
    파스 트리 (합 노드마다 자식 하나, 곱 노드는 자식 전부)

    Attributes:
        choices: (합 노드 id, 선택한 자식 id) 목록, 합 노드 id 오름차순
        assignment: 잎이 결정하는 완전 할당 (스코프 밖 변수는 0)
        value: 선택된 아크 가중치의 곱
    """
    choices: tuple[tuple[int, int], ...]
    assignment: tuple[int, ...]
    value: float


@dataclass(frozen=True)
class SpnStats:
    """SPN 크기 통계 (size = 노드 수 + 아크 수)"""
    num_vars: int
    nodes: int
    arcs: int
    sums: int
    products: int
    indicators: int

    @property
    def size(self) -> int:
        return self.nodes + self.arcs


def spn_stats(spn: Spn) -> SpnStats:
    """노드/아크/유형별 개수"""
    kinds = [node.kind for node in spn.nodes]
    return SpnStats(
        num_vars=spn.num_vars,
        nodes=len(spn.nodes),
        arcs=spn.num_arcs,
        sums=kinds.count(NodeKind.SUM),
        products=kinds.count(NodeKind.PRODUCT),
        indicators=kinds.count(NodeKind.INDICATOR),
    )


def compact_nodes(nodes: Sequence[Node], keep: set[int]) -> list[Node]:
    """
    keep에 속한 노드만 남기고 id를 다시 매김 (저장 순서 유지)

    남는 노드의 자식은 모두 keep에 있어야 한다.
    """
    remap: dict[int, int] = {}
    result: list[Node] = []
    for node_id, node in enumerate(nodes):
        if node_id not in keep:
            continue
        remap[node_id] = len(result)
        if node.children:
            node = replace(node, children=tuple(remap[child] for child in node.children))
        result.append(node)
    return result
