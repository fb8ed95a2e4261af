"""
MAP → MAX 변환

증거 변수는 지시 함수 가중치로 조건화하고 은닉 변수는 아크 가중치로 합쳐 없앤다.
결과 SPN S′은 Q 위에서 S′(q) = S({q} × {e} × val(H))를 만족한다.
"""

import logging
from dataclasses import replace

from ..errors import ProblemError
from ..spn.models import Node, Spn, compact_nodes
from .problem import MapProblem

logger = logging.getLogger(__name__)


def ensure_sum_root(spn: Spn) -> Spn:
    """루트가 합 노드가 아니면 가중치 1의 단일 자식 합 노드로 감싼다"""
    if spn.root_node.is_sum:
        return spn
    return Spn(spn.variables, [*spn.nodes, Node.sum([spn.root], [1.0])])


def map_to_max(spn: Spn, problem: MapProblem) -> Spn:
    """
    MAP 문제를 Q 위의 MAX 문제로 변환 (아크 수에 선형인 단일 패스)

    입력 SPN은 변경하지 않는다. 곱 노드는 자식이 하나만 남아도 그대로 둔다.

    Args:
        spn: 유효한 SPN
        problem: Q/E/H 분할과 증거

    Returns:
        스코프가 Q인 새 Spn (변수 테이블은 입력과 동일)

    Raises:
        ProblemError: 분할 오류, 또는 Q가 루트 스코프와 겹치지 않아 남는 노드가 없는 경우
    """
    problem.check(spn.variables)
    was_wrapped = not spn.root_node.is_sum
    base = ensure_sum_root(spn)

    evidence = problem.evidence_map
    eliminated = frozenset(evidence) | frozenset(problem.hidden)

    weight = [1.0] * len(base.nodes)
    rewritten: list[Node] = []
    keep: set[int] = set()

    for node_id, node in enumerate(base.nodes):
        removable = node.scope <= eliminated
        if not removable:
            keep.add(node_id)

        if node.is_leaf:
            if node.var in evidence and evidence[node.var] != node.value:
                weight[node_id] = 0.0
            rewritten.append(node)
        elif node.is_sum:
            weights = tuple(w * weight[child] for child, w in zip(node.children, node.weights))
            if removable:
                total = 0.0
                for w in weights:
                    total += w
                weight[node_id] = total
            rewritten.append(replace(node, weights=weights))
        else:
            product = 1.0
            for child in node.children:
                product *= weight[child]
            weight[node_id] = product
            if not removable:
                # 스코프가 E∪H 안에 드는 자식은 가중치로 흡수되었으므로 아크 제거
                children = tuple(child for child in node.children if not base.nodes[child].scope <= eliminated)
                node = replace(node, children=children)
            rewritten.append(node)

    if base.root not in keep:
        raise ProblemError("질의 변수가 SPN 루트 스코프에 없어 변환 결과가 비었습니다")

    nodes = compact_nodes(rewritten, keep)
    # 감싼 루트가 가중치 1로 남으면 원래 루트로 되돌려 노드 수가 늘지 않게 한다
    if was_wrapped and nodes[-1].weights == (1.0,):
        nodes = nodes[:-1]

    result = Spn(spn.variables, nodes)
    logger.debug(
        f"MAP→MAX: {len(spn.nodes)}→{len(result.nodes)} 노드, "
        f"|Q|={len(problem.query)} |E|={len(problem.evidence)} |H|={len(problem.hidden)}"
    )
    return result


def simplify(spn: Spn) -> Spn:
    """
    선택적 단순화 (기본 비활성)

    - 가중치 0인 합 노드 아크 제거 (모두 0이면 첫 아크만 남김)
    - 자식이 하나인 곱 노드와 가중치가 정확히 1인 단일 자식 합 노드를 자식으로 대체
    - 루트에서 도달 불가능해진 노드 제거

    모든 완전 할당에서 점수가 보존된다.
    """
    resolved = list(range(len(spn.nodes)))
    rewritten: list[Node] = []

    for node_id, node in enumerate(spn.nodes):
        if node.is_leaf:
            rewritten.append(node)
            continue

        children = tuple(resolved[child] for child in node.children)
        if node.is_sum:
            pairs = [(c, w) for c, w in zip(children, node.weights) if w != 0.0]
            if not pairs:
                pairs = [(children[0], node.weights[0])]
            node = Node.sum([c for c, _ in pairs], [w for _, w in pairs])
            if len(pairs) == 1 and pairs[0][1] == 1.0:
                resolved[node_id] = pairs[0][0]
        else:
            node = Node.product(children)
            if len(children) == 1:
                resolved[node_id] = children[0]
        rewritten.append(node)

    root = resolved[spn.root]
    draft = Spn(spn.variables, rewritten[: root + 1])
    result = Spn(spn.variables, compact_nodes(draft.nodes, set(draft.descendants(root))))
    logger.debug(f"단순화: {len(spn.nodes)}→{len(result.nodes)} 노드")
    return result
