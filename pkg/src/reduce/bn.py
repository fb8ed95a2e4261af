"""
트리 구조 베이지안 네트워크와 SPN 컴파일

BN 텍스트 포맷 ('#' 이후 주석):
    BN <n>
    CARD <var> <k>                      (선택, 기본 2)
    ROOT <var> p0 p1 ...
    EDGE <parent> <child>
    CPT <child> | <parent_val> : p0 p1 ...

컴파일 규칙: (var=value) 부분 네트워크는 자식이 있으면 곱 노드
[var=value] × Σ_c CPT(c | value) · (c=c_val 부분 네트워크)이고, 자식이 없는 잎 변수는
곱 노드 없이 지시 함수 [var=value] 하나로 둔다.
(변수, 값)마다 한 번만 만들고 캐시한다. 예: A→B→C는 곱 노드 4개, 캐시 항목 6개.
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from ..errors import BnError, SpnFormatError
from ..spn.models import Node, Spn, VariableTable
from ..spn.parser import parse_cardinalities, parse_float, parse_int, tokenize

logger = logging.getLogger(__name__)

ROW_TOLERANCE = 1e-9

_CPT_LINE = re.compile(r"^CPT\s+(\S+)\s*\|\s*(\S+?)\s*:\s*(.*)$")


@dataclass(frozen=True)
class TreeBn:
    """
    트리 구조 BN

    Attributes:
        variables: 변수 카디널리티
        parents: 변수별 부모 인덱스 (루트는 -1)
        cpts: 변수별 CPT 행 목록. 루트는 행 1개 P(x), 나머지는 부모 값마다 P(x | parent)
    """
    variables: VariableTable
    parents: tuple[int, ...]
    cpts: tuple[tuple[tuple[float, ...], ...], ...]

    def __post_init__(self):
        self.check()

    @property
    def num_vars(self) -> int:
        return self.variables.count

    @property
    def root(self) -> int:
        return self.parents.index(-1)

    def children(self) -> tuple[tuple[int, ...], ...]:
        """변수별 자식 목록 (인덱스 오름차순)"""
        result: list[list[int]] = [[] for _ in self.parents]
        for var, parent in enumerate(self.parents):
            if parent >= 0:
                result[parent].append(var)
        return tuple(tuple(c) for c in result)

    @property
    def num_parameters(self) -> int:
        """CPT 항목 수"""
        return sum(len(row) for rows in self.cpts for row in rows)

    def probability(self, var: int, value: int, parent_value: int = 0) -> float:
        row = 0 if self.parents[var] < 0 else parent_value
        return self.cpts[var][row][value]

    def joint(self, assignment: Sequence[int]) -> float:
        """P_BN(x) = Π_X P(x_X | x_parent)"""
        result = 1.0
        for var, value in enumerate(assignment):
            parent = self.parents[var]
            result *= self.probability(var, value, assignment[parent] if parent >= 0 else 0)
        return result

    def check(self) -> None:
        """
        구조와 CPT 검사

        Raises:
            BnError: 루트가 하나가 아니거나 순환, CPT 모양 오류, 행 합이 1이 아닌 경우
        """
        count = self.variables.count
        if len(self.parents) != count or len(self.cpts) != count:
            raise BnError("부모/CPT 목록 길이가 변수 개수와 다릅니다")

        roots = [var for var, parent in enumerate(self.parents) if parent < 0]
        if len(roots) != 1:
            raise BnError(f"루트가 정확히 하나여야 합니다: {roots}")

        for var, parent in enumerate(self.parents):
            if parent >= count or parent == var:
                raise BnError(f"변수 {var}의 부모가 올바르지 않습니다: {parent}")
            seen = {var}
            current = parent
            while current >= 0:
                if current in seen:
                    raise BnError(f"부모 관계에 순환이 있습니다 (변수 {var})")
                seen.add(current)
                current = self.parents[current]

        for var, rows in enumerate(self.cpts):
            parent = self.parents[var]
            expected_rows = 1 if parent < 0 else self.variables.cardinality(parent)
            if len(rows) != expected_rows:
                raise BnError(f"변수 {var}의 CPT 행 수가 {expected_rows}가 아닙니다: {len(rows)}")
            for row_index, row in enumerate(rows):
                if len(row) != self.variables.cardinality(var):
                    raise BnError(f"변수 {var}의 CPT 행 {row_index} 길이가 카디널리티와 다릅니다")
                if any(p < 0 for p in row):
                    raise BnError(f"변수 {var}의 CPT 행 {row_index}에 음수 확률이 있습니다")
                if abs(sum(row) - 1.0) > ROW_TOLERANCE:
                    raise BnError(f"변수 {var}의 CPT 행 {row_index} 합이 1이 아닙니다: {sum(row)!r}")


# ----------------------------------------------------------------------
# 파싱 / 직렬화


def parse_bn(text: str) -> TreeBn:
    """
    BN 텍스트 파싱

    Raises:
        SpnFormatError: 구문 오류 (행/열 포함)
        BnError: 구조/CPT 오류
    """
    raw_lines = text.splitlines()
    lines = list(tokenize(text))
    variables, consumed = parse_cardinalities(lines, "BN")
    count = variables.count

    parents = [-1] * count
    has_edge = [False] * count
    rows: list[dict[int, tuple[float, ...]]] = [{} for _ in range(count)]
    root: Optional[int] = None

    for line_no, tokens in lines[consumed:]:
        col, tag = tokens[0]
        if tag == "ROOT":
            if len(tokens) < 2:
                raise SpnFormatError("ROOT 행에 변수가 없습니다", line_no, col)
            var = _variable(tokens[1], line_no, count)
            if root is not None:
                raise SpnFormatError(f"ROOT가 중복되었습니다 (변수 {root}, {var})", line_no, col)
            root = var
            rows[var][0] = tuple(parse_float(tok, line_no, "확률") for tok in tokens[2:])
        elif tag == "EDGE":
            if len(tokens) != 3:
                raise SpnFormatError("EDGE 행은 'EDGE <parent> <child>' 형식이어야 합니다", line_no, col)
            parent = _variable(tokens[1], line_no, count)
            child = _variable(tokens[2], line_no, count)
            if has_edge[child]:
                raise SpnFormatError(f"변수 {child}의 부모가 중복되었습니다", line_no, tokens[2][0])
            parents[child] = parent
            has_edge[child] = True
        elif tag == "CPT":
            match = _CPT_LINE.match(raw_lines[line_no - 1].split("#", 1)[0].strip())
            if match is None:
                raise SpnFormatError("CPT 행은 'CPT <child> | <parent_val> : p0 p1 ...' 형식이어야 합니다", line_no, col)
            child = _variable((col, match.group(1)), line_no, count)
            parent_value = parse_int((col, match.group(2)), line_no, "부모 값")
            if parent_value in rows[child]:
                raise SpnFormatError(f"변수 {child}의 CPT 행 {parent_value}가 중복되었습니다", line_no, col)
            rows[child][parent_value] = tuple(
                parse_float((col, tok), line_no, "확률") for tok in match.group(3).split()
            )
        else:
            raise SpnFormatError(f"알 수 없는 태그: '{tag}'", line_no, col)

    if root is None:
        raise BnError("ROOT 행이 없습니다")
    if has_edge[root]:
        raise BnError(f"루트 변수 {root}에 부모가 있습니다")

    cpts = []
    for var in range(count):
        if var != root and not has_edge[var]:
            raise BnError(f"변수 {var}에 부모가 없습니다 (루트는 하나여야 합니다)")
        expected = 1 if var == root else variables.cardinality(parents[var])
        missing = [value for value in range(expected) if value not in rows[var]]
        if missing:
            raise BnError(f"변수 {var}의 CPT 행이 없습니다: {missing}")
        extra = sorted(set(rows[var]) - set(range(expected)))
        if extra:
            raise BnError(f"변수 {var}의 CPT 부모 값 범위 초과: {extra}")
        cpts.append(tuple(rows[var][value] for value in range(expected)))

    bn = TreeBn(variables, tuple(parents), tuple(cpts))
    logger.debug(f"BN 파싱: 변수 {count}개, 파라미터 {bn.num_parameters}개")
    return bn


def _variable(token: tuple[int, str], line_no: int, count: int) -> int:
    col = token[0]
    var = parse_int(token, line_no, "변수 인덱스")
    if var >= count:
        raise SpnFormatError(f"변수 인덱스 범위 초과: {var}", line_no, col)
    return var


def serialize_bn(bn: TreeBn) -> str:
    """TreeBn → BN 텍스트 (parse_bn의 역)"""
    lines = [f"BN {bn.num_vars}"]
    for var, card in enumerate(bn.variables.cardinalities):
        if card != 2:
            lines.append(f"CARD {var} {card}")
    lines.append(f"ROOT {bn.root} " + " ".join(repr(p) for p in bn.cpts[bn.root][0]))
    for var, parent in enumerate(bn.parents):
        if parent < 0:
            continue
        lines.append(f"EDGE {parent} {var}")
        for parent_value, row in enumerate(bn.cpts[var]):
            lines.append(f"CPT {var} | {parent_value} : " + " ".join(repr(p) for p in row))
    return "\n".join(lines) + "\n"


def load_bn(path: Union[str, Path]) -> TreeBn:
    return parse_bn(Path(path).read_text(encoding="utf-8"))


# ----------------------------------------------------------------------
# 컴파일


class BnCompiler:
    """
    트리 BN → SPN 컴파일러

    (변수, 값)마다 곱 노드 하나를 만들고 결과를 메모이즈한다. 자식이 없는 BN 변수는
    곱 노드 없이 지시 함수 자체를 반환한다.
    """

    def __init__(self, bn: TreeBn):
        self.bn = bn
        self.nodes: list[Node] = []
        self.cache: dict[tuple[int, int], int] = {}
        self.cache_hits = 0
        self._children = bn.children()
        self._indicators: dict[tuple[int, int], int] = {}

    def _append(self, node: Node) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def _indicator(self, var: int, value: int) -> int:
        key = (var, value)
        if key not in self._indicators:
            self._indicators[key] = self._append(Node.indicator(var, value))
        return self._indicators[key]

    def build(self, var: int, value: int) -> int:
        """(var=value) 이하 부분 네트워크의 노드 id"""
        key = (var, value)
        cached = self.cache.get(key)
        if cached is not None:
            self.cache_hits += 1
            return cached

        children = self._children[var]
        if not children:
            node_id = self._indicator(var, value)
        else:
            factors = [self._indicator(var, value)]
            for child in children:
                sub = [self.build(child, child_value) for child_value in range(self.bn.variables.cardinality(child))]
                factors.append(self._append(Node.sum(sub, self.bn.cpts[child][value])))
            node_id = self._append(Node.product(factors))

        self.cache[key] = node_id
        return node_id

    def compile(self) -> Spn:
        root = self.bn.root
        sub = [self.build(root, value) for value in range(self.bn.variables.cardinality(root))]
        self._append(Node.sum(sub, self.bn.cpts[root][0]))
        spn = Spn(self.bn.variables, self.nodes)
        logger.debug(f"BN→SPN: {spn!r}, 캐시 적중 {self.cache_hits}회")
        return spn


def bn_to_spn(bn: TreeBn) -> Spn:
    """
    트리 BN을 같은 결합분포를 갖는 완전/분해 가능한 SPN으로 변환

    크기(노드 + 아크)는 CPT 파라미터 수에 선형이다.
    """
    return BnCompiler(bn).compile()


def random_tree_bn(num_vars: int, seed: Optional[int] = None, max_card: int = 2) -> TreeBn:
    """
    무작위 트리 BN (변수 0이 루트, 변수 i의 부모는 0..i-1 중 균등 선택)

    CPT 행은 균등 디리클레 분포에서 뽑는다.
    """
    if num_vars < 1:
        raise BnError("변수가 최소 1개 필요합니다")
    if max_card < 2:
        raise BnError("max_card는 2 이상이어야 합니다")

    rng = np.random.default_rng(seed)
    cards = tuple(int(c) for c in rng.integers(2, max_card + 1, size=num_vars))
    parents = [-1] + [int(rng.integers(var)) for var in range(1, num_vars)]

    cpts = []
    for var in range(num_vars):
        row_count = 1 if parents[var] < 0 else cards[parents[var]]
        rows = []
        for _ in range(row_count):
            row = rng.dirichlet(np.ones(cards[var]))
            rows.append(tuple(float(p) for p in row))
        cpts.append(tuple(rows))

    return TreeBn(VariableTable(cards), tuple(parents), tuple(cpts))
