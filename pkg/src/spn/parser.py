"""
SPN 텍스트 포맷 파서/직렬화

포맷 (UTF-8, 줄 단위, '#' 이후는 주석):
    SPN <변수 개수>
    CARD <var> <k>                       (선택, 기본 카디널리티 2)
    L <var> <val>                        지시 함수 λ_{X_var = val}
    S <child> <weight> <child> <weight>  합 노드
    P <child> <child> ...                곱 노드

노드 id는 파일 순서대로 0, 1, 2, ... 이며 자식은 부모보다 먼저 나와야 한다. 마지막 노드가 루트.
"""

import logging
import math
import re
from pathlib import Path
from typing import Iterator, Union

from ..errors import SpnFormatError, SpnStructureError, SpnValidationError
from .models import Node, NodeKind, Spn, VariableTable
from .validation import validate

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\S+")


def tokenize(text: str) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    """
    주석과 빈 줄을 건너뛰고 (줄 번호, [(열, 토큰), ...])를 생성

    줄/열 번호는 1부터 시작한다.
    """
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]
        if tokens:
            yield line_no, tokens


def parse_int(token: tuple[int, str], line_no: int, what: str, minimum: int = 0) -> int:
    column, text = token
    try:
        value = int(text)
    except ValueError:
        raise SpnFormatError(f"{what}은(는) 정수여야 합니다: '{text}'", line_no, column)
    if value < minimum:
        raise SpnFormatError(f"{what}은(는) {minimum} 이상이어야 합니다: {value}", line_no, column)
    return value


def parse_float(token: tuple[int, str], line_no: int, what: str) -> float:
    column, text = token
    try:
        value = float(text)
    except ValueError:
        raise SpnFormatError(f"{what}은(는) 실수여야 합니다: '{text}'", line_no, column)
    if math.isnan(value) or math.isinf(value):
        raise SpnFormatError(f"{what}이(가) 유한한 값이 아닙니다: '{text}'", line_no, column)
    return value


def parse_cardinalities(
    lines: list[tuple[int, list[tuple[int, str]]]],
    header: str
) -> tuple[VariableTable, int]:
    """
    헤더와 CARD 줄 파싱 (SPN/BN 포맷 공용)

    Returns:
        (VariableTable, 소비한 줄 수)
    """
    if not lines:
        raise SpnFormatError(f"빈 문서입니다: '{header} <n>' 헤더가 필요합니다", 1, 1)

    line_no, tokens = lines[0]
    if tokens[0][1] != header or len(tokens) != 2:
        raise SpnFormatError(f"첫 줄은 '{header} <n>' 이어야 합니다", line_no, tokens[0][0])
    count = parse_int(tokens[1], line_no, "변수 개수", minimum=1)

    cards = [2] * count
    consumed = 1
    for line_no, tokens in lines[1:]:
        if tokens[0][1] != "CARD":
            break
        if len(tokens) != 3:
            raise SpnFormatError("CARD 줄은 'CARD <var> <k>' 형식이어야 합니다", line_no, tokens[0][0])
        var = parse_int(tokens[1], line_no, "변수 인덱스")
        if var >= count:
            raise SpnFormatError(f"변수 인덱스 범위 초과: {var}", line_no, tokens[1][0])
        cards[var] = parse_int(tokens[2], line_no, "카디널리티", minimum=2)
        consumed += 1

    return VariableTable(tuple(cards)), consumed


def parse_spn(text: str, check: bool = True) -> Spn:
    """
    SPN 문서 파싱 후 검증

    Args:
        text: SPN 포맷 문서
        check: True면 validate()를 실행해 실패 시 SpnValidationError

    Returns:
        Spn
    """
    lines = list(tokenize(text))
    variables, consumed = parse_cardinalities(lines, "SPN")
    node_lines = lines[consumed:]
    if not node_lines:
        raise SpnFormatError("노드가 없습니다", lines[-1][0])

    total = len(node_lines)
    nodes: list[Node] = []

    for node_id, (line_no, tokens) in enumerate(node_lines):
        tag_column, tag = tokens[0]
        args = tokens[1:]

        if tag == NodeKind.INDICATOR.value:
            if len(args) != 2:
                raise SpnFormatError("지시 함수 줄은 'L <var> <val>' 형식이어야 합니다", line_no, tag_column)
            var = parse_int(args[0], line_no, "변수 인덱스")
            value = parse_int(args[1], line_no, "값")
            if var >= variables.count:
                raise SpnFormatError(f"변수 인덱스 범위 초과: {var}", line_no, args[0][0])
            if value >= variables.cardinality(var):
                raise SpnFormatError(
                    f"변수 {var}의 값 범위 초과: {value} (카디널리티 {variables.cardinality(var)})",
                    line_no, args[1][0]
                )
            nodes.append(Node.indicator(var, value))
            continue

        if tag not in (NodeKind.SUM.value, NodeKind.PRODUCT.value):
            raise SpnFormatError(f"알 수 없는 노드 유형: '{tag}'", line_no, tag_column)
        if not args:
            raise SpnFormatError("내부 노드에 자식이 없습니다", line_no, tag_column)

        if tag == NodeKind.SUM.value:
            if len(args) % 2 != 0:
                raise SpnFormatError("합 노드는 (자식, 가중치) 쌍으로 구성되어야 합니다", line_no, args[-1][0])
            child_tokens = args[0::2]
            weights = []
            for token in args[1::2]:
                weight = parse_float(token, line_no, "가중치")
                if weight < 0:
                    raise SpnFormatError(f"음수 가중치: {weight}", line_no, token[0])
                weights.append(weight)
        else:
            child_tokens = args
            weights = []

        children = []
        for token in child_tokens:
            child = parse_int(token, line_no, "자식 id")
            if child >= total:
                raise SpnFormatError(f"존재하지 않는 자식 참조: {child}", line_no, token[0])
            if child >= node_id:
                raise SpnFormatError(f"전방 참조: 노드 {child}는 노드 {node_id}보다 뒤에 있습니다", line_no, token[0])
            children.append(child)

        if tag == NodeKind.SUM.value:
            nodes.append(Node.sum(children, weights))
        else:
            nodes.append(Node.product(children))

    try:
        spn = Spn(variables, nodes)
    except SpnStructureError as e:
        line_no = node_lines[e.node_id][0] if e.node_id is not None else None
        raise SpnFormatError(e.message, line_no)

    if check:
        report = validate(spn)
        if not report.is_valid:
            raise SpnValidationError(report)

    logger.debug(f"SPN 파싱 완료: {spn!r}")
    return spn


def format_weight(weight: float) -> str:
    """왕복 가능한 최단 표현"""
    return repr(float(weight))


def serialize_spn(spn: Spn) -> str:
    """Spn → SPN 포맷 문서 (저장 순서 유지, 가중치는 비트 단위로 보존)"""
    lines = [f"SPN {spn.num_vars}"]
    for var, card in enumerate(spn.variables.cardinalities):
        if card != 2:
            lines.append(f"CARD {var} {card}")

    for node in spn.nodes:
        if node.is_leaf:
            lines.append(f"L {node.var} {node.value}")
        elif node.is_sum:
            pairs = " ".join(
                f"{child} {format_weight(weight)}"
                for child, weight in zip(node.children, node.weights)
            )
            lines.append(f"S {pairs}")
        else:
            lines.append("P " + " ".join(str(child) for child in node.children))

    return "\n".join(lines) + "\n"


def load_spn(path: Union[str, Path], check: bool = True) -> Spn:
    """파일에서 SPN 읽기"""
    text = Path(path).read_text(encoding="utf-8")
    return parse_spn(text, check=check)


def save_spn(spn: Spn, path: Union[str, Path]) -> None:
    """SPN을 파일로 저장"""
    Path(path).write_text(serialize_spn(spn), encoding="utf-8")
