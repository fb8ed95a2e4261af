"""
MAP 문제 정의 및 문제 파일 파서

문제 파일: 한 줄에 문제 하나
    q:<쉼표 목록|-> e:<var>=<val>,...|- h:<쉼표 목록|->
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence, Union

from ..errors import ProblemError, SpnFormatError
from ..spn.models import Spn, VariableTable

logger = logging.getLogger(__name__)

_FIELD = re.compile(r"([qeh]):(\S*)")


@dataclass(frozen=True)
class MapProblem:
    """
    Q/E/H 분할과 증거 e

    Attributes:
        query: 질의 변수 Q (오름차순)
        evidence: E의 (변수, 값) 쌍 (변수 오름차순)
        hidden: 은닉 변수 H (오름차순)
    """
    query: tuple[int, ...]
    evidence: tuple[tuple[int, int], ...] = ()
    hidden: tuple[int, ...] = ()

    @classmethod
    def create(
        cls,
        query: Sequence[int],
        evidence: Mapping[int, int] = None,
        hidden: Sequence[int] = ()
    ) -> "MapProblem":
        evidence = evidence or {}
        return cls(
            query=tuple(sorted(query)),
            evidence=tuple(sorted((int(v), int(x)) for v, x in evidence.items())),
            hidden=tuple(sorted(hidden)),
        )

    @classmethod
    def full_max(cls, variables: VariableTable) -> "MapProblem":
        """E = H = ∅인 MAX 문제"""
        return cls(query=tuple(range(variables.count)))

    @property
    def evidence_map(self) -> dict[int, int]:
        return dict(self.evidence)

    @property
    def evidence_vars(self) -> tuple[int, ...]:
        return tuple(var for var, _ in self.evidence)

    def check(self, variables: VariableTable) -> None:
        """
        분할 검사: 서로소, 합집합이 전체 변수, Q ≠ ∅, 증거 값 범위

        Raises:
            ProblemError
        """
        if not self.query:
            raise ProblemError("질의 변수 Q가 비어 있습니다")

        seen: dict[int, str] = {}
        for label, group in (("Q", self.query), ("E", self.evidence_vars), ("H", self.hidden)):
            for var in group:
                if not 0 <= var < variables.count:
                    raise ProblemError(f"변수 인덱스 범위 초과: {var} ({label})")
                if var in seen:
                    raise ProblemError(f"변수 {var}가 {seen[var]}와 {label}에 중복됩니다")
                seen[var] = label

        missing = sorted(set(range(variables.count)) - set(seen))
        if missing:
            raise ProblemError(f"분할에 빠진 변수가 있습니다: {missing}")

        for var, value in self.evidence:
            if not 0 <= value < variables.cardinality(var):
                raise ProblemError(
                    f"증거 값 범위 초과: 변수 {var}={value} (카디널리티 {variables.cardinality(var)})"
                )

    def format(self) -> str:
        """문제 파일의 한 줄로 변환"""
        q = ",".join(str(v) for v in self.query) or "-"
        e = ",".join(f"{v}={x}" for v, x in self.evidence) or "-"
        h = ",".join(str(v) for v in self.hidden) or "-"
        return f"q:{q} e:{e} h:{h}"


def _parse_list(text: str, line_no: int, column: int) -> list[int]:
    if text == "-":
        return []
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise SpnFormatError(f"변수 목록이 올바르지 않습니다: '{text}'", line_no, column)


def parse_assignment(text: str, line_no: int = None, column: int = None) -> dict[int, int]:
    """'var=val,var=val' 또는 '-' 파싱 (증거 문자열 공용 문법)"""
    if text in ("-", ""):
        return {}
    result: dict[int, int] = {}
    for part in text.split(","):
        if not part:
            continue
        var_text, sep, value_text = part.partition("=")
        if not sep:
            raise SpnFormatError(f"'var=val' 형식이 아닙니다: '{part}'", line_no, column)
        try:
            var, value = int(var_text), int(value_text)
        except ValueError:
            raise SpnFormatError(f"'var=val'의 변수와 값은 정수여야 합니다: '{part}'", line_no, column)
        if var in result:
            raise SpnFormatError(f"변수 {var}가 중복되었습니다", line_no, column)
        result[var] = value
    return result


def parse_problem_line(text: str, line_no: int = 1) -> MapProblem:
    """문제 한 줄 파싱 (분할 검사 전)"""
    fields: dict[str, tuple[str, int]] = {}
    for match in _FIELD.finditer(text):
        key = match.group(1)
        if key in fields:
            raise SpnFormatError(f"'{key}:' 필드가 중복되었습니다", line_no, match.start() + 1)
        fields[key] = (match.group(2), match.start(2) + 1)

    leftover = _FIELD.sub("", text).strip()
    if leftover:
        raise SpnFormatError(f"알 수 없는 내용: '{leftover}'", line_no, text.find(leftover) + 1)
    for key in "qeh":
        if key not in fields:
            raise SpnFormatError(f"'{key}:' 필드가 없습니다", line_no, 1)

    q_text, q_col = fields["q"]
    e_text, e_col = fields["e"]
    h_text, h_col = fields["h"]
    return MapProblem.create(
        query=_parse_list(q_text, line_no, q_col),
        evidence=parse_assignment(e_text, line_no, e_col),
        hidden=_parse_list(h_text, line_no, h_col),
    )


def parse_problem(text: str, spn: Spn) -> MapProblem:
    """
    문제 한 줄을 파싱하고 SPN의 변수 테이블에 대해 분할 검사

    Raises:
        SpnFormatError: 구문 오류
        ProblemError: 분할/증거 오류
    """
    problem = parse_problem_line(text.split("#", 1)[0].strip())
    problem.check(spn.variables)
    return problem


def parse_problems(text: str, spn: Spn) -> list[MapProblem]:
    """문제 파일 전체 파싱 (빈 줄과 주석 무시)"""
    problems = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        problem = parse_problem_line(line, line_no)
        try:
            problem.check(spn.variables)
        except ProblemError as e:
            raise ProblemError(f"{line_no}행: {e}")
        problems.append(problem)
    logger.debug(f"문제 {len(problems)}개 파싱")
    return problems


def load_problems(path: Union[str, Path], spn: Spn) -> list[MapProblem]:
    return parse_problems(Path(path).read_text(encoding="utf-8"), spn)


def format_problems(problems: Sequence[MapProblem]) -> str:
    return "".join(problem.format() + "\n" for problem in problems)
