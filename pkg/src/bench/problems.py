"""
무작위 Q/E/H 문제 묶음 생성
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import ProblemError
from ..reduce.problem import MapProblem
from ..spn.models import Spn

logger = logging.getLogger(__name__)

PROPORTION_TOLERANCE = 1e-9

# 기본 비율 묶음 (Q/E/H)
DEFAULT_PROPORTIONS: tuple[tuple[float, float, float], ...] = (
    (0.3, 0.7, 0.0),
    (0.3, 0.5, 0.2),
    (0.3, 0.3, 0.4),
    (0.3, 0.1, 0.6),
)


@dataclass
class ProblemSuite:
    """
    한 SPN 위의 문제 묶음

    같은 (SPN, 비율, 개수, 시드)로 다시 만들면 동일한 문제가 나온다.
    """
    source: str
    proportion: tuple[float, float, float]
    count: int
    seed: int
    problems: list[MapProblem] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.problems)

    def __iter__(self):
        return iter(self.problems)

    @property
    def label(self) -> str:
        return "/".join(f"{p:g}" for p in self.proportion)


def parse_proportions(text: str) -> tuple[float, float, float]:
    """'0.3,0.3,0.4' → (0.3, 0.3, 0.4)"""
    parts = [part for part in text.replace("/", ",").split(",") if part.strip()]
    if len(parts) != 3:
        raise ProblemError(f"비율은 q,e,h 세 개여야 합니다: '{text}'")
    try:
        values = tuple(float(part) for part in parts)
    except ValueError:
        raise ProblemError(f"비율은 실수여야 합니다: '{text}'")
    check_proportions(values)
    return values


def check_proportions(proportion: Sequence[float]) -> None:
    if len(proportion) != 3:
        raise ProblemError("비율은 (q, e, h) 세 개여야 합니다")
    if any(p < 0 for p in proportion):
        raise ProblemError(f"비율은 음수일 수 없습니다: {tuple(proportion)}")
    if abs(sum(proportion) - 1.0) > PROPORTION_TOLERANCE:
        raise ProblemError(f"비율의 합이 1이 아닙니다: {sum(proportion)!r}")


def apportion(num_vars: int, proportion: Sequence[float]) -> tuple[int, int, int]:
    """
    최대 잉여 배분으로 (|Q|, |E|, |H|) 계산

    내림한 뒤 남는 변수를 잉여가 큰 부분부터 (동점은 Q, E, H 순) 하나씩 준다.
    |Q|가 0이면 나머지 중 가장 큰 부분에서 하나 가져온다.
    """
    check_proportions(proportion)
    quotas = [round(num_vars * p, 9) for p in proportion]
    sizes = [math.floor(q) for q in quotas]
    remaining = num_vars - sum(sizes)
    order = sorted(range(3), key=lambda i: (-(quotas[i] - sizes[i]), i))
    for i in order[:remaining]:
        sizes[i] += 1

    if sizes[0] == 0:
        donor = max((1, 2), key=lambda i: (sizes[i], -i))
        if sizes[donor] == 0:
            raise ProblemError("질의 변수에 배정할 변수가 없습니다")
        sizes[donor] -= 1
        sizes[0] += 1
    return sizes[0], sizes[1], sizes[2]


def generate_problems(
    spn: Spn,
    proportion: Sequence[float],
    count: int,
    seed: int,
    source: str = "spn"
) -> ProblemSuite:
    """
    변수를 무작위로 Q/E/H에 나누고 증거 값을 뽑아 문제 count개 생성

    Raises:
        ProblemError: 비율 오류
    """
    q_size, e_size, _ = apportion(spn.num_vars, proportion)
    rng = np.random.default_rng(seed)

    problems = []
    for _ in range(count):
        order = [int(v) for v in rng.permutation(spn.num_vars)]
        query = order[:q_size]
        evidence_vars = sorted(order[q_size:q_size + e_size])
        hidden = order[q_size + e_size:]
        evidence = {var: int(rng.integers(spn.variables.cardinality(var))) for var in evidence_vars}
        problems.append(MapProblem.create(query, evidence, hidden))

    logger.debug(f"문제 {count}개 생성: 비율 {tuple(proportion)}, seed={seed}")
    return ProblemSuite(
        source=source,
        proportion=tuple(float(p) for p in proportion),
        count=count,
        seed=seed,
        problems=problems,
    )
