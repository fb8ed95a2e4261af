"""
빔 탐색 (BS)

라운드마다 빔의 각 할당에서 도함수 테이블을 한 번 계산한다. 항목 (X, x)는 X 하나만 x로
바꾼 할당의 점수이므로 이웃 전체를 선형 시간에 채점할 수 있다. 현재 빔과 이웃을 합쳐
중복을 없애고 상위 K개를 남긴다.
"""

import logging
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from ..spn.evidence import PartialEvidence
from ..spn.inference import derivatives, node_values
from ..spn.models import Spn
from ..spn.result import SearchStats, SolveResult, SolveStatus
from .best_tree import normalized_greedy
from .budget import Deadline, SolverTimeout

logger = logging.getLogger(__name__)

BeamInit = Literal["random", "ng"]


def _rank_key(item: tuple[tuple[int, ...], float]):
    assignment, value = item
    return (-value, assignment)


@dataclass
class BeamState:
    """점수 내림차순(동점은 할당 사전순)으로 정렬된 빔"""
    members: list[tuple[tuple[int, ...], float]] = field(default_factory=list)
    round: int = 0

    @property
    def best(self) -> tuple[tuple[int, ...], float]:
        return self.members[0]

    @property
    def assignments(self) -> list[tuple[int, ...]]:
        return [assignment for assignment, _ in self.members]


class BeamSearch:
    """한 번의 빔 탐색 실행 (문제마다 새 인스턴스)"""

    def __init__(self, spn: Spn, k: int, deadline: Optional[Deadline] = None):
        if k < 1:
            raise ValueError(f"빔 크기는 1 이상이어야 합니다: {k}")
        self.spn = spn
        self.k = k
        self.deadline = deadline or Deadline()
        self.scope = spn.scope_variables
        self.stats = SearchStats(defaulted_variables=spn.num_vars - len(self.scope))
        self._buffer = [0.0] * len(spn.nodes)

    def _evaluate(self, assignment: tuple[int, ...]) -> float:
        evidence = PartialEvidence.from_assignment(self.spn.variables, assignment)
        return node_values(self.spn, evidence, self._buffer)[-1]

    def _state(self, assignments: Sequence[tuple[int, ...]]) -> BeamState:
        unique = dict.fromkeys(assignments)
        members = sorted(((a, self._evaluate(a)) for a in unique), key=_rank_key)
        return BeamState(members[: self.k])

    def random_assignments(self, seed: Optional[int], count: int) -> list[tuple[int, ...]]:
        """스코프 변수만 균등 추출 (스코프 밖 변수는 0), 중복은 제한 횟수까지 다시 뽑는다"""
        rng = np.random.default_rng(seed)
        result: dict[tuple[int, ...], None] = {}
        attempts = 0
        while len(result) < count and attempts < 10 * count:
            attempts += 1
            values = [0] * self.spn.num_vars
            for var in self.scope:
                values[var] = int(rng.integers(self.spn.variables.cardinality(var)))
            result[tuple(values)] = None
        return list(result)

    def initial_state(
        self,
        seed: Optional[int],
        init: BeamInit,
        initial: Optional[Sequence[Sequence[int]]] = None
    ) -> BeamState:
        if initial is not None:
            if not initial:
                raise ValueError("초기 빔이 비어 있습니다")
            return self._state([tuple(a) for a in initial])
        if init == "ng":
            # NG 할당 + 서로 다른 무작위 할당 K-1개 (잘려 나가지 않음)
            greedy = normalized_greedy(self.spn).assignment
            others = [a for a in self.random_assignments(seed, self.k) if a != greedy]
            return self._state([greedy, *others[: self.k - 1]])
        return self._state(self.random_assignments(seed, self.k))

    def step(self, state: BeamState) -> BeamState:
        """한 라운드: 빔 + 단일 변수 변경 이웃에서 상위 K개"""
        pool: dict[tuple[int, ...], float] = dict(state.members)
        for assignment, _ in state.members:
            self.deadline.check()
            evidence = PartialEvidence.from_assignment(self.spn.variables, assignment)
            table = derivatives(self.spn, evidence)
            for var in self.scope:
                row = table.row(var)
                for value, mutated_score in enumerate(row):
                    if value == assignment[var]:
                        continue
                    mutated = assignment[:var] + (value,) + assignment[var + 1:]
                    if mutated not in pool:
                        pool[mutated] = mutated_score

        self.stats.candidates += len(pool)
        chosen = sorted(pool.items(), key=_rank_key)[: self.k]
        # 빔 점수는 항상 evaluate 값
        members = sorted(((a, self._evaluate(a)) for a, _ in chosen), key=_rank_key)
        return BeamState(members, state.round + 1)

    def run(
        self,
        seed: Optional[int] = None,
        init: BeamInit = "random",
        initial: Optional[Sequence[Sequence[int]]] = None
    ) -> SolveResult:
        state = self.initial_state(seed, init, initial)
        status = SolveStatus.FINISHED
        try:
            while True:
                next_state = self.step(state)
                self.stats.rounds = next_state.round
                improved = next_state.best[1] > state.best[1]
                unchanged = next_state.assignments == state.assignments
                if unchanged or not improved:
                    break
                logger.debug(f"BS{self.k}: 라운드 {next_state.round}, 최고 점수 {next_state.best[1]!r}")
                state = next_state
        except SolverTimeout:
            status = SolveStatus.TIMEOUT_WITH_RESULT
            logger.info(f"BS{self.k}: 예산 소진, 라운드 {state.round}")

        assignment, best_score = state.best
        return SolveResult(
            assignment=assignment,
            score=best_score,
            status=status,
            elapsed=self.deadline.elapsed,
            stats=self.stats,
            zero_mass=best_score == 0.0,
            solver=f"bs{self.k}",
        )


def beam_search(
    spn: Spn,
    k: int,
    seed: Optional[int] = None,
    init: BeamInit = "random",
    initial: Optional[Sequence[Sequence[int]]] = None,
    deadline: Optional[Deadline] = None,
) -> SolveResult:
    """
    빔 탐색 MAX

    Args:
        spn: 대상 SPN
        k: 빔 크기
        seed: 무작위 초기 빔 시드
        init: "random" 또는 "ng" (초기 빔에 NG 할당을 항상 포함)
        initial: 명시적 초기 할당 목록 (지정 시 seed/init 무시)
        deadline: 예산 (소진 시 현재 빔의 최고 할당을 timeout_with_result로 반환)
    """
    return BeamSearch(spn, k, deadline).run(seed, init, initial)
