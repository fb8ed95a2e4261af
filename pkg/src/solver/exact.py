"""
정확한 MAX 분기 한정 탐색 (anytime)

구성:
    pruning   "mc" (주변 확률 검사) 또는 "fc" (도함수 기반 전방 검사, 고정점까지 반복)
    ordering  남은 값이 가장 적은 변수 선택 + 부분 공간 점수 내림차순 값 정렬
    staging   결정된 변수가 stage_interval개 늘 때마다 증거로 간주해 SPN 축소
"""

import logging
from typing import Callable, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import settings
from ..reduce.map2max import map_to_max
from ..reduce.problem import MapProblem
from ..spn.evidence import PartialEvidence
from ..spn.inference import DerivativeTable, derivatives, evaluate, node_values
from ..spn.models import Spn
from ..spn.result import SearchStats, SolveResult, SolveStatus
from .best_tree import best_tree
from .budget import Deadline, SolverTimeout

logger = logging.getLogger(__name__)

# (현재 SPN, 검사할 공간, 현재 최고 점수)
PruneListener = Callable[[Spn, PartialEvidence, float], None]


class SearchConfig(BaseModel):
    """정확한 솔버 구성"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    pruning: Literal["mc", "fc"] = "fc"
    ordering: bool = False
    staging: bool = False
    stage_interval: int = Field(default_factory=lambda: settings.stage_interval, ge=1)
    budget: Optional[float] = Field(default=None, ge=0)  # 초
    initializer: Literal["first", "random", "bt"] = "bt"
    seed: Optional[int] = None

    @property
    def label(self) -> str:
        """mc, fc, fc+o, fc+o+s 형식의 이름"""
        label = self.pruning
        if self.ordering:
            label += "+o"
        if self.staging:
            label += "+s"
        return label


# ----------------------------------------------------------------------
# 가지치기 / 순서 / 축소


# 동점 하한의 상대 허용 오차 (축소 SPN과 원래 SPN의 부동소수점 차이)
TIE_TOLERANCE = 1e-12


def _keeps(
    bound: float,
    best_score: float,
    lowest: Sequence[int],
    incumbent: Optional[tuple[int, ...]]
) -> bool:
    """
    상한 bound인 공간을 남길지 여부

    incumbent가 주어지면 공간의 사전순 최소 할당이 incumbent보다 작을 때 동점 상한도 남긴다.
    """
    if bound > best_score:
        return True
    if incumbent is None or tuple(lowest) >= incumbent:
        return False
    return bound >= best_score - TIE_TOLERANCE * abs(best_score)


def marginal_checking(
    spn: Spn,
    space: PartialEvidence,
    best_score: float,
    incumbent: Optional[tuple[int, ...]] = None
) -> PartialEvidence:
    """S(𝒳) > best_score이면 공간 유지, 아니면 빈 공간 (incumbent가 있으면 사전순 동점 유지)"""
    if _keeps(evaluate(spn, space), best_score, space.lowest_values(), incumbent):
        return space
    return PartialEvidence.empty(spn.variables)


def forward_checking_table(
    spn: Spn,
    space: PartialEvidence,
    best_score: float,
    stats: Optional[SearchStats] = None,
    incumbent: Optional[tuple[int, ...]] = None
) -> tuple[PartialEvidence, Optional[DerivativeTable]]:
    """
    전방 검사 고정점과 마지막 도함수 테이블

    매 패스마다 도함수 테이블을 새로 계산하고 best_score ≥ D_x인 값을 모두 제거한다.
    incumbent가 주어지면 x로 고정한 공간의 사전순 최소 할당이 incumbent보다 작은 동점 값은 남긴다.
    SPN 루트 스코프 밖 변수(축소로 사라진 변수 포함)는 검사하지 않는다.

    Returns:
        (남은 공간, 그 공간의 도함수 테이블). 공간이 비면 테이블은 None
    """
    scope = spn.scope_variables
    while True:
        if space.is_empty:
            return PartialEvidence.empty(spn.variables), None
        table = derivatives(spn, space)
        if stats is not None:
            stats.fc_passes += 1

        masks = list(space.masks)
        lowest = space.lowest_values()
        changed = False
        for var in scope:
            row = table.row(var)
            low = lowest[var]
            for value in space.values(var):
                lowest[var] = value
                if not _keeps(row[value], best_score, lowest, incumbent):
                    masks[var] &= ~(1 << value)
                    changed = True
                    if stats is not None:
                        stats.fc_removed_values += 1
            lowest[var] = low
        if not changed:
            return space, table
        space = space.with_masks(masks)


def forward_checking(spn: Spn, space: PartialEvidence, best_score: float) -> PartialEvidence:
    """best_score 이하의 도함수를 갖는 값을 고정점까지 제거 (빈 공간일 수 있음)"""
    pruned, _ = forward_checking_table(spn, space, best_score)
    return pruned


def choose_variable(space: PartialEvidence, variables: Optional[Sequence[int]] = None) -> int:
    """
    남은 값이 가장 적은 미결정 변수 (동점은 낮은 인덱스)

    Raises:
        ValueError: 모든 변수가 결정된 경우
    """
    candidates = range(len(space.masks)) if variables is None else sorted(variables)
    best_var, best_size = -1, None
    for var in candidates:
        size = space.size(var)
        if size > 1 and (best_size is None or size < best_size):
            best_var, best_size = var, size
    if best_var < 0:
        raise ValueError("모든 변수가 결정되었습니다")
    return best_var


def order_values(
    spn: Spn,
    space: PartialEvidence,
    var: int,
    table: Optional[DerivativeTable] = None
) -> list[int]:
    """
    𝒳[var]를 S({x} × 𝒳[X∖{var}]) 내림차순으로 정렬 (동점은 낮은 값)

    table이 주어지면 재사용한다.
    """
    if table is None:
        table = derivatives(spn, space)
    row = table.row(var)
    return sorted(space.values(var), key=lambda value: (-row[value], value))


def stage_reduce(spn: Spn, determined: dict[int, int]) -> Spn:
    """
    결정된 변수를 증거로 두고 나머지를 질의 변수로 하는 MAP→MAX 축소

    Raises:
        ValueError: 결정된 변수가 없거나 모든 변수가 결정된 경우
    """
    if not determined:
        raise ValueError("결정된 변수 없이 축소할 수 없습니다")
    query = [var for var in range(spn.num_vars) if var not in determined]
    if not query:
        raise ValueError("미결정 변수가 없습니다")
    return map_to_max(spn, MapProblem.create(query, determined))


# ----------------------------------------------------------------------
# 탐색


class ExactSolver:
    """
    정확한 MAX 솔버 (문제마다 새 인스턴스)

    탐색 변수는 루트 스코프 변수이며 스코프 밖 변수는 0으로 고정한다. 현재 최고 할당의 점수는
    항상 원래 SPN의 evaluate 값이다.
    """

    def __init__(
        self,
        spn: Spn,
        config: Optional[SearchConfig] = None,
        listener: Optional[PruneListener] = None
    ):
        self.spn = spn
        self.config = config or SearchConfig()
        self.listener = listener
        self.stats = SearchStats()
        self.search_vars = spn.scope_variables
        self.best: Optional[tuple[int, ...]] = None
        self.best_score = float("-inf")
        self.deadline: Optional[Deadline] = None
        self._buffer = [0.0] * len(spn.nodes)

    # ------------------------------------------------------------------

    def _score(self, assignment: tuple[int, ...]) -> float:
        evidence = PartialEvidence.from_assignment(self.spn.variables, assignment)
        return node_values(self.spn, evidence, self._buffer)[-1]

    def _offer(self, assignment: tuple[int, ...]) -> None:
        """더 높은 점수, 또는 같은 점수의 사전순으로 더 작은 할당이면 교체"""
        candidate = self._score(assignment)
        if candidate > self.best_score or (
            candidate == self.best_score and self.best is not None and assignment < self.best
        ):
            self.best, self.best_score = assignment, candidate
            self.stats.incumbent_updates += 1
            logger.debug(f"{self.config.label}: 최고 점수 갱신 {candidate!r}")

    def initial_assignment(self) -> tuple[int, ...]:
        """구성된 초기화 방법의 할당"""
        initializer = self.config.initializer
        if initializer == "bt":
            return best_tree(self.spn).assignment
        values = [0] * self.spn.num_vars
        if initializer == "random":
            rng = np.random.default_rng(self.config.seed)
            for var in self.search_vars:
                values[var] = int(rng.integers(self.spn.variables.cardinality(var)))
        return tuple(values)

    def initial_space(self) -> PartialEvidence:
        searched = set(self.search_vars)
        fixed = {var: [0] for var in range(self.spn.num_vars) if var not in searched}
        self.stats.defaulted_variables = len(fixed)
        return PartialEvidence.from_values(self.spn.variables, fixed)

    def prune(self, spn: Spn, space: PartialEvidence) -> tuple[PartialEvidence, Optional[DerivativeTable]]:
        """구성된 검사기로 공간 가지치기"""
        if self.listener is not None:
            self.listener(spn, space, self.best_score)

        if self.config.pruning == "mc":
            pruned = marginal_checking(spn, space, self.best_score, self.best)
            if pruned.is_empty:
                self.stats.mc_prunes += 1
            return pruned, None

        pruned, table = forward_checking_table(spn, space, self.best_score, self.stats, self.best)
        if pruned.is_empty:
            self.stats.fc_prunes += 1
        return pruned, table

    def search(
        self,
        spn: Spn,
        space: PartialEvidence,
        table: Optional[DerivativeTable],
        staged_count: int
    ) -> None:
        self.deadline.check()
        self.stats.nodes_expanded += 1

        if space.is_complete:
            self._offer(space.assignment())
            return

        if self.config.staging:
            determined = space.determined_values(self.search_vars)
            if len(determined) - staged_count >= self.config.stage_interval:
                spn = stage_reduce(spn, space.determined_values())
                staged_count = len(determined)
                table = None
                self.stats.stage_reductions += 1
                logger.debug(f"{self.config.label}: 축소 → {spn!r}")

        if self.config.ordering:
            var = choose_variable(space, self.search_vars)
            values = order_values(spn, space, var, table)
        else:
            var = next(v for v in self.search_vars if not space.is_determined(v))
            values = space.values(var)

        for value in values:
            child, child_table = self.prune(spn, space.restrict(var, value))
            if not child.is_empty:
                self.search(spn, child, child_table, staged_count)

    def solve(self) -> SolveResult:
        self.deadline = Deadline(
            self.config.budget if self.config.budget is not None else settings.default_budget
        )
        self._offer(self.initial_assignment())

        status = SolveStatus.FINISHED
        try:
            self.search(self.spn, self.initial_space(), None, 0)
        except SolverTimeout:
            status = SolveStatus.TIMEOUT_WITH_RESULT
            logger.info(f"{self.config.label}: 예산 소진, 노드 {self.stats.nodes_expanded}개 확장")

        logger.info(f"{self.config.label}: {status.value}, 점수 {self.best_score!r}")
        return SolveResult(
            assignment=self.best,
            score=self.best_score,
            status=status,
            elapsed=self.deadline.elapsed,
            stats=self.stats,
            zero_mass=self.best_score == 0.0,
            solver=self.config.label,
        )


def max_exact(
    spn: Spn,
    config: Optional[SearchConfig] = None,
    listener: Optional[PruneListener] = None
) -> SolveResult:
    """
    정확한 MAX

    예산 안에 끝나면 전역 최댓값, 아니면 지금까지의 최고 할당 (초기화 할당 이상)을 반환한다.
    """
    return ExactSolver(spn, config, listener).solve()
