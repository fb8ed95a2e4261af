"""
솔버 결과 타입
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class SolveStatus(Enum):
    """솔버 종료 상태"""
    FINISHED = "finished"
    TIMEOUT_WITH_RESULT = "timeout_with_result"
    TIMEOUT_NO_RESULT = "timeout_no_result"


@dataclass
class SearchStats:
    """탐색 통계"""
    nodes_expanded: int = 0
    mc_prunes: int = 0                # MC가 비운 공간 수
    fc_prunes: int = 0                # FC가 비운 공간 수
    fc_removed_values: int = 0        # FC가 제거한 값 수
    fc_passes: int = 0                # FC 도함수 재계산 횟수
    stage_reductions: int = 0
    incumbent_updates: int = 0
    rounds: int = 0                   # 빔 탐색 라운드
    candidates: int = 0               # KBT 후보 / 빔 풀 크기
    zero_weight_sums: int = 0         # NG에서 가중치가 모두 0인 합 노드
    defaulted_variables: int = 0      # 스코프 밖이라 0으로 채운 변수 수


@dataclass
class SolveResult:
    """
    MAX 솔버 결과

    score는 항상 spn-core의 evaluate로 계산한 할당 점수이며 트리 값이 아니다.
    TIMEOUT_NO_RESULT이면 assignment는 None, score는 -inf.
    """
    assignment: Optional[tuple[int, ...]]
    score: float
    status: SolveStatus
    elapsed: float = 0.0
    stats: SearchStats = field(default_factory=SearchStats)
    zero_mass: bool = False
    solver: str = ""

    @classmethod
    def no_result(cls, elapsed: float, solver: str = "", stats: Optional[SearchStats] = None) -> "SolveResult":
        return cls(
            assignment=None,
            score=float("-inf"),
            status=SolveStatus.TIMEOUT_NO_RESULT,
            elapsed=elapsed,
            stats=stats or SearchStats(),
            solver=solver,
        )

    @property
    def finished(self) -> bool:
        return self.status is SolveStatus.FINISHED

    @property
    def has_result(self) -> bool:
        return self.assignment is not None
