"""
시간 예산 관리
"""

import time
from typing import Optional


class SolverTimeout(Exception):
    """예산 소진 (솔버 진입 함수 안에서만 잡힌다)"""


class Deadline:
    """
    벽시계 기준 마감 시각

    budget이 None이면 무제한. check()는 탐색 노드 하나를 펼칠 때마다 호출되므로
    검사 간격은 노드 확장 1회 이하이다.
    """

    def __init__(self, budget: Optional[float] = None):
        self.started = time.perf_counter()
        self.budget = budget
        self._deadline = None if budget is None else self.started + budget

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.started

    @property
    def expired(self) -> bool:
        if self._deadline is None:
            return False
        return time.perf_counter() >= self._deadline

    def check(self) -> None:
        """
        Raises:
            SolverTimeout: 마감 시각이 지난 경우
        """
        if self.expired:
            raise SolverTimeout()
