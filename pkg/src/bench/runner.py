"""
벤치마크 실행기

문제마다 MAP→MAX 변환을 한 번 (솔버 시간 측정 밖에서) 수행하고, 변환된 SPN에 각 솔버를
같은 예산으로 실행한다. 솔버가 예외로 끝나면 그 칸만 결과 없음으로 기록한다.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..config import settings
from ..reduce.map2max import map_to_max
from ..reduce.problem import MapProblem
from ..solver.registry import SolverSpec
from ..spn.models import Spn
from ..spn.result import SolveStatus
from .problems import ProblemSuite

logger = logging.getLogger(__name__)


@dataclass
class BenchCell:
    """(솔버, 문제) 한 칸의 결과 (error는 솔버가 예외로 끝난 경우의 메시지)"""
    solver: str
    problem: int
    score: float
    elapsed: float
    status: SolveStatus
    assignment: Optional[tuple[int, ...]] = None
    error: Optional[str] = None

    @property
    def has_result(self) -> bool:
        return self.status is not SolveStatus.TIMEOUT_NO_RESULT


@dataclass
class ProblemRecord:
    """문제별 변환 시간과 분할 크기"""
    index: int
    reduce_time: float
    query: int
    evidence: int
    hidden: int


@dataclass
class SolverSummary:
    solver: str
    wins: int
    finished: int
    mean_time: float


@dataclass
class DominanceViolation:
    """upper 점수가 lower 점수보다 낮았던 문제"""
    problem: int
    upper: str
    lower: str
    upper_score: float
    lower_score: float


# 지배 관계 비교의 상대 허용 오차
DOMINANCE_TOLERANCE = 1e-12


def dominance_chain(solvers: Sequence[SolverSpec]) -> list[str]:
    """
    점수가 내림차순이어야 하는 솔버 라벨 순서

    정확한 솔버 → KBT (K 내림차순) → BT. 나머지 솔버는 포함하지 않는다.
    """
    exact = [spec.label for spec in solvers if spec.kind == "exact"]
    kbt = [spec.label for spec in sorted(
        (spec for spec in solvers if spec.kind == "kbt"), key=lambda spec: -spec.k
    )]
    bt = [spec.label for spec in solvers if spec.kind == "bt"]
    return exact + kbt + bt


def _qualifies(cell: BenchCell, exact: bool) -> bool:
    """정확한 솔버는 완료한 경우만, 나머지는 결과가 있는 경우만 비교"""
    if exact:
        return cell.status is SolveStatus.FINISHED
    return cell.has_result
@dataclass
class BenchReport:
    """
    벤치마크 결과

    승리 횟수: 문제별 최고 점수와 정확히 같은 점수를 낸 횟수 (동점은 모두 승리,
    결과 없음은 -inf로 취급해 승리하지 못한다)
    완료 횟수: 예산 안에 finished 상태로 끝난 횟수
    dominance: 문제마다 점수가 내림차순이어야 하는 솔버 순서 (정확한 솔버 → KBT → BT)
    """
    solvers: list[str]
    cells: list[BenchCell] = field(default_factory=list)
    problems: list[ProblemRecord] = field(default_factory=list)
    budget: Optional[float] = None
    dominance: list[str] = field(default_factory=list)
    exact_solvers: list[str] = field(default_factory=list)

    def cell(self, solver: str, problem: int) -> BenchCell:
        for cell in self.cells:
            if cell.solver == solver and cell.problem == problem:
                return cell
        raise KeyError((solver, problem))

    def best_scores(self) -> dict[int, float]:
        best: dict[int, float] = {}
        for cell in self.cells:
            score = cell.score if cell.has_result else float("-inf")
            if score > best.get(cell.problem, float("-inf")):
                best[cell.problem] = score
        return best

    def wins(self) -> dict[str, int]:
        best = self.best_scores()
        counts = dict.fromkeys(self.solvers, 0)
        for cell in self.cells:
            if cell.has_result and cell.problem in best and cell.score == best[cell.problem]:
                counts[cell.solver] += 1
        return counts

    def finished(self) -> dict[str, int]:
        counts = dict.fromkeys(self.solvers, 0)
        for cell in self.cells:
            if cell.status is SolveStatus.FINISHED:
                counts[cell.solver] += 1
        return counts

    def mean_times(self) -> dict[str, float]:
        """솔버별 평균 실행 시간 (초, 문제가 없으면 0)"""
        result = {}
        for solver in self.solvers:
            times = [cell.elapsed for cell in self.cells if cell.solver == solver]
            result[solver] = float(np.mean(times)) if times else 0.0
        return result

    def summaries(self) -> list[SolverSummary]:
        wins, finished, means = self.wins(), self.finished(), self.mean_times()
        return [
            SolverSummary(solver, wins[solver], finished[solver], means[solver])
            for solver in self.solvers
        ]

    def dominance_violations(self) -> list[DominanceViolation]:
        """
        dominance 순서에서 앞 솔버의 점수가 뒤 솔버보다 낮았던 (문제, 쌍) 목록

        정확한 솔버는 finished일 때만, 나머지는 결과가 있을 때만 비교한다.
        """
        exact = set(self.exact_solvers)
        violations = []
        for record in self.problems:
            cells = {
                cell.solver: cell for cell in self.cells
                if cell.problem == record.index and cell.solver in self.dominance
            }
            ranked = [
                cells[label] for label in self.dominance
                if label in cells and _qualifies(cells[label], label in exact)
            ]
            for position, upper in enumerate(ranked):
                for lower in ranked[position + 1:]:
                    floor = lower.score - DOMINANCE_TOLERANCE * abs(lower.score)
                    if upper.score < floor:
                        violations.append(DominanceViolation(
                            record.index, upper.solver, lower.solver, upper.score, lower.score
                        ))
        return violations


def solve_problem(
    spn: Spn,
    index: int,
    problem: MapProblem,
    solvers: Sequence[SolverSpec],
    budget: Optional[float]
) -> tuple[ProblemRecord, list[BenchCell]]:
    """문제 하나: 변환 후 모든 솔버 실행 (작업자 프로세스에서도 호출)"""
    started = time.perf_counter()
    reduced = map_to_max(spn, problem)
    record = ProblemRecord(
        index=index,
        reduce_time=time.perf_counter() - started,
        query=len(problem.query),
        evidence=len(problem.evidence),
        hidden=len(problem.hidden),
    )

    cells = []
    for spec in solvers:
        solver_started = time.perf_counter()
        try:
            result = spec.run(reduced, budget)
        except Exception as e:
            logger.exception(f"문제 {index}: {spec.label} 실행 중 오류 발생: {e}")
            cells.append(BenchCell(
                solver=spec.label,
                problem=index,
                score=float("-inf"),
                elapsed=time.perf_counter() - solver_started,
                status=SolveStatus.TIMEOUT_NO_RESULT,
                error=f"{type(e).__name__}: {e}",
            ))
            continue
        cells.append(BenchCell(
            solver=spec.label,
            problem=index,
            score=result.score,
            elapsed=result.elapsed,
            status=result.status,
            assignment=result.assignment,
        ))
    return record, cells


def run_benchmark(
    spn: Spn,
    suite: ProblemSuite,
    solvers: Sequence[SolverSpec],
    budget: Optional[float] = None,
    workers: Optional[int] = None
) -> BenchReport:
    """
    문제 묶음에 솔버들을 실행

    Args:
        spn: 원래 SPN
        suite: 문제 묶음
        solvers: 솔버 구성 (라벨이 겹치면 안 됨)
        budget: 솔버별 예산 (초)
        workers: 작업자 프로세스 수 (기본 settings.bench_workers, 1이면 순차)
    """
    labels = [spec.label for spec in solvers]
    if len(set(labels)) != len(labels):
        raise ValueError(f"솔버 이름이 중복되었습니다: {labels}")

    workers = settings.bench_workers if workers is None else workers
    report = BenchReport(
        solvers=labels,
        budget=budget,
        dominance=dominance_chain(solvers),
        exact_solvers=[spec.label for spec in solvers if spec.kind == "exact"],
    )
    results: dict[int, tuple[ProblemRecord, list[BenchCell]]] = {}

    logger.info(f"벤치마크 시작: 문제 {len(suite)}개, 솔버 {labels}, 예산 {budget}")
    if workers > 1 and len(suite) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {
                executor.submit(solve_problem, spn, index, problem, solvers, budget): index
                for index, problem in enumerate(suite)
            }
            for future in as_completed(futures):
                index = futures[future]
                results[index] = future.result()
                logger.info(f"  문제 {index} 완료 ({len(results)}/{len(suite)})")
    else:
        for index, problem in enumerate(suite):
            results[index] = solve_problem(spn, index, problem, solvers, budget)
            logger.info(f"  문제 {index} 완료 ({index + 1}/{len(suite)})")

    # 문제 순서 보장
    for index in sorted(results):
        record, cells = results[index]
        report.problems.append(record)
        report.cells.extend(cells)

    for summary in report.summaries():
        logger.info(
            f"  {summary.solver}: 승리 {summary.wins}, 완료 {summary.finished}, "
            f"평균 {summary.mean_time * 1000:.1f}ms"
        )
    for violation in report.dominance_violations():
        logger.warning(
            f"  문제 {violation.problem}: {violation.upper} {violation.upper_score!r} < "
            f"{violation.lower} {violation.lower_score!r}"
        )
    return report
