"""
벤치마크 CSV 출력

네 구역을 빈 줄로 구분한다:
    solver,problem,score,time_ms,status
    solver,wins,finished,mean_time_ms
    problem,reduce_ms,q,e,h
    problem,upper,lower,upper_score,lower_score   (지배 관계 위반, 보통 비어 있음)
점수는 17자리 유효숫자로 써서 파일만으로 승자 동점 판정을 재현할 수 있다.
"""

import csv
import io
import logging
from pathlib import Path
from typing import TextIO, Union

from .runner import BenchReport

logger = logging.getLogger(__name__)

CELL_HEADER = ["solver", "problem", "score", "time_ms", "status"]
SUMMARY_HEADER = ["solver", "wins", "finished", "mean_time_ms"]
PROBLEM_HEADER = ["problem", "reduce_ms", "q", "e", "h"]
DOMINANCE_HEADER = ["problem", "upper", "lower", "upper_score", "lower_score"]


def format_score(value: float) -> str:
    return format(value, ".17g")


def _format_ms(seconds: float) -> str:
    return f"{seconds * 1000:.3f}"


def write_csv(report: BenchReport, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")

    writer.writerow(CELL_HEADER)
    for cell in report.cells:
        writer.writerow([
            cell.solver,
            cell.problem,
            format_score(cell.score),
            _format_ms(cell.elapsed),
            cell.status.value,
        ])

    writer.writerow([])
    writer.writerow(SUMMARY_HEADER)
    if report.problems:
        for summary in report.summaries():
            writer.writerow([
                summary.solver,
                summary.wins,
                summary.finished,
                _format_ms(summary.mean_time),
            ])

    writer.writerow([])
    writer.writerow(PROBLEM_HEADER)
    for record in report.problems:
        writer.writerow([
            record.index,
            _format_ms(record.reduce_time),
            record.query,
            record.evidence,
            record.hidden,
        ])

    writer.writerow([])
    writer.writerow(DOMINANCE_HEADER)
    for violation in report.dominance_violations():
        writer.writerow([
            violation.problem,
            violation.upper,
            violation.lower,
            format_score(violation.upper_score),
            format_score(violation.lower_score),
        ])


def report_to_csv(report: BenchReport) -> str:
    buffer = io.StringIO()
    write_csv(report, buffer)
    return buffer.getvalue()


def write_report(report: BenchReport, path: Union[str, Path]) -> Path:
    """
    CSV 파일로 저장

    Raises:
        OSError: 쓰기 실패
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        write_csv(report, f)
    logger.info(f"벤치마크 CSV 저장: {path}")
    return path
