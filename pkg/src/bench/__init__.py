"""
벤치마크 모듈

무작위 Q/E/H 문제 생성, 예산 기반 다중 솔버 실행, 승리/완료 횟수와 지배 관계 집계, CSV 출력
"""

from .problems import (
    DEFAULT_PROPORTIONS,
    ProblemSuite,
    apportion,
    parse_proportions,
    generate_problems,
)
from .runner import (
    BenchCell,
    ProblemRecord,
    SolverSummary,
    DominanceViolation,
    BenchReport,
    dominance_chain,
    solve_problem,
    run_benchmark,
)
from .report import (
    CELL_HEADER,
    SUMMARY_HEADER,
    PROBLEM_HEADER,
    DOMINANCE_HEADER,
    format_score,
    write_csv,
    report_to_csv,
    write_report,
)

__all__ = [
    "DEFAULT_PROPORTIONS",
    "ProblemSuite",
    "apportion",
    "parse_proportions",
    "generate_problems",
    "BenchCell",
    "ProblemRecord",
    "SolverSummary",
    "DominanceViolation",
    "BenchReport",
    "dominance_chain",
    "solve_problem",
    "run_benchmark",
    "CELL_HEADER",
    "SUMMARY_HEADER",
    "PROBLEM_HEADER",
    "DOMINANCE_HEADER",
    "format_score",
    "write_csv",
    "report_to_csv",
    "write_report",
]
