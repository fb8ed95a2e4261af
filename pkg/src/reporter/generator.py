"""
벤치마크 HTML 요약 생성기
"""

import logging
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

from jinja2 import Environment, FileSystemLoader, select_autoescape

from ..bench.runner import BenchReport
from ..config import settings

logger = logging.getLogger(__name__)


class ReportGenerator:
    """벤치마크 결과 HTML 요약 생성기"""

    def __init__(self, template_dir: str = None):
        """
        Args:
            template_dir: 템플릿 디렉토리 경로
        """
        if template_dir is None:
            template_dir = settings.templates_dir

        self.template_dir = Path(template_dir)

        # Jinja2 환경 설정
        self._env = Environment(
            loader=FileSystemLoader(str(self.template_dir)),
            autoescape=select_autoescape(['html', 'xml']),
            trim_blocks=True,
            lstrip_blocks=True,
        )

        # 커스텀 필터 등록
        self._env.filters['format_ms'] = self._format_ms
        self._env.filters['format_score'] = self._format_score

    @staticmethod
    def _format_ms(seconds: float) -> str:
        """초 → 밀리초 문자열"""
        if seconds is None:
            return ""
        return f"{seconds * 1000:.1f}"

    @staticmethod
    def _format_score(value: float, digits: int = 6) -> str:
        """점수 표시 (결과 없음은 '-')"""
        if value is None or value == float("-inf"):
            return "-"
        return f"{value:.{digits}g}"

    def _context(self, report: BenchReport, title: str, suite_label: Optional[str]) -> dict:
        summaries = report.summaries()
        problem_count = len(report.problems)
        reduce_times = [record.reduce_time for record in report.problems]
        best = report.best_scores()
        violations = report.dominance_violations()

        rows = []
        for record in report.problems:
            cells = [report.cell(solver, record.index) for solver in report.solvers]
            rows.append({
                "record": record,
                "cells": cells,
                "best": best.get(record.index, float("-inf")),
            })

        return {
            "title": title,
            "suite_label": suite_label,
            "budget": report.budget,
            "solvers": report.solvers,
            "summaries": summaries,
            "problem_count": problem_count,
            "mean_reduce_time": sum(reduce_times) / problem_count if problem_count else 0.0,
            "rows": rows,
            "dominance": report.dominance,
            "violations": violations,
            "generated_at": datetime.now(),
        }

    def generate(
        self,
        report: BenchReport,
        title: str = "SpnMap 벤치마크",
        suite_label: Optional[str] = None
    ) -> str:
        """
        벤치마크 요약 HTML 생성

        Args:
            report: 벤치마크 결과
            title: 페이지 제목
            suite_label: 문제 묶음 설명 (예: 비율)

        Returns:
            HTML 문자열
        """
        context = self._context(report, title, suite_label)
        try:
            template = self._env.get_template("bench_report.html")
            return template.render(**context)

        except Exception as e:
            logger.error(f"템플릿 렌더링 실패: {e}")
            # 폴백: 간단한 HTML 생성
            return self._generate_fallback_html(report, title)

    def _generate_fallback_html(self, report: BenchReport, title: str) -> str:
        """템플릿 실패 시 폴백 HTML 생성"""
        html_parts = [
            "<!DOCTYPE html>",
            "<html><head><meta charset='utf-8'></head>",
            "<body style='font-family: Arial, sans-serif; max-width: 800px; margin: 0 auto; padding: 20px;'>",
            f"<h1>{title}</h1>",
            f"<p>문제 {len(report.problems)}개, 솔버 {len(report.solvers)}개, "
            f"지배 관계 위반 {len(report.dominance_violations())}건</p>",
            "<table border='1' cellpadding='4'>",
            "<tr><th>솔버</th><th>승리</th><th>완료</th><th>평균 시간(ms)</th></tr>",
        ]
        for summary in report.summaries():
            html_parts.append(
                f"<tr><td>{summary.solver}</td><td>{summary.wins}</td>"
                f"<td>{summary.finished}</td><td>{self._format_ms(summary.mean_time)}</td></tr>"
            )
        html_parts.append("</table>")
        html_parts.append("</body></html>")
        return "\n".join(html_parts)

    def write(
        self,
        report: BenchReport,
        path: Union[str, Path],
        title: str = "SpnMap 벤치마크",
        suite_label: Optional[str] = None
    ) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.generate(report, title, suite_label), encoding="utf-8")
        logger.info(f"벤치마크 HTML 저장: {path}")
        return path


# 편의 함수
_generator: Optional[ReportGenerator] = None


def get_generator() -> ReportGenerator:
    """싱글톤 리포트 생성기 반환"""
    global _generator
    if _generator is None:
        _generator = ReportGenerator()
    return _generator
