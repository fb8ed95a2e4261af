"""
리포트 생성 모듈
"""

from .generator import ReportGenerator, get_generator

__all__ = ["ReportGenerator", "get_generator"]
