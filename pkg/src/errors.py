"""
도메인 예외 정의

모든 입력 오류는 ValueError 계열로 취급한다.
"""

from typing import Optional


class SpnFormatError(ValueError):
    """SPN/BN/문제 문서의 구문 또는 참조 오류"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        if self.column is None:
            return f"{self.line}행: {self.message}"
        return f"{self.line}행 {self.column}열: {self.message}"


class SpnStructureError(ValueError):
    """노드 목록 자체가 SPN을 구성할 수 없는 경우 (범위 밖 참조, 전방 참조 등)"""

    def __init__(self, message: str, node_id: Optional[int] = None):
        self.message = message
        self.node_id = node_id
        super().__init__(message if node_id is None else f"노드 {node_id}: {message}")


class SpnValidationError(ValueError):
    """완전성/분해성/도달성 검증 실패"""

    def __init__(self, report):
        self.report = report
        super().__init__(f"SPN 검증 실패: {report.summary()}")


class ProblemError(ValueError):
    """잘못된 Q/E/H 분할 또는 증거 값"""


class BnError(ValueError):
    """트리 베이지안 네트워크 정의 오류"""


class OracleLimitError(ValueError):
    """지수 시간 오라클의 상한 초과"""

    def __init__(self, message: str, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{message} ({count} > {cap})")
