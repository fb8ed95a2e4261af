"""
부분 증거 (변수별 허용 값 집합)

각 변수의 허용 집합은 정수 비트셋으로 표현한다. 완전 할당은 모든 집합이 원소 하나인 특수한 경우.
"""

from typing import Iterable, Mapping, Optional, Sequence

from .models import VariableTable


class PartialEvidence:
    """변수별 허용 값 집합의 곱공간"""

    __slots__ = ("variables", "masks")

    def __init__(self, variables: VariableTable, masks: Sequence[int]):
        if len(masks) != variables.count:
            raise ValueError(
                f"변수 개수 불일치: 증거 {len(masks)}개, 변수 테이블 {variables.count}개"
            )
        self.variables = variables
        self.masks: tuple[int, ...] = tuple(masks)

    # ------------------------------------------------------------------
    # 생성

    @classmethod
    def full(cls, variables: VariableTable) -> "PartialEvidence":
        """val(X) 전체"""
        return cls(variables, [(1 << card) - 1 for card in variables.cardinalities])

    @classmethod
    def from_assignment(cls, variables: VariableTable, assignment: Sequence[int]) -> "PartialEvidence":
        """완전 할당 → 원소 하나짜리 집합들"""
        if len(assignment) != variables.count:
            raise ValueError(
                f"변수 개수 불일치: 할당 {len(assignment)}개, 변수 테이블 {variables.count}개"
            )
        for var, value in enumerate(assignment):
            if not 0 <= value < variables.cardinality(var):
                raise ValueError(f"변수 {var}의 값 범위 초과: {value}")
        return cls(variables, [1 << value for value in assignment])

    @classmethod
    def from_values(
        cls,
        variables: VariableTable,
        allowed: Mapping[int, Iterable[int]]
    ) -> "PartialEvidence":
        """지정한 변수만 허용 집합을 제한하고 나머지는 전체 허용"""
        masks = [(1 << card) - 1 for card in variables.cardinalities]
        for var, values in allowed.items():
            if not 0 <= var < variables.count:
                raise ValueError(f"변수 인덱스 범위 초과: {var}")
            mask = 0
            for value in values:
                if not 0 <= value < variables.cardinality(var):
                    raise ValueError(f"변수 {var}의 값 범위 초과: {value}")
                mask |= 1 << value
            masks[var] = mask
        return cls(variables, masks)

    # ------------------------------------------------------------------
    # 조회

    def allows(self, var: int, value: int) -> bool:
        return bool(self.masks[var] >> value & 1)

    def values(self, var: int) -> list[int]:
        """변수의 허용 값 (오름차순)"""
        mask = self.masks[var]
        return [value for value in range(self.variables.cardinality(var)) if mask >> value & 1]

    def size(self, var: int) -> int:
        return bin(self.masks[var]).count("1")

    def is_determined(self, var: int) -> bool:
        mask = self.masks[var]
        return mask != 0 and mask & (mask - 1) == 0

    @property
    def is_empty(self) -> bool:
        """어떤 변수든 허용 집합이 비면 공간 전체가 빈 공간"""
        return any(mask == 0 for mask in self.masks)

    @property
    def is_complete(self) -> bool:
        return all(self.is_determined(var) for var in range(len(self.masks)))

    def assignment(self) -> tuple[int, ...]:
        """모든 변수가 결정된 경우의 유일한 할당"""
        if not self.is_complete:
            raise ValueError("결정되지 않은 변수가 있습니다")
        return tuple(mask.bit_length() - 1 for mask in self.masks)

    def lowest_values(self) -> list[int]:
        """변수별 가장 작은 허용 값 (공간 안 사전순 최소 할당, 빈 변수는 -1)"""
        return [(mask & -mask).bit_length() - 1 for mask in self.masks]

    def determined_values(self, variables: Optional[Iterable[int]] = None) -> dict[int, int]:
        """결정된 변수 → 값"""
        candidates = range(len(self.masks)) if variables is None else variables
        return {
            var: self.masks[var].bit_length() - 1
            for var in candidates
            if self.is_determined(var)
        }

    def contains(self, assignment: Sequence[int]) -> bool:
        return all(mask >> value & 1 for mask, value in zip(self.masks, assignment))

    # ------------------------------------------------------------------
    # 변형 (새 객체 반환)

    def restrict(self, var: int, value: int) -> "PartialEvidence":
        """{value} × 𝒳[X∖{var}]"""
        masks = list(self.masks)
        masks[var] = 1 << value
        return PartialEvidence(self.variables, masks)

    def without(self, var: int, value: int) -> "PartialEvidence":
        """(𝒳[var]∖{value}) × 𝒳[X∖{var}]"""
        masks = list(self.masks)
        masks[var] &= ~(1 << value)
        return PartialEvidence(self.variables, masks)

    def with_masks(self, masks: Sequence[int]) -> "PartialEvidence":
        return PartialEvidence(self.variables, masks)

    @classmethod
    def empty(cls, variables: VariableTable) -> "PartialEvidence":
        """가지치기된 빈 공간"""
        return cls(variables, [0] * variables.count)

    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialEvidence):
            return NotImplemented
        return self.variables == other.variables and self.masks == other.masks

    def __hash__(self) -> int:
        return hash(self.masks)

    def __repr__(self) -> str:
        parts = []
        for var in range(len(self.masks)):
            parts.append("{" + ",".join(str(v) for v in self.values(var)) + "}")
        return f"<PartialEvidence {'x'.join(parts)}>"
