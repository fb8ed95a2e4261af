"""
솔버 이름 → 실행 구성

이름 문법:
    bt, ng, amap
    bs<K>, kbt<K>          (K 생략 시 호출자가 준 k)
    mc, fc, fc+o, fc+o+s   (정확한 솔버, 'exact'는 fc+o+s)
"""

import logging
import re
from pathlib import Path
from typing import Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field

from ..config import settings
from ..spn.models import Spn
from ..spn.result import SolveResult
from .amap import argmax_product
from .beam import beam_search
from .best_tree import best_tree, normalized_greedy
from .budget import Deadline
from .exact import SearchConfig, max_exact
from .kbt import k_best_trees

logger = logging.getLogger(__name__)

SolverKind = Literal["bt", "ng", "amap", "bs", "kbt", "exact"]

_SIZED = re.compile(r"^(bs|kbt)(\d*)$")
_EXACT = re.compile(r"^(mc|fc)((?:\+[os])*)$")


class SolverSpec(BaseModel):
    """솔버 하나의 실행 구성"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: SolverKind
    k: int = Field(default=1, ge=1)
    seed: Optional[int] = None
    beam_init: Literal["random", "ng"] = "random"
    search: SearchConfig = Field(default_factory=SearchConfig)

    @property
    def label(self) -> str:
        if self.kind in ("bs", "kbt"):
            return f"{self.kind}{self.k}"
        if self.kind == "exact":
            return self.search.label
        return self.kind

    @property
    def anytime(self) -> bool:
        """예산 소진 시 지금까지의 결과를 돌려주는 솔버"""
        return self.kind in ("bs", "exact")

    def run(self, spn: Spn, budget: Optional[float] = None) -> SolveResult:
        """
        SPN에 솔버 실행

        Args:
            spn: MAX 문제 SPN
            budget: 초 단위 예산 (None이면 settings.default_budget)

        Returns:
            SolveResult (예산 소진은 상태로 보고)
        """
        budget = settings.default_budget if budget is None else budget

        if self.kind == "exact":
            config = self.search.model_copy(update={"budget": budget})
            return max_exact(spn, config)

        deadline = Deadline(budget)
        if self.kind == "bt":
            result = best_tree(spn)
        elif self.kind == "ng":
            result = normalized_greedy(spn)
        elif self.kind == "amap":
            result = argmax_product(spn, deadline)
        elif self.kind == "kbt":
            result = k_best_trees(spn, self.k, deadline)
        else:
            return beam_search(spn, self.k, seed=self.seed, init=self.beam_init, deadline=deadline)

        if result.has_result and deadline.expired:
            logger.info(f"{self.label}: 예산 초과로 결과 폐기")
            return SolveResult.no_result(deadline.elapsed, solver=self.label, stats=result.stats)
        result.elapsed = deadline.elapsed
        result.solver = self.label
        return result


def parse_solver(
    name: str,
    k: Optional[int] = None,
    seed: Optional[int] = None,
    search: Optional[SearchConfig] = None,
    beam_init: Literal["random", "ng"] = "random",
) -> SolverSpec:
    """
    솔버 이름 파싱

    Args:
        name: 솔버 이름 (대소문자 무시)
        k: 이름에 K가 없을 때의 빔 크기/K
        seed: 빔 탐색과 정확한 솔버 무작위 초기화 시드
        search: 정확한 솔버의 기본 구성 (이름의 가지치기/순서/축소가 덮어쓴다)

    Raises:
        ValueError: 알 수 없는 이름
    """
    token = name.strip().lower()
    if token in ("bt", "ng", "amap"):
        return SolverSpec(kind=token)

    sized = _SIZED.match(token)
    if sized:
        size = int(sized.group(2)) if sized.group(2) else (k if k is not None else 1)
        return SolverSpec(kind=sized.group(1), k=size, seed=seed, beam_init=beam_init)

    base = search or SearchConfig()
    if token == "exact":
        token = "fc+o+s"
    exact = _EXACT.match(token)
    if exact:
        flags = exact.group(2)
        config = base.model_copy(update={
            "pruning": exact.group(1),
            "ordering": "+o" in flags,
            "staging": "+s" in flags,
            "seed": seed if seed is not None else base.seed,
        })
        return SolverSpec(kind="exact", search=config)

    raise ValueError(f"알 수 없는 솔버: '{name}'")


def parse_solver_list(text: str, **kwargs) -> list[SolverSpec]:
    """쉼표로 구분한 솔버 목록"""
    specs = [parse_solver(part, **kwargs) for part in text.split(",") if part.strip()]
    if not specs:
        raise ValueError("솔버 목록이 비어 있습니다")
    return specs


def load_lineups(path: Optional[Union[str, Path]] = None) -> dict[str, list[str]]:
    """config/solvers.yaml의 이름 붙은 솔버 목록"""
    path = Path(path) if path is not None else settings.solvers_file
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    lineups = data.get("lineups", {})
    return {name: [str(item) for item in items] for name, items in lineups.items()}


def resolve_solvers(text: str, path: Optional[Union[str, Path]] = None, **kwargs) -> list[SolverSpec]:
    """
    솔버 목록 또는 라인업 이름을 SolverSpec 목록으로 변환

    text가 라인업 이름(예: 'compare', 'full')이면 solvers.yaml에서 찾는다.
    """
    token = text.strip()
    if "," not in token:
        try:
            lineups = load_lineups(path)
        except FileNotFoundError:
            lineups = {}
        if token in lineups:
            return [parse_solver(name, **kwargs) for name in lineups[token]]
    return parse_solver_list(token, **kwargs)
