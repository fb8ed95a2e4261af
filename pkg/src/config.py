"""
SpnMap 설정 관리 모듈
"""

from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """애플리케이션 설정"""

    model_config = SettingsConfigDict(
        env_prefix="SPNMAP_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # 프로젝트 경로
    BASE_DIR: Path = Path(__file__).parent.parent

    # 로깅
    log_level: str = Field(default="INFO")
    log_file: Optional[Path] = Field(default=None)

    # 솔버 기본값
    default_budget: Optional[float] = Field(default=None, ge=0)  # 초, None이면 무제한
    stage_interval: int = Field(default=4, ge=1)

    # 지수 시간 오라클 상한
    brute_force_cap: int = Field(default=2 ** 20, ge=1)
    parse_tree_cap: int = Field(default=100_000, ge=1)

    # 벤치마크
    bench_workers: int = Field(default=1, ge=1)
    solvers_file: Path = Field(default=Path(__file__).parent.parent / "config" / "solvers.yaml")
    templates_dir: Path = Field(default=Path(__file__).parent.parent / "templates")

    # 점수 출력 자릿수 (None이면 왕복 가능한 최단 표현)
    score_digits: Optional[int] = Field(default=None, ge=1, le=17)


@lru_cache()
def get_settings() -> Settings:
    """설정 싱글톤 반환"""
    return Settings()


settings = get_settings()
