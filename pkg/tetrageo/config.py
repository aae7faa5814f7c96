from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Parallelism
    threads: int = Field(default=1, ge=1)

    # Shooting oracle
    oracle_grid: int = Field(default=200, ge=2)
    oracle_refine_tol: float = Field(default=1e-9, gt=0)
    oracle_seeds_per_word: int = Field(default=2, ge=1)

    # Builder
    newton_max_iter: int = Field(default=100, ge=1)

    # Output
    log_level: str = "WARNING"
    log_file: Path | None = None
    output_dir: Path = Path("out")

    model_config = SettingsConfigDict(
        env_prefix="TETRAGEO_", env_file=".env", extra="ignore"
    )


@lru_cache
def get_settings() -> Settings:
    return Settings()
