from pathlib import Path

from pydantic import BaseModel, Field, field_validator, model_validator

from tetrageo.enums import Command, OutputFormat, Projection
from tetrageo.geometry.hypmath import check_alpha
from tetrageo.geometry.unfolding import check_canonical


class RunConfig(BaseModel):
    command: Command
    alpha: float
    p: int | None = None
    q: int | None = None
    lengths: list[float] = Field(default_factory=list)
    output_format: OutputFormat = OutputFormat.TABLE
    output: Path | None = None
    projection: Projection = Projection.POINCARE
    grid: int = Field(default=200, ge=2)
    refine_tol: float = Field(default=1e-9, gt=0)
    threads: int = Field(default=1, ge=1)

    @field_validator("alpha")
    @classmethod
    def alpha_in_range(cls, value: float) -> float:
        return check_alpha(value)

    @field_validator("lengths")
    @classmethod
    def lengths_positive(cls, value: list[float]) -> list[float]:
        if any(not length > 0 for length in value):
            raise ValueError("lengths must be positive")
        return value

    @model_validator(mode="after")
    def check_command(self):
        if self.command == Command.BUILD:
            if self.p is None or self.q is None:
                raise ValueError("build needs both p and q")
            check_canonical(self.p, self.q)
        if self.command in (Command.COUNT, Command.ORACLE) and not self.lengths:
            raise ValueError(f"{self.command.value} needs at least one length")
        return self
