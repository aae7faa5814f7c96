from pydantic import BaseModel, Field


class FoundGeodesicExport(BaseModel):
    type: str  # "(p,q)" or "unidentified"
    length: float
    closure_defect: float
    crossing_count: int
    start_edge: str
    t0: float
    theta: float
    built_length: float | None = None


class OracleReport(BaseModel):
    alpha: float
    L_max: float
    grid: int
    found: int
    identified: int
    expected: int
    complete: bool
    geodesics: list[FoundGeodesicExport] = Field(default_factory=list)

    def summary(self) -> str:
        text = f"{self.found} found / {self.identified} identified"
        if not self.complete:
            text += " (search incomplete)"
        return text
