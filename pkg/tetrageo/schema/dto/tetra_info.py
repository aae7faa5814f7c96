from pydantic import BaseModel, Field


class TetraInfo(BaseModel):
    alpha: float
    a: float
    h: float
    d_trig: float
    d_log: float
    circumradius: float


class KleinTetrahedronExport(BaseModel):
    alpha: float
    edge_length: float
    circumradius: float
    vertices: list[list[float]] = Field(min_length=4, max_length=4)
    labels: list[str] = Field(default_factory=lambda: ["A1", "A2", "A3", "A4"])
