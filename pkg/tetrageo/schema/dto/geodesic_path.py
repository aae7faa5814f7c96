from pydantic import BaseModel


class CrossingExport(BaseModel):
    index: int
    edge: str
    t: float
    angle: float
    face: str


class CrossingSeqExport(BaseModel):
    """The exact Euclidean crossing sequence; rationals as "num/den"."""

    p: int
    q: int
    mu: str
    family: str
    edges: list[str]
    t: list[str]


class GeodesicPathExport(BaseModel):
    alpha: float
    p: int
    q: int
    length: float
    crossing_count: int
    pair_counts: list[int]
    catching: list[int]
    vertex_clearance: float
    refraction_defect: float
    closure_defect: float
    crossings: list[CrossingExport]
    tiling: CrossingSeqExport | None = None
