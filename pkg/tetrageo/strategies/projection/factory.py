from tetrageo.enums import Projection
from tetrageo.strategies.projection.base import ProjectionRenderer
from tetrageo.strategies.projection.klein import KleinRenderer
from tetrageo.strategies.projection.poincare import PoincareRenderer


def build_renderer(projection: str | Projection) -> ProjectionRenderer:
    value = projection.value if isinstance(projection, Projection) else projection
    normalized = value.strip().lower()

    if normalized in {"poincare", "poincaré", "conformal"}:
        return PoincareRenderer()

    if normalized in {"klein", "beltrami-klein", "projective"}:
        return KleinRenderer()

    raise ValueError(f"Unsupported projection: {projection}")
