from functools import lru_cache

from tetrageo.config import Settings, get_settings
from tetrageo.enums import Projection
from tetrageo.geometry.tetrahedron import Surface, TetraParams, build_surface
from tetrageo.services.counting_service import CountingService
from tetrageo.services.geodesic_service import GeodesicService
from tetrageo.services.shooting_oracle import ShootingOracle
from tetrageo.strategies.projection.base import ProjectionRenderer
from tetrageo.strategies.projection.factory import build_renderer

DEFAULT_PROJECTION = Projection.POINCARE


@lru_cache(maxsize=8)
def get_surface(alpha: float) -> Surface:
    return build_surface(TetraParams(alpha))


def get_geodesic_service(alpha: float, settings: Settings | None = None) -> GeodesicService:
    settings = settings or get_settings()
    return GeodesicService(get_surface(alpha), max_iter=settings.newton_max_iter)


def get_counting_service(
    alpha: float, *, threads: int | None = None, settings: Settings | None = None
) -> CountingService:
    settings = settings or get_settings()
    return CountingService(
        get_surface(alpha),
        threads=threads or settings.threads,
        max_iter=settings.newton_max_iter,
    )


def get_oracle(
    alpha: float,
    *,
    grid: int | None = None,
    threads: int | None = None,
    settings: Settings | None = None,
) -> ShootingOracle:
    settings = settings or get_settings()
    return ShootingOracle(
        get_surface(alpha),
        grid=grid or settings.oracle_grid,
        refine_tol=settings.oracle_refine_tol,
        seeds_per_word=settings.oracle_seeds_per_word,
        threads=threads or settings.threads,
    )


def get_renderer(projection: str | Projection = DEFAULT_PROJECTION) -> ProjectionRenderer:
    return build_renderer(projection)
