import math

import pytest

from tetrageo.geometry.tetrahedron import Surface, TetraParams, build_surface
from tetrageo.services.geodesic_service import GeodesicService, GeodesicType

# Face angles used across the suite
ALPHA_GRID = (math.pi / 12, math.pi / 6, math.pi / 4, 0.99 * math.pi / 3)


@pytest.fixture(scope="session")
def surface() -> Surface:
    return build_surface(TetraParams(math.pi / 6))


@pytest.fixture(scope="session")
def service(surface) -> GeodesicService:
    return GeodesicService(surface)


@pytest.fixture(scope="session")
def surfaces() -> dict[float, Surface]:
    return {alpha: build_surface(TetraParams(alpha)) for alpha in ALPHA_GRID}


@pytest.fixture(scope="session")
def base_path(service):
    """The (0,1) geodesic at alpha = pi/6."""
    return service.build_geodesic(GeodesicType(0, 1))


@pytest.fixture(scope="session")
def path_12(service):
    return service.build_geodesic(GeodesicType(1, 2))


def base_chord(alpha: float) -> float:
    """Segment joining the midpoints of two sides of the face."""
    a = math.acosh(math.cos(alpha) / (1.0 - math.cos(alpha)))
    return math.acosh(math.cosh(a / 2) ** 2 - math.sinh(a / 2) ** 2 * math.cos(alpha))
