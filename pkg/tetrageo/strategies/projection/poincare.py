import numpy as np

from tetrageo.strategies.projection.base import ProjectionRenderer


class PoincareRenderer(ProjectionRenderer):
    """Conformal picture: crossing angles are drawn true."""

    projection_name = "poincare"
    samples_per_segment = 24

    def project(self, coords: np.ndarray) -> tuple[float, float]:
        x0, x1, x2 = coords
        return float(x1 / (1.0 + x0)), float(x2 / (1.0 + x0))
