import numpy as np

from tetrageo.strategies.projection.base import ProjectionRenderer


class KleinRenderer(ProjectionRenderer):
    projection_name = "klein"
    # geodesics are straight chords
    samples_per_segment = 2

    def project(self, coords: np.ndarray) -> tuple[float, float]:
        x0, x1, x2 = coords
        return float(x1 / x0), float(x2 / x0)
