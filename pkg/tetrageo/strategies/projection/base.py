from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path
from typing import List

import numpy as np
from jinja2 import Environment, FileSystemLoader, select_autoescape
from pydantic import BaseModel

from tetrageo.geometry.hypmath import HIsometry, HPoint, boost_to, hdist_raw, minkowski_dot
from tetrageo.geometry.tetrahedron import edge_name, face_labels, vertex_name
from tetrageo.services.geodesic_service import PathDevelopment

TEMPLATE_DIR = Path(__file__).resolve().parents[2] / "templates"
CANVAS_RADIUS = 480.0

_environment = Environment(
    loader=FileSystemLoader(TEMPLATE_DIR),
    autoescape=select_autoescape(["svg", "j2"]),
    trim_blocks=True,
    lstrip_blocks=True,
)


class Polyline(BaseModel):
    points: list[tuple[float, float]]
    kind: str
    label: str | None = None


class VertexMark(BaseModel):
    x: float
    y: float
    label: str


class ProjectionRenderer(ABC):
    """
    Base interface for disk-model renderers of a development.

    Implementations should:
    - map hyperboloid points into the unit disk
    - say how densely a geodesic segment must be sampled to look right
    """

    projection_name: str
    samples_per_segment: int

    @abstractmethod
    def project(self, coords: np.ndarray) -> tuple[float, float]:
        raise NotImplementedError

    def segment(self, start: np.ndarray, end: np.ndarray) -> list[tuple[float, float]]:
        length = hdist_raw(start, end)
        if length == 0.0:
            return [self.project(start)]
        steps = np.linspace(0.0, 1.0, self.samples_per_segment)
        # point at fraction u of pq: (sinh((1-u)d) p + sinh(ud) q) / sinh d
        points = (
            np.sinh((1.0 - steps)[:, None] * length) * start
            + np.sinh(steps[:, None] * length) * end
        ) / np.sinh(length)
        return [self.project(point) for point in points]

    def _to_canvas(self, xy: tuple[float, float]) -> tuple[float, float]:
        return round(CANVAS_RADIUS * xy[0], 3), round(-CANVAS_RADIUS * xy[1], 3)

    def render(self, picture: PathDevelopment, *, title: str) -> str:
        development = picture.development
        vertices = np.array(
            [
                development.vertex(copy, label).coords
                for copy, face in enumerate(development.faces)
                for label in face_labels(face)
            ]
        )
        centre = vertices.mean(axis=0)
        centre = centre / np.sqrt(-minkowski_dot(centre, centre))
        recentre: HIsometry = boost_to(HPoint(centre)).inverse()

        polylines: List[Polyline] = []
        marks: List[VertexMark] = []
        for copy, face in enumerate(development.faces):
            labels = face_labels(face)
            corners = {
                label: recentre.apply_raw(development.vertex(copy, label).coords)
                for label in labels
            }
            for i, j in ((0, 1), (1, 2), (0, 2)):
                u, v = labels[i], labels[j]
                polylines.append(
                    Polyline(
                        points=[self._to_canvas(xy) for xy in self.segment(corners[u], corners[v])],
                        kind="edge",
                        label=edge_name((u, v)),
                    )
                )
            for label, coords in corners.items():
                x, y = self._to_canvas(self.project(coords))
                marks.append(VertexMark(x=x, y=y, label=vertex_name(label)))

        for start, end in picture.chords:
            polylines.append(
                Polyline(
                    points=[
                        self._to_canvas(xy)
                        for xy in self.segment(
                            recentre.apply_raw(start.coords), recentre.apply_raw(end.coords)
                        )
                    ],
                    kind="geodesic",
                )
            )

        template = _environment.get_template("development.svg.j2")
        return template.render(
            title=title,
            radius=CANVAS_RADIUS,
            projection=self.projection_name,
            polylines=polylines,
            marks=marks,
        )
