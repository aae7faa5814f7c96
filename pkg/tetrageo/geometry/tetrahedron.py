"""
The regular hyperbolic tetrahedron with face angle alpha.

Intrinsically it is four copies of one canonical regular triangle glued
along their edges. Vertex labels are 0..3 (printed A1..A4); a face is
identified by the label it omits and keeps its three labels in ascending
order on chart slots 0, 1, 2. Every face uses the same canonical chart:
centroid at the hyperboloid origin, slot 0 on the +x1 axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.optimize import bisect

from tetrageo.exceptions import NonAdjacentFaces, OutsideChart
from tetrageo.geometry.hypmath import (
    HIsometry,
    HPoint,
    check_alpha,
    edge_length,
    face_altitude,
    isometry_from_points,
    line_normal_raw,
    minkowski_dot,
    reflect_across,
    unit_tangent_raw,
)

Edge = tuple[int, int]

LABELS = (0, 1, 2, 3)
EDGES: tuple[Edge, ...] = tuple(combinations(LABELS, 2))
FACES = LABELS
CIRCUMRADIUS_XTOL = 1e-14
BARYCENTRIC_SLACK = 1e-12


def vertex_name(label: int) -> str:
    return f"A{label + 1}"


def edge_name(edge: Edge) -> str:
    return f"{vertex_name(edge[0])}{vertex_name(edge[1])}"


def parse_edge_name(name: str) -> Edge:
    cleaned = name.strip().upper().replace("A", " ").split()
    if len(cleaned) != 2:
        raise ValueError(f"Unsupported edge name: {name}")
    i, j = sorted(int(part) - 1 for part in cleaned)
    edge = (i, j)
    if edge not in EDGES:
        raise ValueError(f"Unsupported edge name: {name}")
    return edge


def make_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def opposite_edge(edge: Edge) -> Edge:
    rest = [label for label in LABELS if label not in edge]
    return (rest[0], rest[1])


def edge_pair_index(edge: Edge) -> int:
    """0 for {A1A2, A3A4}, 1 for {A1A3, A2A4}, 2 for {A1A4, A2A3}."""
    return {1: 0, 2: 1, 3: 2}[edge[1] if edge[0] == 0 else opposite_edge(edge)[1]]


def face_labels(face: int) -> tuple[int, int, int]:
    return tuple(label for label in LABELS if label != face)


def face_of_edges(first: Edge, second: Edge) -> int:
    """The face containing two distinct edges that share a vertex."""
    labels = set(first) | set(second)
    if len(labels) != 3:
        raise NonAdjacentFaces(
            f"{edge_name(first)} and {edge_name(second)} do not bound a common face"
        )
    (omitted,) = set(LABELS) - labels
    return omitted


@dataclass(frozen=True)
class TetraParams:
    alpha: float

    def __post_init__(self):
        check_alpha(self.alpha)


@dataclass(frozen=True)
class DistanceBounds:
    d_trig: float
    d_log: float
    h: float
    a: float
    a4h1: float


@dataclass(frozen=True, eq=False)
class FaceChart:
    face: int
    labels: tuple[int, int, int]
    vertices: tuple[HPoint, HPoint, HPoint]

    def slot(self, label: int) -> int:
        return self.labels.index(label)

    def vertex(self, label: int) -> HPoint:
        return self.vertices[self.slot(label)]

    def local_edges(self) -> tuple[Edge, Edge, Edge]:
        l0, l1, l2 = self.labels
        return (make_edge(l0, l1), make_edge(l1, l2), make_edge(l0, l2))


def canonical_chart_vertices(alpha: float) -> tuple[HPoint, HPoint, HPoint]:
    cosh_r = 1.0 / (math.tan(alpha / 2.0) * math.sqrt(3.0))
    sinh_r = math.sqrt(cosh_r * cosh_r - 1.0)
    return tuple(
        HPoint(
            np.array(
                [
                    cosh_r,
                    sinh_r * math.cos(2.0 * math.pi * k / 3.0),
                    sinh_r * math.sin(2.0 * math.pi * k / 3.0),
                ]
            )
        )
        for k in range(3)
    )


@dataclass(frozen=True, eq=False)
class Surface:
    params: TetraParams
    a: float
    charts: tuple[FaceChart, ...]
    gluings: dict[Edge, tuple[tuple[int, int], tuple[int, int]]]
    _frames: dict[tuple[int, Edge], tuple[np.ndarray, np.ndarray]] = field(repr=False)
    _normals: dict[tuple[int, Edge], np.ndarray] = field(repr=False)
    _transitions: dict[tuple[int, int], HIsometry] = field(repr=False)

    @property
    def alpha(self) -> float:
        return self.params.alpha

    def chart(self, face: int) -> FaceChart:
        if face not in FACES:
            raise NonAdjacentFaces(f"unknown face {face}")
        return self.charts[face]

    def faces_of_edge(self, edge: Edge) -> tuple[int, int]:
        (f, _), (g, _) = self.gluings[edge]
        return f, g

    def other_face(self, edge: Edge, face: int) -> int:
        f, g = self.faces_of_edge(edge)
        if face == f:
            return g
        if face == g:
            return f
        raise NonAdjacentFaces(f"face {face} does not contain {edge_name(edge)}")

    def shared_edge(self, face: int, other: int) -> Edge:
        if face == other or face not in FACES or other not in FACES:
            raise NonAdjacentFaces(f"faces {face} and {other} are not adjacent")
        common = sorted(set(face_labels(face)) & set(face_labels(other)))
        return (common[0], common[1])

    def edge_frame(self, face: int, edge: Edge) -> tuple[np.ndarray, np.ndarray]:
        """Chart position of the lower-label endpoint and the unit tangent toward the other."""
        try:
            return self._frames[(face, edge)]
        except KeyError:
            raise NonAdjacentFaces(f"face {face} does not contain {edge_name(edge)}")

    def inward_normal(self, face: int, edge: Edge) -> np.ndarray:
        return self._normals[(face, edge)]

    def point_on_edge(self, face: int, edge: Edge, t: float | np.ndarray) -> np.ndarray:
        start, tangent = self.edge_frame(face, edge)
        s = np.asarray(t, dtype=float)[..., None] * self.a
        return start * np.cosh(s) + tangent * np.sinh(s)

    def edge_param(self, face: int, edge: Edge, point: np.ndarray) -> float:
        _, tangent = self.edge_frame(face, edge)
        return math.asinh(float(minkowski_dot(point, tangent))) / self.a

    def transition(self, face: int, other: int) -> HIsometry:
        """Maps chart(other) into the plane of chart(face), glued along their shared edge."""
        try:
            return self._transitions[(face, other)]
        except KeyError:
            raise NonAdjacentFaces(f"faces {face} and {other} are not adjacent")


def build_surface(params: TetraParams) -> Surface:
    alpha = params.alpha
    a = edge_length(alpha)
    chart_vertices = canonical_chart_vertices(alpha)
    charts = tuple(
        FaceChart(face=face, labels=face_labels(face), vertices=chart_vertices)
        for face in FACES
    )

    gluings: dict[Edge, tuple[tuple[int, int], tuple[int, int]]] = {}
    for edge in EDGES:
        sides = tuple(
            (chart.face, chart.local_edges().index(edge))
            for chart in charts
            if edge in chart.local_edges()
        )
        gluings[edge] = sides

    frames: dict[tuple[int, Edge], tuple[np.ndarray, np.ndarray]] = {}
    normals: dict[tuple[int, Edge], np.ndarray] = {}
    for chart in charts:
        for edge in chart.local_edges():
            start = chart.vertex(edge[0]).coords
            end = chart.vertex(edge[1]).coords
            frames[(chart.face, edge)] = (start, unit_tangent_raw(start, end))
            (third,) = set(chart.labels) - set(edge)
            normal = line_normal_raw(start, end)
            if minkowski_dot(normal, chart.vertex(third).coords) < 0:
                normal = -normal
            normals[(chart.face, edge)] = normal

    transitions: dict[tuple[int, int], HIsometry] = {}
    for face, other in ((f, g) for f in FACES for g in FACES if f != g):
        here, there = charts[face], charts[other]
        common = sorted(set(here.labels) & set(there.labels))
        (third_here,) = set(here.labels) - set(common)
        (third_there,) = set(there.labels) - set(common)
        mirror = reflect_across(here.vertex(common[0]), here.vertex(common[1]))
        transitions[(face, other)] = isometry_from_points(
            [there.vertex(common[0]), there.vertex(common[1]), there.vertex(third_there)],
            [
                here.vertex(common[0]),
                here.vertex(common[1]),
                mirror.apply(here.vertex(third_here)),
            ],
        )

    return Surface(
        params=params,
        a=a,
        charts=charts,
        gluings=gluings,
        _frames=frames,
        _normals=normals,
        _transitions=transitions,
    )


def distance_bounds(params: TetraParams) -> DistanceBounds:
    alpha = params.alpha
    cos_alpha = math.cos(alpha)
    trig = math.sqrt(math.cos(1.5 * alpha) ** 3 * math.cos(alpha / 2.0)) / cos_alpha
    log_ratio = ((math.pi - 3.0 * alpha) / math.pi) ** 1.5 / math.sqrt(2.0)
    return DistanceBounds(
        d_trig=math.atanh(trig),
        d_log=math.atanh(log_ratio),
        h=face_altitude(alpha),
        a=edge_length(alpha),
        a4h1=math.atanh(cos_alpha * math.sqrt(2.0 * cos_alpha - 1.0)),
    )


# -----------------------------
# Klein ball embedding
# -----------------------------

_UNIT_TETRAHEDRON = np.array(
    [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
) / math.sqrt(3.0)


@dataclass(frozen=True, eq=False)
class KleinTetrahedron:
    alpha: float
    edge_length: float
    circumradius: float
    vertices: np.ndarray


def klein_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Hyperbolic distance between two points of the Klein ball."""
    num = 1.0 - float(np.dot(u, v))
    den = math.sqrt((1.0 - float(np.dot(u, u))) * (1.0 - float(np.dot(v, v))))
    return math.acosh(max(num / den, 1.0))


def circumradius(alpha: float) -> float:
    """Euclidean radius in the Klein ball whose inscribed regular tetrahedron has edge a."""
    a = edge_length(alpha)

    def excess(r: float) -> float:
        return klein_distance(r * _UNIT_TETRAHEDRON[0], r * _UNIT_TETRAHEDRON[1]) - a

    return bisect(excess, 0.0, 1.0 - 1e-12, xtol=CIRCUMRADIUS_XTOL)


def klein_embedding(params: TetraParams) -> KleinTetrahedron:
    r = circumradius(params.alpha)
    return KleinTetrahedron(
        alpha=params.alpha,
        edge_length=edge_length(params.alpha),
        circumradius=r,
        vertices=r * _UNIT_TETRAHEDRON,
    )


def chart_to_klein(
    surface: Surface, face: int, point: HPoint, *, embedding: KleinTetrahedron | None = None
) -> np.ndarray:
    """
    Map a chart point of `face` onto the embedded face of the Klein ball.

    The chart triangle and the embedded face have equal Gram matrices, so
    the linear map sending chart vertices to the lifted ambient vertices
    is an isometry between their planes.
    """
    chart = surface.chart(face)
    embedding = embedding or klein_embedding(surface.params)
    basis = np.column_stack([vertex.coords for vertex in chart.vertices])
    weights = np.linalg.solve(basis, point.coords)
    if np.min(weights) < -BARYCENTRIC_SLACK * max(1.0, float(np.max(np.abs(weights)))):
        raise OutsideChart(f"point {point!r} lies outside face {face}")

    scale = 1.0 / math.sqrt(1.0 - embedding.circumradius**2)
    lifted = np.array(
        [
            np.concatenate(([scale], scale * embedding.vertices[label]))
            for label in chart.labels
        ]
    )
    ambient = weights @ lifted
    return ambient[1:] / ambient[0]
