from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Sequence

import numpy as np
from scipy.linalg import LinAlgError

from tetrageo.enums import BoundClass
from tetrageo.exceptions import (
    ClosureFailure,
    ConvergenceFailure,
    SegmentEscapesDevelopment,
    SimplicityFailure,
    StructureViolation,
    TetraGeoError,
)
from tetrageo.geometry.chain import EdgeChain, build_chain, straighten
from tetrageo.geometry.hypmath import (
    HPoint,
    hdist,
    point_segment_distance_raw,
    segments_cross_raw,
    tangent_angle_raw,
    unit_tangent_raw,
)
from tetrageo.geometry.tetrahedron import (
    Edge,
    Surface,
    TetraParams,
    distance_bounds,
    edge_name,
    face_labels,
    face_of_edges,
    make_edge,
    opposite_edge,
)
from tetrageo.geometry.unfolding import (
    Development,
    check_canonical,
    develop,
    midpoint_sequence,
    pair_counts,
)
from tetrageo.logging import get_logger

logger = get_logger(__name__)

ANGLE_TOLERANCE = 1e-9
POSITION_TOLERANCE = 1e-9
UNIQUENESS_TOLERANCE = 1e-9

# Order-3 rotation about the altitude from A4: A1 -> A2 -> A3 -> A1.
ALTITUDE_ROTATION = {0: 1, 1: 2, 2: 0, 3: 3}


@dataclass(frozen=True)
class GeodesicType:
    p: int
    q: int

    def __post_init__(self):
        check_canonical(self.p, self.q)

    @property
    def half(self) -> int:
        """Index of the half-way midpoint crossing."""
        return 2 * (self.p + self.q)

    @property
    def crossing_count(self) -> int:
        return 4 * (self.p + self.q)

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


@dataclass(frozen=True)
class Crossing:
    edge: Edge
    t: float
    angle: float


@dataclass(frozen=True, eq=False)
class GeodesicPath:
    type: GeodesicType
    alpha: float
    crossings: tuple[Crossing, ...]
    faces: tuple[int, ...]
    chords: np.ndarray
    chord_lengths: np.ndarray
    length: float
    catching: tuple[int, int]
    refraction_defect: float
    closure_defect: float

    def edges(self) -> list[Edge]:
        return [crossing.edge for crossing in self.crossings]

    def params(self) -> np.ndarray:
        return np.array([crossing.t for crossing in self.crossings])


@dataclass(frozen=True)
class SegmentBounds:
    b_catch: float
    b_short: float
    b_cross: float
    ln_catch: float
    ln_short: float
    ln_cross: float


@dataclass(frozen=True, eq=False)
class PathDevelopment:
    development: Development
    chords: list[tuple[HPoint, HPoint]]
    start: HPoint
    end: HPoint

    @property
    def chord_length(self) -> float:
        return hdist(self.start, self.end)


# -----------------------------
# Bounds
# -----------------------------


def segment_bounds(params: TetraParams) -> SegmentBounds:
    alpha = params.alpha
    sinh_d = math.sinh(distance_bounds(params).d_trig)
    cube = (math.pi - 3.0 * alpha) ** 3
    base = 2.0 * math.pi**3

    def log_ratio(k2: float) -> float:
        # ln((base - cube(1 - k2)) / (base - cube(1 + k2)))
        return math.log1p(2.0 * cube * k2 / (base - cube * (1.0 + k2)))

    return SegmentBounds(
        b_catch=2.0 * math.atanh(sinh_d * math.tan(alpha)),
        b_short=2.0 * math.atanh(sinh_d * math.tan(alpha / 2.0)),
        b_cross=2.0
        * math.asinh(math.cos(alpha / 2.0) * math.sqrt(2.0 * math.cos(alpha) - 1.0)),
        ln_catch=log_ratio(4.0 * alpha**2 / math.pi**2),
        ln_short=log_ratio(alpha**2 / math.pi**2),
        ln_cross=math.log1p((2.0 * math.pi - 6.0 * alpha) / (math.pi + 3.0 * alpha)),
    )


def length_lower_bound(p: int, q: int, alpha: float) -> float:
    """Logarithmic lower bound for the length of a type (p, q) geodesic."""
    bounds = segment_bounds(TetraParams(alpha))
    return 4.0 * ((p + q - 2) / 3.0) * (bounds.ln_short + bounds.ln_cross) + 2.0 * bounds.ln_catch


def strong_length_lower_bound(p: int, q: int, alpha: float) -> float:
    """Same chain decomposition as `length_lower_bound` with the trigonometric segment bounds."""
    bounds = segment_bounds(TetraParams(alpha))
    return 4.0 * ((p + q - 2) / 3.0) * (bounds.b_short + bounds.b_cross) + 2.0 * bounds.b_catch


# -----------------------------
# Combinatorial helpers
# -----------------------------


def relabel(edge: Edge, t: float, theta: float, perm: Dict[int, int], *, reverse: bool):
    """
    Image of a crossing under a vertex permutation of the tetrahedron.

    `reverse` marks maps that reverse the travel direction (the half-turn
    about the half-way midpoint, read along the path).
    """
    u, v = perm[edge[0]], perm[edge[1]]
    kept = u < v
    new_t = t if kept else 1.0 - t
    new_theta = theta if kept != reverse else math.pi - theta
    return make_edge(u, v), new_t, new_theta


def half_turn(first: Edge, middle: Edge) -> Dict[int, int]:
    """Vertex permutation swapping the endpoints of two opposite edges."""
    return {first[0]: first[1], first[1]: first[0], middle[0]: middle[1], middle[1]: middle[0]}


def _distance_from(vertex: int, edge: Edge, t: float) -> float:
    return t if vertex == edge[0] else 1.0 - t


def catching_candidates(edges: Sequence[Edge], params: Sequence[float]) -> list[int]:
    """
    Indices i whose neighbours i-1, i, i+1 lie on three edges through one
    vertex V, each the crossing nearest to V on its edge.
    """
    n = len(edges)
    by_edge: Dict[Edge, List[int]] = {}
    for index, edge in enumerate(edges):
        by_edge.setdefault(edge, []).append(index)

    found = []
    for i in range(n):
        trio = [edges[(i - 1) % n], edges[i], edges[(i + 1) % n]]
        if len(set(trio)) != 3:
            continue
        common = set(trio[0]) & set(trio[1]) & set(trio[2])
        if len(common) != 1:
            continue
        (vertex,) = common
        nearest = True
        for k in ((i - 1) % n, i, (i + 1) % n):
            mine = _distance_from(vertex, edges[k], params[k])
            if any(
                _distance_from(vertex, edges[other], params[other]) < mine
                for other in by_edge[edges[k]]
                if other != k
            ):
                nearest = False
                break
        if nearest:
            found.append(i)
    return found


def _adjacent_on_edge(edges, params, i: int, j: int) -> bool:
    lo, hi = sorted((params[i], params[j]))
    return not any(
        lo < params[k] < hi for k in range(len(edges)) if edges[k] == edges[i] and k not in (i, j)
    )


def find_catching_points(
    gtype: GeodesicType, edges: Sequence[Edge], params: Sequence[float]
) -> tuple[int, int]:
    n = len(edges)
    half = gtype.half
    candidates = catching_candidates(edges, params)
    if not candidates:
        if gtype.p == 0:
            return 0, half
        raise StructureViolation(f"type {gtype} has no catching point")

    c = candidates[0]
    partner = (c + half) % n
    if partner not in candidates:
        raise StructureViolation(f"catching point {c} of type {gtype} has no antipode")

    faces = [face_of_edges(edges[i], edges[(i + 1) % n]) for i in range(n)]
    for k in range(2, half):
        if faces[(c + k - 1) % n] != faces[(c - k) % n]:
            raise StructureViolation(
                f"strips from catching point {c} of type {gtype} part at k={k}"
            )
    for k in range(2, half - 1):
        ahead, behind = (c + k) % n, (c - k) % n
        if edges[ahead] != edges[behind] or not _adjacent_on_edge(edges, params, ahead, behind):
            raise StructureViolation(
                f"strips from catching point {c} of type {gtype} are not parallel at k={k}"
            )
    return c, partner


def catching_points(path: GeodesicPath) -> tuple[int, int]:
    return find_catching_points(path.type, path.edges(), list(path.params()))


def classify_chords(path: GeodesicPath) -> Dict[BoundClass, List[float]]:
    """Measured path distances grouped by the segment bound that applies to them."""
    edges = path.edges()
    n = len(edges)
    lengths = path.chord_lengths
    classes: Dict[BoundClass, List[float]] = {
        BoundClass.CATCH: [],
        BoundClass.CROSS: [],
        BoundClass.SHORT: [float(value) for value in lengths],
    }
    if path.type.p > 0:
        for c in catching_candidates(edges, list(path.params())):
            classes[BoundClass.CATCH].append(float(lengths[(c - 1) % n] + lengths[c]))
    for i in range(n):
        if edges[(i + 1) % n] == opposite_edge(edges[(i - 1) % n]):
            classes[BoundClass.CROSS].append(float(lengths[(i - 1) % n] + lengths[i]))
    return classes


# -----------------------------
# Path assembly
# -----------------------------


def _crossing_angles(
    surface: Surface, chain: EdgeChain, entry: np.ndarray, exit_: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Incidence angle of the outgoing chord at each crossing, and the refraction defect."""
    n = len(chain.faces)
    outgoing = np.zeros(n)
    defect = np.zeros(n)
    for k in range(n):
        edge = chain.edges[k]
        before = chain.faces[(k - 1) % n]
        after = chain.faces[k]
        higher_before = surface.chart(before).vertex(edge[1]).coords
        higher_after = surface.chart(after).vertex(edge[1]).coords

        arrival = exit_[(k - 1) % n]
        travel_in = -unit_tangent_raw(arrival, entry[(k - 1) % n])
        angle_in = tangent_angle_raw(travel_in, unit_tangent_raw(arrival, higher_before))

        departure = entry[k]
        travel_out = unit_tangent_raw(departure, exit_[k])
        angle_out = tangent_angle_raw(travel_out, unit_tangent_raw(departure, higher_after))

        outgoing[k] = angle_out
        defect[k] = abs(angle_in - angle_out)
    return outgoing, defect


def _check_simple(gtype: GeodesicType, faces: Sequence[int], chords: np.ndarray) -> None:
    by_face: Dict[int, List[int]] = {}
    for index, face in enumerate(faces):
        by_face.setdefault(face, []).append(index)
    for face, members in by_face.items():
        for i, j in combinations(members, 2):
            if segments_cross_raw(chords[i, 0], chords[i, 1], chords[j, 0], chords[j, 1]):
                raise SimplicityFailure(
                    f"type {gtype}: chords {i} and {j} meet in face {face}"
                )


def assemble_path(
    surface: Surface,
    gtype: GeodesicType,
    edges: Sequence[Edge],
    params: Sequence[float],
    *,
    catching: tuple[int, int] | None = None,
) -> GeodesicPath:
    """Chords, angles and defects of the closed path through `edges` at `params`."""
    chain = build_chain(surface, edges, cyclic=True)
    t = np.asarray(params, dtype=float)
    entry, exit_ = chain.points(t)
    lengths = chain.chord_lengths(t)
    angles, defect = _crossing_angles(surface, chain, entry, exit_)
    half = gtype.half
    if catching is None:
        catching = find_catching_points(gtype, list(edges), list(t))
    return GeodesicPath(
        type=gtype,
        alpha=surface.alpha,
        crossings=tuple(
            Crossing(edge=edge, t=float(value), angle=float(theta))
            for edge, value, theta in zip(edges, t, angles)
        ),
        faces=chain.faces,
        chords=np.stack([entry, exit_], axis=1),
        chord_lengths=lengths,
        length=float(np.sum(lengths)),
        catching=catching,
        refraction_defect=float(np.max(defect)),
        closure_defect=float(max(defect[0], defect[half % len(edges)])),
    )


# -----------------------------
# Service
# -----------------------------


class GeodesicService:
    """
    Builds and validates the simple closed geodesic of each type on one surface.

    Construction:
    - trace the Euclidean representative through edge midpoints
    - straighten the first half between the two midpoints
    - complete the second half by the half-turn about the half-way midpoint
    - validate closure, crossing counts, midpoints, simplicity and catching structure
    """

    def __init__(self, surface: Surface, *, max_iter: int = 100):
        self._surface = surface
        self._max_iter = max_iter

    @property
    def surface(self) -> Surface:
        return self._surface

    def _straighten(
        self, gtype: GeodesicType, chain: EdgeChain, initial: Sequence[float]
    ) -> np.ndarray:
        """Straighten `chain`, reporting numerical breakdowns as ConvergenceFailure."""
        try:
            return straighten(chain, initial, max_iter=self._max_iter)
        except TetraGeoError:
            raise
        except (ValueError, LinAlgError, FloatingPointError) as exc:
            raise ConvergenceFailure(f"type {gtype}: {exc}") from exc

    def _solve_half(self, gtype: GeodesicType):
        seq, half = midpoint_sequence(gtype.p, gtype.q)
        edges = seq.edges()
        initial = [float(value) for value in seq.params()]
        chain = build_chain(self._surface, edges[: half + 1], cyclic=False)
        t = self._straighten(gtype, chain, initial[: half + 1])
        inner = t[1:half]
        if inner.size and not (np.all(inner > 0.0) and np.all(inner < 1.0)):
            worst = int(np.argmax(np.abs(inner - 0.5))) + 1
            raise SegmentEscapesDevelopment(
                f"type {gtype}: the first half leaves the development at crossing {worst} "
                f"({edge_name(edges[worst])}, t={t[worst]:.6g})"
            )
        return seq, half, edges, chain, t

    def geodesic_length(self, gtype: GeodesicType) -> float:
        """Length from the first half only."""
        _, _, _, chain, t = self._solve_half(gtype)
        return 2.0 * chain.length(t)

    def build_geodesic(self, gtype: GeodesicType) -> GeodesicPath:
        seq, half, edges, chain, t_half = self._solve_half(gtype)
        n = len(edges)

        sigma = half_turn(edges[0], edges[half])
        params = np.zeros(n)
        params[: half + 1] = t_half
        for j in range(1, half):
            image, value, _ = relabel(edges[half - j], t_half[half - j], 0.0, sigma, reverse=True)
            if image != edges[half + j]:
                raise StructureViolation(
                    f"type {gtype}: crossing {half + j} is not the half-turn image of {half - j}"
                )
            params[half + j] = value

        path = assemble_path(self._surface, gtype, edges, params)
        self._validate(path)
        logger.info(
            f"Built type {gtype} [crossings={n} | length={path.length:.12g} | "
            f"closure={path.closure_defect:.2e}]"
        )
        return path

    def _validate(self, path: GeodesicPath) -> None:
        gtype = path.type
        edges = path.edges()
        params = path.params()
        if len(edges) != gtype.crossing_count:
            raise StructureViolation(f"type {gtype}: {len(edges)} crossings")
        if path.refraction_defect > ANGLE_TOLERANCE:
            raise ClosureFailure(
                f"type {gtype}: angle mismatch {path.refraction_defect:.3e} at a crossing"
            )
        counts = pair_counts(edges)
        if sorted(counts) != sorted((gtype.p, gtype.q, gtype.p + gtype.q)):
            raise StructureViolation(f"type {gtype}: pair counts {counts}")

        quarter = gtype.p + gtype.q
        midpoints = set(np.flatnonzero(np.abs(params - 0.5) < POSITION_TOLERANCE).tolist())
        expected = {0, quarter, 2 * quarter, 3 * quarter}
        if midpoints != expected:
            raise StructureViolation(f"type {gtype}: midpoint crossings at {sorted(midpoints)}")
        if edges[3 * quarter] != opposite_edge(edges[quarter]):
            raise StructureViolation(f"type {gtype}: quarter midpoints are not on opposite edges")

        _check_simple(gtype, path.faces, path.chords)

    def length(self, path: GeodesicPath) -> float:
        return float(np.sum(path.chord_lengths))

    def vertex_clearance(self, path: GeodesicPath) -> float:
        best = math.inf
        for k, face in enumerate(path.faces):
            chart = self._surface.chart(face)
            start, end = path.chords[k]
            for label in face_labels(face):
                best = min(
                    best, point_segment_distance_raw(chart.vertex(label).coords, start, end)
                )
        return best

    def catching_points(self, path: GeodesicPath) -> tuple[int, int]:
        return catching_points(path)

    def symmetric_copies(self, path: GeodesicPath) -> list[GeodesicPath]:
        copies = [path]
        current = path
        for _ in range(2):
            images = [
                relabel(c.edge, c.t, c.angle, ALTITUDE_ROTATION, reverse=False)
                for c in current.crossings
            ]
            current = assemble_path(
                self._surface,
                path.type,
                [image[0] for image in images],
                [image[1] for image in images],
                catching=current.catching,
            )
            copies.append(current)
        return copies

    def verify_uniqueness(self, path: GeodesicPath) -> float:
        """
        Re-solve the whole closed chain from the half-way midpoint with every crossing free.

        Returns the largest parameter deviation from `path`.
        """
        seq, half = midpoint_sequence(path.type.p, path.type.q)
        n = len(seq)
        order = [(half + k) % n for k in range(n)]
        edges = [seq.edges()[i] for i in order]
        initial = [float(seq.params()[i]) for i in order]
        chain = build_chain(self._surface, edges, cyclic=True)
        t = self._straighten(path.type, chain, initial)
        reference = path.params()[order]
        deviation = float(np.max(np.abs(t - reference)))
        logger.debug(f"Type {path.type} rebuilt from the half-way midpoint [deviation={deviation:.2e}]")
        return deviation

    def development_for(self, path: GeodesicPath) -> PathDevelopment:
        """The first-half development with the path chords placed in it."""
        half = path.type.half
        development = develop(self._surface, path.faces[:half])
        chords = [
            (
                development.place(k, HPoint(path.chords[k, 0])),
                development.place(k, HPoint(path.chords[k, 1])),
            )
            for k in range(half)
        ]
        return PathDevelopment(
            development=development,
            chords=chords,
            start=chords[0][0],
            end=chords[-1][1],
        )
