"""
Brute-force search for simple closed geodesics by shooting.

Only the surface (charts, edge frames and gluing) is used here: a ray is
extended chord by chord and carried across each edge with its incidence
angle, and closures are detected as returns to the start edge. Nothing
in this module consults the tiling or the builder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from multiprocessing import Pool
from typing import Sequence

import numpy as np
from scipy.optimize import root

from tetrageo.exceptions import SegmentEscapesDevelopment, VertexHit
from tetrageo.geometry.hypmath import (
    hdist_raw,
    minkowski_dot,
    segments_cross_raw,
    tangent_angle_raw,
)
from tetrageo.geometry.tetrahedron import (
    EDGES,
    Edge,
    Surface,
    TetraParams,
    build_surface,
    edge_name,
    edge_pair_index,
    opposite_edge,
)
from tetrageo.logging import get_logger
from tetrageo.services.geodesic_service import GeodesicType

logger = get_logger(__name__)

VERTEX_TOLERANCE = 1e-10
EXIT_TOLERANCE = 1e-14
REFINE_EVALUATIONS = 40


@dataclass(frozen=True)
class ShotCrossing:
    edge: Edge
    t: float
    angle: float
    face: int  # face entered
    length: float  # distance travelled up to this crossing


@dataclass
class ShotState:
    face: int
    position: np.ndarray
    direction: np.ndarray
    length: float = 0.0
    log: list[ShotCrossing] = field(default_factory=list)
    chords: list[tuple[int, np.ndarray, np.ndarray]] = field(default_factory=list)
    vertex_hit: bool = False


@dataclass(frozen=True, eq=False)
class FoundGeodesic:
    word: tuple[Edge, ...]
    start_edge: Edge
    start_face: int
    t0: float
    theta: float
    length: float
    closure_defect: float
    crossings: tuple[ShotCrossing, ...]
    type: GeodesicType | None

    @property
    def key(self) -> tuple[Edge, ...]:
        return word_key(self.word)


def start_face(edge: Edge) -> int:
    """Face on the side of the smaller of the two labels off `edge`."""
    return max(label for label in range(4) if label not in edge)


# -----------------------------
# Chord extension and gluing
# -----------------------------


def _edge_tangent(surface: Surface, face: int, edge: Edge, t: float) -> np.ndarray:
    start, tangent = surface.edge_frame(face, edge)
    s = t * surface.a
    return start * math.sinh(s) + tangent * math.cosh(s)


def direction_from_angle(surface: Surface, face: int, edge: Edge, t: float, theta: float):
    """Unit direction at the edge point making angle theta with the edge, pointing into `face`."""
    return math.cos(theta) * _edge_tangent(surface, face, edge, t) + math.sin(
        theta
    ) * surface.inward_normal(face, edge)


def _edge_hit(surface: Surface, face: int, edge: Edge, position, direction):
    """Distance along the ray to the line of `edge`, or None when it never gets there."""
    normal = surface.inward_normal(face, edge)
    towards = float(minkowski_dot(normal, direction))
    if towards >= 0.0:
        return None
    ratio = -float(minkowski_dot(normal, position)) / towards
    if not (-1.0 < ratio < 1.0):
        return None
    s = math.atanh(ratio)
    return s if s > EXIT_TOLERANCE else None


def _cross(surface: Surface, face: int, edge: Edge, position, direction, s: float):
    """Move to the edge at distance s and continue into the neighbouring face."""
    hit = position * math.cosh(s) + direction * math.sinh(s)
    travel = position * math.sinh(s) + direction * math.cosh(s)
    t = surface.edge_param(face, edge, hit)
    theta = tangent_angle_raw(travel, _edge_tangent(surface, face, edge, t))
    nxt = surface.other_face(edge, face)
    entry = surface.point_on_edge(nxt, edge, t)
    return hit, t, theta, nxt, entry, direction_from_angle(surface, nxt, edge, t, theta)


def shoot(
    surface: Surface,
    start_edge: Edge,
    t0: float,
    theta: float,
    l_max: float,
    *,
    face: int | None = None,
    strict: bool = False,
) -> ShotState:
    """
    Trace the geodesic leaving `start_edge` at parameter t0 and angle theta.

    Stops before the first chord that would exceed l_max, or when an edge is
    met within VERTEX_TOLERANCE of an endpoint (`vertex_hit`; raised as
    VertexHit when `strict`).
    """
    face = start_face(start_edge) if face is None else face
    position = surface.point_on_edge(face, start_edge, t0)
    state = ShotState(
        face=face,
        position=position,
        direction=direction_from_angle(surface, face, start_edge, t0, theta),
    )
    current = start_edge

    while True:
        candidates = []
        for edge in surface.chart(state.face).local_edges():
            if edge == current:
                continue
            s = _edge_hit(surface, state.face, edge, state.position, state.direction)
            if s is not None:
                candidates.append((s, edge))
        if not candidates:
            state.vertex_hit = True
            break
        s, edge = min(candidates)
        if state.length + s > l_max:
            break

        hit, t, angle, nxt, entry, direction = _cross(
            surface, state.face, edge, state.position, state.direction, s
        )
        if t < VERTEX_TOLERANCE or t > 1.0 - VERTEX_TOLERANCE:
            state.vertex_hit = True
            break

        state.chords.append((state.face, state.position, hit))
        state.length += s
        state.log.append(ShotCrossing(edge=edge, t=t, angle=angle, face=nxt, length=state.length))
        state.face, state.position, state.direction = nxt, entry, direction
        current = edge

    if state.vertex_hit and strict:
        raise VertexHit(
            f"shot from {edge_name(start_edge)} at t={t0:.6g}, theta={theta:.6g} "
            f"meets a vertex after {len(state.log)} crossings",
            location=state,
        )
    return state


def shoot_word(
    surface: Surface,
    start_edge: Edge,
    t0: float,
    theta: float,
    word: Sequence[Edge],
    *,
    face: int | None = None,
) -> tuple[float, float, float]:
    """
    Follow a fixed edge word from (t0, theta), ignoring edge endpoints.

    Returns the parameter, angle and length at the last crossing.

    Raises:
        SegmentEscapesDevelopment: the ray misses the line of the next edge.
    """
    face = start_face(start_edge) if face is None else face
    position = surface.point_on_edge(face, start_edge, t0)
    direction = direction_from_angle(surface, face, start_edge, t0, theta)
    length = 0.0
    t, angle = t0, theta
    for edge in word:
        s = _edge_hit(surface, face, edge, position, direction)
        if s is None:
            raise SegmentEscapesDevelopment(f"ray misses {edge_name(edge)} in face {face}")
        _, t, angle, face, position, direction = _cross(
            surface, face, edge, position, direction, s
        )
        length += s
    return t, angle, length


# -----------------------------
# Words and types
# -----------------------------


def word_key(word: Sequence[Edge]) -> tuple[Edge, ...]:
    """Smallest rotation of the cyclic word or of its reversal."""
    word = tuple(word)
    variants = []
    for candidate in (word, word[::-1]):
        variants.extend(candidate[i:] + candidate[:i] for i in range(len(candidate)))
    return min(variants)


def is_primitive(word: Sequence[Edge]) -> bool:
    n = len(word)
    word = tuple(word)
    return not any(
        n % period == 0 and word == word[:period] * (n // period) for period in range(1, n)
    )


def identify_type(word: Sequence[Edge]) -> GeodesicType | None:
    """Type from the crossing counts per opposite-edge pair, None when they fit no type."""
    per_edge = {edge: 0 for edge in EDGES}
    for edge in word:
        per_edge[edge] += 1
    counts = [0, 0, 0]
    for edge in EDGES:
        if edge < opposite_edge(edge):
            if per_edge[edge] != per_edge[opposite_edge(edge)]:
                return None
            counts[edge_pair_index(edge)] = per_edge[edge] + per_edge[opposite_edge(edge)]
    c1, c2, c3 = sorted(counts)
    if c1 % 2 or c2 % 2 or c3 != c1 + c2:
        return None
    p, q = c1 // 2, c2 // 2
    if math.gcd(p, q) != 1 or p > q:
        return None
    return GeodesicType(p, q)


def is_simple(chords: Sequence[tuple[int, np.ndarray, np.ndarray]]) -> bool:
    for (f, a, b), (g, c, d) in combinations(chords, 2):
        if f == g and segments_cross_raw(a, b, c, d):
            return False
    return True


# -----------------------------
# Search
# -----------------------------


@lru_cache(maxsize=4)
def _worker_surface(alpha: float) -> Surface:
    return build_surface(TetraParams(alpha))


def _scan_row(job):
    """Returns to the start edge (entering the start face) of every shot in one grid row."""
    alpha, edge, t0, thetas, l_max = job
    surface = _worker_surface(alpha)
    face = start_face(edge)
    found = {}
    for theta in thetas:
        state = shoot(surface, edge, t0, theta, l_max)
        for index, crossing in enumerate(state.log):
            if crossing.edge != edge or crossing.face != face:
                continue
            word = tuple(c.edge for c in state.log[: index + 1])
            defect = abs(crossing.t - t0) + abs(crossing.angle - theta)
            best = found.get(word)
            if best is None or defect < best[0]:
                found[word] = (defect, t0, theta)
    return [(defect, edge, word, t0, theta) for word, (defect, t0, theta) in found.items()]


def group_seeds(rows, per_word: int) -> dict[tuple[Edge, ...], list[tuple]]:
    """
    Near-closures grouped by cyclic word, best `per_word` seeds first.

    Every distinct word keeps its own seeds, whatever its defect compared
    with other words.
    """
    grouped: dict[tuple[Edge, ...], list[tuple]] = {}
    for row in rows:
        for seed in row:
            grouped.setdefault(word_key(seed[2]), []).append(seed)
    return {
        key: sorted(seeds, key=lambda item: (item[0], item[1], item[2]))[:per_word]
        for key, seeds in grouped.items()
    }


def _refine_seed(surface, edge, word, t0, theta, l_max, tol):
    """Close one seed and certify it by an unconstrained re-shoot."""
    face = start_face(edge)

    def defect(x):
        try:
            t_n, theta_n, _ = shoot_word(surface, edge, x[0], x[1], word, face=face)
        except SegmentEscapesDevelopment:
            return np.array([1.0, 1.0])
        return np.array([t_n - x[0], theta_n - x[1]])

    solution = root(
        defect,
        np.array([t0, theta]),
        method="hybr",
        options={"xtol": 1e-15, "maxfev": REFINE_EVALUATIONS},
    )
    t_star, theta_star = (float(value) for value in solution.x)
    if not (0.0 < t_star < 1.0 and 0.0 < theta_star < math.pi):
        return None

    state = shoot(surface, edge, t_star, theta_star, l_max, face=face)
    n = len(word)
    if len(state.log) < n or tuple(c.edge for c in state.log[:n]) != tuple(word):
        return None
    last = state.log[n - 1]
    closure = max(abs(last.t - t_star), abs(last.angle - theta_star))
    if closure >= tol or last.face != face:
        return None
    if not is_primitive(word) or not is_simple(state.chords[:n]):
        return None

    chords = state.chords[:n]
    length = float(sum(hdist_raw(a, b) for _, a, b in chords))
    if length > l_max:
        return None
    return FoundGeodesic(
        word=tuple(word),
        start_edge=edge,
        start_face=face,
        t0=t_star,
        theta=theta_star,
        length=length,
        closure_defect=closure,
        crossings=tuple(state.log[:n]),
        type=identify_type(word),
    )


def _refine(job):
    """First seed of one cyclic word that refines to a certified closure."""
    alpha, seeds, l_max, tol = job
    surface = _worker_surface(alpha)
    for _, edge, word, t0, theta in seeds:
        result = _refine_seed(surface, edge, word, t0, theta, l_max, tol)
        if result is not None:
            return result
    return None


class ShootingOracle:
    """
    Grid search over start edge, parameter and angle, refined to exact closures.

    The set of starts that follow a closed geodesic for a whole period shrinks
    roughly like exp(-length), so a fixed grid only resolves geodesics up to a
    length that grows with log(grid).
    """

    def __init__(
        self,
        surface: Surface,
        *,
        grid: int = 200,
        refine_tol: float = 1e-9,
        seeds_per_word: int = 2,
        threads: int = 1,
    ):
        self._surface = surface
        self._grid = grid
        self._refine_tol = refine_tol
        self._seeds_per_word = seeds_per_word
        self._threads = threads

    def _map(self, func, jobs):
        if self._threads > 1 and len(jobs) > 1:
            with Pool(processes=self._threads) as pool:
                return pool.map(func, jobs)
        return [func(job) for job in jobs]

    def find_closed(self, l_max: float) -> list[FoundGeodesic]:
        alpha = self._surface.alpha
        ticks = (np.arange(self._grid) + 0.5) / self._grid
        thetas = [float(value) for value in ticks * math.pi]
        scan_jobs = [
            (alpha, edge, float(t0), thetas, l_max) for edge in EDGES for t0 in ticks
        ]
        grouped = group_seeds(self._map(_scan_row, scan_jobs), self._seeds_per_word)

        refine_jobs = [
            (alpha, grouped[key], l_max, self._refine_tol) for key in sorted(grouped)
        ]
        found: dict[tuple[Edge, ...], FoundGeodesic] = {}
        for result in self._map(_refine, refine_jobs):
            if result is not None and result.key not in found:
                found[result.key] = result

        geodesics = sorted(found.values(), key=lambda g: (g.length, g.key))
        logger.info(
            f"Oracle alpha={alpha:.12g} [L_max={l_max:.6g} | grid={self._grid} | "
            f"words={len(grouped)} | found={len(geodesics)}]"
        )
        return geodesics
