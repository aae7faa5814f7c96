"""
Exact combinatorics of the equilateral tiling plus the hyperbolic development engine.

Tiling coordinates are (x, row) with y = row * sqrt(3)/2, both exact
Fractions. Rows of even index carry A1/A2 at integer x, odd rows carry
A3/A4 at half-integer x. A straight line of type (p, q) advances
(q + 2p, 2q) in (x, row) per period, so every crossing is rational.

Three families of tiling lines carry the tetrahedron edges:
- horizontal rows (A1A2, A3A4), q crossings per edge
- rising lines x - row/2 = k (A1A3, A2A4), p crossings per edge
- falling lines x + row/2 = k (A1A4, A2A3), p + q crossings per edge
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from tetrageo.enums import StartFamily
from tetrageo.exceptions import (
    DomainError,
    NonCanonicalType,
    NotCoprime,
    StructureViolation,
    VertexHit,
)
from tetrageo.geometry.hypmath import HIsometry, HPoint, angle
from tetrageo.geometry.tetrahedron import (
    Edge,
    Surface,
    edge_name,
    edge_pair_index,
    face_labels,
    face_of_edges,
    make_edge,
    opposite_edge,
)
from tetrageo.logging import get_logger

logger = get_logger(__name__)

HALF = Fraction(1, 2)
PLACEMENT_TOLERANCE = 1e-10


def check_canonical(p: int, q: int) -> None:
    """Coprime with 0 <= p <= q; p == q only leaves (1, 1)."""
    if not (isinstance(p, int) and isinstance(q, int)):
        raise DomainError(f"type ({p},{q}) must be a pair of integers")
    if math.gcd(p, q) != 1:
        raise NotCoprime(p, q)
    if not (0 <= p <= q):
        raise NonCanonicalType(p, q)


# -----------------------------
# Tiling
# -----------------------------


@dataclass(frozen=True)
class TilingPoint:
    x: Fraction
    row: Fraction

    def euclid(self) -> tuple[float, float]:
        return float(self.x), float(self.row) * math.sqrt(3.0) / 2.0


def tiling_label(row: int, x: Fraction) -> int:
    """Tetrahedron vertex label of the tiling vertex (x, row)."""
    if row % 2 == 0:
        if x.denominator != 1:
            raise DomainError(f"({x}, {row}) is not a tiling vertex")
        n = x.numerator
        return 0 if (n + row // 2) % 2 == 0 else 1
    shifted = x - HALF
    if shifted.denominator != 1:
        raise DomainError(f"({x}, {row}) is not a tiling vertex")
    n = shifted.numerator
    return 2 if (n + (row - 1) // 2) % 2 == 0 else 3


@dataclass(frozen=True)
class TilingCrossing:
    edge: Edge
    t: Fraction
    tau: Fraction
    point: TilingPoint
    family: StartFamily


@dataclass(frozen=True)
class CrossingSeq:
    p: int
    q: int
    mu: Fraction
    family: StartFamily
    crossings: tuple[TilingCrossing, ...]

    def __len__(self) -> int:
        return len(self.crossings)

    def edges(self) -> list[Edge]:
        return [crossing.edge for crossing in self.crossings]

    def params(self) -> list[Fraction]:
        return [crossing.t for crossing in self.crossings]

    def faces(self) -> list[int]:
        """Face between crossing i and crossing i+1 (cyclically)."""
        edges = self.edges()
        n = len(edges)
        return [face_of_edges(edges[i], edges[(i + 1) % n]) for i in range(n)]

    def pair_counts(self) -> tuple[int, int, int]:
        return pair_counts(self.edges())


def pair_counts(edges: Sequence[Edge]) -> tuple[int, int, int]:
    """
    Crossings per edge for the pairs {A1A2, A3A4}, {A1A3, A2A4}, {A1A4, A2A3}.

    Raises StructureViolation when the two edges of a pair are crossed a
    different number of times.
    """
    totals = [0, 0, 0]
    per_edge: dict[Edge, int] = {}
    for edge in edges:
        totals[edge_pair_index(edge)] += 1
        per_edge[edge] = per_edge.get(edge, 0) + 1
    for edge, count in per_edge.items():
        if 2 * count != totals[edge_pair_index(edge)]:
            raise StructureViolation(
                f"unbalanced crossings on the pair of {edge_name(edge)}: {per_edge}"
            )
    return totals[0] // 2, totals[1] // 2, totals[2] // 2


_START = {
    StartFamily.HORIZONTAL: lambda mu: TilingPoint(mu, Fraction(0)),
    StartFamily.RISING: lambda mu: TilingPoint(mu / 2, mu),
    StartFamily.FALLING: lambda mu: TilingPoint(-mu / 2, mu),
}


def _line_events(start_value: Fraction, rate: int) -> list[tuple[Fraction, int]]:
    """(tau, line index) for the integers met by start_value + rate * tau, tau in [0, 1)."""
    if rate == 0:
        return []
    first = math.ceil(start_value)
    last = math.ceil(start_value + rate) - 1
    return [(Fraction(k - start_value) / rate, k) for k in range(first, last + 1)]


def _edge_and_param(lower: TilingPoint, upper: TilingPoint, s: Fraction) -> tuple[Edge, Fraction]:
    la = tiling_label(int(lower.row), lower.x)
    lb = tiling_label(int(upper.row), upper.x)
    if la == lb:
        raise StructureViolation(f"tiling edge with repeated label {la}")
    return make_edge(la, lb), (s if la < lb else 1 - s)


def tiling_trace(
    p: int,
    q: int,
    mu: Fraction | int | str = HALF,
    family: StartFamily = StartFamily.HORIZONTAL,
) -> CrossingSeq:
    """
    Exact crossing sequence of one period of the type (p, q) line.

    Args:
        mu: start offset along the start edge, exclusive of its endpoints.
        family: which edge family the start point sits on.

    Returns:
        The 4(p+q) crossings in order, starting with the start point.
    """
    check_canonical(p, q)
    mu = Fraction(mu)
    if not (0 < mu < 1):
        raise DomainError(f"start offset {mu} must lie in (0, 1)")

    rates = {
        StartFamily.HORIZONTAL: 2 * q,
        StartFamily.RISING: 2 * p,
        StartFamily.FALLING: 2 * (p + q),
    }
    if rates[family] == 0:
        raise DomainError(f"type ({p},{q}) runs parallel to the {family.value} edges")

    start = _START[family](mu)
    dx = q + 2 * p
    drow = 2 * q
    starts = {
        StartFamily.HORIZONTAL: start.row,
        StartFamily.RISING: start.x - start.row / 2,
        StartFamily.FALLING: start.x + start.row / 2,
    }

    events: list[tuple[Fraction, StartFamily, int]] = []
    for line_family, rate in rates.items():
        for tau, k in _line_events(starts[line_family], rate):
            events.append((tau, line_family, k))
    events.sort(key=lambda event: event[0])

    crossings: list[TilingCrossing] = []
    for index, (tau, line_family, k) in enumerate(events):
        x = start.x + dx * tau
        row = start.row + drow * tau
        point = TilingPoint(x, row)
        if index + 1 < len(events) and events[index + 1][0] == tau:
            raise VertexHit(f"type ({p},{q}) from {start} meets a vertex at {point}", location=point)

        if line_family is StartFamily.HORIZONTAL:
            shift = Fraction(k % 2, 2)
            left = math.floor(x - shift) + shift
            lower = TilingPoint(left, Fraction(k))
            upper = TilingPoint(left + 1, Fraction(k))
            s = x - left
        else:
            m = math.floor(row)
            sign = 1 if line_family is StartFamily.RISING else -1
            lower = TilingPoint(k + sign * Fraction(m, 2), Fraction(m))
            upper = TilingPoint(k + sign * Fraction(m + 1, 2), Fraction(m + 1))
            s = row - m
        if s == 0:
            raise VertexHit(f"type ({p},{q}) from {start} meets a vertex at {point}", location=point)

        edge, t = _edge_and_param(lower, upper, s)
        crossings.append(TilingCrossing(edge=edge, t=t, tau=tau, point=point, family=line_family))

    if len(crossings) != 4 * (p + q):
        raise StructureViolation(
            f"type ({p},{q}) produced {len(crossings)} crossings, expected {4 * (p + q)}"
        )
    return CrossingSeq(p=p, q=q, mu=mu, family=family, crossings=tuple(crossings))


def midpoint_family(p: int, q: int) -> StartFamily:
    """Start family whose edge midpoint is vertex-free for type (p, q)."""
    return StartFamily.HORIZONTAL if q % 2 == 1 else StartFamily.RISING


def midpoint_sequence(p: int, q: int) -> tuple[CrossingSeq, int]:
    seq = tiling_trace(p, q, HALF, midpoint_family(p, q))
    half = 2 * (p + q)
    if seq.crossings[0].t != HALF or seq.crossings[half].t != HALF:
        raise StructureViolation(f"type ({p},{q}) misses the half-way midpoint")
    if seq.crossings[half].edge != opposite_edge(seq.crossings[0].edge):
        raise StructureViolation(f"type ({p},{q}) half-way crossing is not on the opposite edge")
    return seq, half


def euclid_length(p: int, q: int) -> float:
    """Length of one period for unit edges."""
    check_canonical(p, q)
    return 2.0 * math.sqrt(p * p + p * q + q * q)


# -----------------------------
# Hyperbolic development
# -----------------------------


@dataclass(frozen=True)
class BoundaryCorner:
    label: int
    first_copy: int
    copies: int
    angle: float
    multiple: int


@dataclass(frozen=True, eq=False)
class Development:
    surface: Surface
    faces: tuple[int, ...]
    placements: tuple[HIsometry, ...]
    shared_edges: tuple[Edge, ...]

    def vertex(self, copy: int, label: int) -> HPoint:
        return self.placements[copy].apply(self.surface.chart(self.faces[copy]).vertex(label))

    def place(self, copy: int, chart_point: HPoint) -> HPoint:
        return self.placements[copy].apply(chart_point)

    def boundary_angles(self) -> list[BoundaryCorner]:
        """Angle sums at each development vertex, one entry per run of copies sharing it."""
        alpha = self.surface.alpha
        corners: list[BoundaryCorner] = []
        for copy, face in enumerate(self.faces):
            for label in face_labels(face):
                if copy > 0 and label in face_labels(self.faces[copy - 1]):
                    continue
                run = copy
                total = 0.0
                while run < len(self.faces) and label in face_labels(self.faces[run]):
                    others = [v for v in face_labels(self.faces[run]) if v != label]
                    total += angle(
                        self.vertex(run, label),
                        self.vertex(run, others[0]),
                        self.vertex(run, others[1]),
                    )
                    run += 1
                corners.append(
                    BoundaryCorner(
                        label=label,
                        first_copy=copy,
                        copies=run - copy,
                        angle=total,
                        multiple=round(total / alpha),
                    )
                )
        return corners


def develop(surface: Surface, seq: Sequence[int], seed: HIsometry | None = None) -> Development:
    """
    Lay out copies of the faces in `seq` so consecutive copies share their glued edge.

    Raises:
        NonAdjacentFaces: two consecutive faces coincide or are unknown.
        StructureViolation: a shared edge fails to match after placement.
    """
    faces = tuple(seq)
    if not faces:
        raise DomainError("a development needs at least one face")
    surface.chart(faces[0])
    placements = [seed or HIsometry.identity()]
    shared: list[Edge] = []
    for previous, face in zip(faces, faces[1:]):
        edge = surface.shared_edge(previous, face)
        placement = placements[-1].compose(surface.transition(previous, face))
        for label in edge:
            here = placements[-1].apply(surface.chart(previous).vertex(label)).coords
            there = placement.apply(surface.chart(face).vertex(label)).coords
            scale = max(1.0, abs(here[0]))
            if max(abs(here - there)) > PLACEMENT_TOLERANCE * scale:
                raise StructureViolation(
                    f"copies {len(placements) - 1} and {len(placements)} disagree on {edge_name(edge)}"
                )
        placements.append(placement)
        shared.append(edge)
    logger.debug(f"Developed {len(faces)} face copies")
    return Development(
        surface=surface,
        faces=faces,
        placements=tuple(placements),
        shared_edges=tuple(shared),
    )
