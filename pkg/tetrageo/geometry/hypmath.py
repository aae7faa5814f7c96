"""
Hyperbolic plane kernel on the hyperboloid model (curvature -1).

Points live on the upper sheet of -x0^2 + x1^2 + x2^2 = -1. Klein and
Poincare disk coordinates are only produced at the export boundary.
Functions accept HPoint values; the `_raw` helpers operate on bare numpy
arrays (shape (..., 3)) for the vectorised solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from tetrageo.exceptions import DegenerateGeometryError, DomainError

SIGNATURE = np.array([-1.0, 1.0, 1.0])
ETA = np.diag(SIGNATURE)

NORM_TOLERANCE = 1e-12
ISOMETRY_TOLERANCE = 1e-10
CLAMP_TOLERANCE = 1e-9
ORIENTATION_GUARD = 1e-12
MAX_ALPHA = math.pi / 3


# -----------------------------
# Minkowski algebra
# -----------------------------


def minkowski_dot(u: np.ndarray, v: np.ndarray) -> np.ndarray | float:
    return np.sum(u * SIGNATURE * v, axis=-1)


def mink_cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vector Minkowski-orthogonal to both u and v."""
    return SIGNATURE * np.cross(u, v)


def cosh_distance_raw(p: np.ndarray, q: np.ndarray) -> np.ndarray | float:
    return -minkowski_dot(p, q)


def _guarded_arcosh(value: float) -> float:
    if value < 1.0 - CLAMP_TOLERANCE:
        raise DomainError(f"arcosh argument {value!r} below 1: corrupted point data")
    return math.acosh(max(value, 1.0))


# -----------------------------
# Points and directions
# -----------------------------


@dataclass(frozen=True, eq=False)
class HPoint:
    coords: np.ndarray

    @classmethod
    def from_coords(cls, coords: Sequence[float], *, check: bool = True) -> HPoint:
        point = cls(np.asarray(coords, dtype=float))
        if check:
            point.check()
        return point

    @classmethod
    def from_klein(cls, x: float, y: float) -> HPoint:
        r2 = x * x + y * y
        if r2 >= 1.0:
            raise DomainError(f"Klein point ({x}, {y}) is not inside the unit disk")
        scale = 1.0 / math.sqrt(1.0 - r2)
        return cls(np.array([scale, x * scale, y * scale]))

    def check(self) -> None:
        norm = float(minkowski_dot(self.coords, self.coords))
        if abs(norm + 1.0) > NORM_TOLERANCE * max(1.0, self.coords[0] ** 2):
            raise DomainError(f"not on the hyperboloid: <P,P> = {norm}")
        if self.coords[0] < 1.0 - NORM_TOLERANCE:
            raise DomainError("point lies on the lower sheet")

    def klein(self) -> tuple[float, float]:
        x0, x1, x2 = self.coords
        return float(x1 / x0), float(x2 / x0)

    def poincare(self) -> tuple[float, float]:
        x0, x1, x2 = self.coords
        return float(x1 / (1.0 + x0)), float(x2 / (1.0 + x0))

    def __repr__(self) -> str:
        x0, x1, x2 = self.coords
        return f"HPoint({x0:.12g}, {x1:.12g}, {x2:.12g})"


def origin() -> HPoint:
    return HPoint(np.array([1.0, 0.0, 0.0]))


@dataclass(frozen=True, eq=False)
class HDirection:
    base: HPoint
    vector: np.ndarray

    @classmethod
    def towards(cls, p: HPoint, q: HPoint) -> HDirection:
        return cls(p, unit_tangent_raw(p.coords, q.coords))

    def check(self) -> None:
        if abs(float(minkowski_dot(self.base.coords, self.vector))) > NORM_TOLERANCE * 10:
            raise DomainError("direction is not tangent to its base point")
        if abs(float(minkowski_dot(self.vector, self.vector)) - 1.0) > NORM_TOLERANCE * 10:
            raise DomainError("direction is not a unit vector")

    def rotated(self, theta: float) -> HDirection:
        """Rotate counter-clockwise (Klein picture) by theta in the tangent plane."""
        normal = mink_cross(self.base.coords, self.vector)
        return HDirection(
            self.base, math.cos(theta) * self.vector + math.sin(theta) * normal
        )


def unit_tangent_raw(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # q + <p, q> p rewritten through q - p to stay accurate for close points
    diff = q - p
    tangent = diff - 0.5 * minkowski_dot(diff, diff) * p
    norm2 = float(minkowski_dot(tangent, tangent))
    if norm2 <= 1e-30:
        raise DegenerateGeometryError("coincident points have no direction between them")
    return tangent / math.sqrt(norm2)


# -----------------------------
# Metric operations
# -----------------------------


def hdist(p: HPoint, q: HPoint) -> float:
    return hdist_raw(p.coords, q.coords)


def hdist_raw(p: np.ndarray, q: np.ndarray) -> float:
    c = float(cosh_distance_raw(p, q))
    if c < 1.0 - CLAMP_TOLERANCE:
        raise DomainError(f"cosh distance {c!r} below 1: corrupted point data")
    if c < 2.0:
        # <P-Q, P-Q> = 4 sinh^2(d/2), accurate for short distances
        diff = p - q
        half_chord = math.sqrt(max(float(minkowski_dot(diff, diff)), 0.0)) / 2.0
        return 2.0 * math.asinh(half_chord)
    return math.acosh(c)


def geodesic_point(p: HPoint, v: HDirection, s: float) -> HPoint:
    return HPoint(p.coords * math.cosh(s) + v.vector * math.sinh(s))


def angle(p: HPoint, q: HPoint, r: HPoint) -> float:
    """Angle at p between the geodesics pq and pr, in [0, pi]."""
    u = unit_tangent_raw(p.coords, q.coords)
    w = unit_tangent_raw(p.coords, r.coords)
    return tangent_angle_raw(u, w)


def tangent_angle_raw(u: np.ndarray, w: np.ndarray) -> float:
    diff = u - w
    summ = u + w
    d = math.sqrt(max(float(minkowski_dot(diff, diff)), 0.0))
    s = math.sqrt(max(float(minkowski_dot(summ, summ)), 0.0))
    return 2.0 * math.atan2(d, s)


def point_segment_distance(v: HPoint, p: HPoint, q: HPoint) -> float:
    return point_segment_distance_raw(v.coords, p.coords, q.coords)


def point_segment_distance_raw(v: np.ndarray, p: np.ndarray, q: np.ndarray) -> float:
    """Distance from v to the closed segment pq."""
    length = hdist_raw(p, q)
    if length == 0.0:
        return hdist_raw(v, p)
    w = unit_tangent_raw(p, q)
    a = float(cosh_distance_raw(v, p))
    b = -float(minkowski_dot(v, w))
    # cosh d(s) = a cosh s + b sinh s along p cosh s + w sinh s
    ratio = -b / a
    if abs(ratio) < 1.0:
        s = min(max(math.atanh(ratio), 0.0), length)
    else:
        s = 0.0 if ratio <= 0.0 else length
    best = a * math.cosh(s) + b * math.sinh(s)
    best = min(best, a, a * math.cosh(length) + b * math.sinh(length))
    return _guarded_arcosh(best)


# -----------------------------
# Orientation predicates
# -----------------------------


def orientation_raw(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> float:
    """Positive when p, q, r turn counter-clockwise."""
    return float(np.linalg.det(np.stack([p, q, r])))


def segments_cross(
    p: HPoint, q: HPoint, r: HPoint, s: HPoint, *, guard: float = ORIENTATION_GUARD
) -> bool:
    """
    Open-segment intersection test for pq and rs.

    Near-collinear configurations (|det| < guard) cannot be certified
    disjoint and count as crossings.
    """
    return segments_cross_raw(p.coords, q.coords, r.coords, s.coords, guard=guard)


def segments_cross_raw(
    p: np.ndarray,
    q: np.ndarray,
    r: np.ndarray,
    s: np.ndarray,
    *,
    guard: float = ORIENTATION_GUARD,
) -> bool:
    d1 = orientation_raw(p, q, r)
    d2 = orientation_raw(p, q, s)
    d3 = orientation_raw(r, s, p)
    d4 = orientation_raw(r, s, q)
    if min(abs(d1), abs(d2), abs(d3), abs(d4)) < guard:
        return True
    return (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0)


# -----------------------------
# Isometries
# -----------------------------


@dataclass(frozen=True, eq=False)
class HIsometry:
    matrix: np.ndarray
    orientation: int = 1

    @classmethod
    def identity(cls) -> HIsometry:
        return cls(np.eye(3), 1)

    def apply(self, point: HPoint) -> HPoint:
        return HPoint(self.matrix @ point.coords)

    def apply_raw(self, coords: np.ndarray) -> np.ndarray:
        return coords @ self.matrix.T

    def compose(self, other: HIsometry) -> HIsometry:
        """self after other."""
        return HIsometry(self.matrix @ other.matrix, self.orientation * other.orientation)

    def inverse(self) -> HIsometry:
        return HIsometry(ETA @ self.matrix.T @ ETA, self.orientation)

    def check(self) -> None:
        residual = self.matrix.T @ ETA @ self.matrix - ETA
        if np.max(np.abs(residual)) > ISOMETRY_TOLERANCE * max(1.0, self.matrix[0, 0] ** 2):
            raise DomainError("matrix does not preserve the Minkowski form")
        if self.matrix[0, 0] <= 0.0:
            raise DomainError("matrix swaps the hyperboloid sheets")


def boost_to(p: HPoint) -> HIsometry:
    """Proper isometry taking the origin to p without rotation."""
    x0, x1, x2 = p.coords
    k = 1.0 / (1.0 + x0)
    matrix = np.array(
        [
            [x0, x1, x2],
            [x1, 1.0 + x1 * x1 * k, x1 * x2 * k],
            [x2, x1 * x2 * k, 1.0 + x2 * x2 * k],
        ]
    )
    return HIsometry(matrix, 1)


def rotation_about(p: HPoint, theta: float) -> HIsometry:
    c, s = math.cos(theta), math.sin(theta)
    spin = HIsometry(np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]), 1)
    boost = boost_to(p)
    return boost.compose(spin).compose(boost.inverse())


def line_normal_raw(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Unit spacelike normal of the geodesic line through a and b."""
    n = mink_cross(a, b)
    norm2 = float(minkowski_dot(n, n))
    if norm2 <= 1e-30:
        raise DegenerateGeometryError("a line needs two distinct points")
    return n / math.sqrt(norm2)


def reflect_across(a: HPoint, b: HPoint) -> HIsometry:
    n = line_normal_raw(a.coords, b.coords)
    matrix = np.eye(3) - 2.0 * np.outer(n, SIGNATURE * n)
    return HIsometry(matrix, -1)


def isometry_from_points(src: Sequence[HPoint], dst: Sequence[HPoint]) -> HIsometry:
    """The isometry sending three non-collinear points src[i] to dst[i]."""
    source = np.column_stack([point.coords for point in src])
    target = np.column_stack([point.coords for point in dst])
    matrix = target @ np.linalg.inv(source)
    orientation = 1 if np.linalg.det(matrix) > 0 else -1
    return HIsometry(matrix, orientation)


# -----------------------------
# Tetrahedron face formulas
# -----------------------------


def check_alpha(alpha: float) -> float:
    if not (0.0 < alpha < MAX_ALPHA) or not math.isfinite(alpha):
        raise DomainError(f"face angle {alpha!r} must lie in (0, pi/3)")
    return float(alpha)


def edge_length(alpha: float) -> float:
    check_alpha(alpha)
    cos_a = math.cos(alpha)
    return math.acosh(max(cos_a / (1.0 - cos_a), 1.0))


def face_altitude(alpha: float) -> float:
    check_alpha(alpha)
    return math.atanh(math.tanh(edge_length(alpha)) * math.cos(alpha / 2.0))


def edge_length_identities(alpha: float) -> dict[str, float]:
    """Residuals of the closed forms for tanh a, cosh(a/2) and sinh(a/2)."""
    a = edge_length(alpha)
    root = math.sqrt(2.0 * math.cos(alpha) - 1.0)
    half_sin = 2.0 * math.sin(alpha / 2.0)
    return {
        "tanh_a": math.tanh(a) - root / math.cos(alpha),
        "cosh_half_a": math.cosh(a / 2.0) - 1.0 / half_sin,
        "sinh_half_a": math.sinh(a / 2.0) - root / half_sin,
    }


# -----------------------------
# Right-triangle oracles
# -----------------------------


def right_triangle(leg_ca: float, leg_cb: float) -> tuple[HPoint, HPoint, HPoint]:
    """Triangle ABC with the right angle at C placed at the origin."""
    c = origin()
    a = HPoint(np.array([math.cosh(leg_ca), math.sinh(leg_ca), 0.0]))
    b = HPoint(np.array([math.cosh(leg_cb), 0.0, math.sinh(leg_cb)]))
    return a, b, c


def right_triangle_residuals(a: HPoint, b: HPoint, c: HPoint) -> dict[str, float]:
    ab, ac, cb = hdist(a, b), hdist(a, c), hdist(c, b)
    angle_a = angle(a, c, b)
    return {
        "pythagoras": math.cosh(ab) - math.cosh(ac) * math.cosh(cb),
        "tanh_cos": math.tanh(ac) - math.tanh(ab) * math.cos(angle_a),
        "tanh_tan": math.tanh(cb) - math.sinh(ac) * math.tan(angle_a),
        "sinh_sin": math.sinh(cb) - math.sinh(ab) * math.sin(angle_a),
    }
