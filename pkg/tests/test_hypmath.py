import math

import mpmath
import numpy as np
import pytest

from tetrageo.exceptions import DegenerateGeometryError, DomainError
from tetrageo.geometry.hypmath import (
    HDirection,
    HIsometry,
    HPoint,
    angle,
    boost_to,
    check_alpha,
    edge_length,
    edge_length_identities,
    face_altitude,
    geodesic_point,
    hdist,
    isometry_from_points,
    minkowski_dot,
    origin,
    point_segment_distance,
    reflect_across,
    right_triangle,
    right_triangle_residuals,
    rotation_about,
    segments_cross,
    unit_tangent_raw,
)

ALPHAS = np.linspace(0.01, math.pi / 3 - 0.01, 50)


# -----------------------------
# Points and distances
# -----------------------------


class TestPoints:
    """Hyperboloid points and their disk coordinates."""

    def test_origin_has_unit_norm(self):
        assert abs(minkowski_dot(origin().coords, origin().coords) + 1.0) < 1e-15

    def test_klein_round_trip(self):
        point = HPoint.from_klein(0.3, -0.4)
        point.check()
        x, y = point.klein()
        assert abs(x - 0.3) < 1e-15 and abs(y + 0.4) < 1e-15

    def test_klein_outside_disk_rejected(self):
        with pytest.raises(DomainError):
            HPoint.from_klein(0.8, 0.8)

    def test_off_hyperboloid_rejected(self):
        with pytest.raises(DomainError):
            HPoint.from_coords([1.0, 1.0, 0.0])

    def test_radial_distance(self):
        assert abs(hdist(origin(), HPoint.from_klein(0.5, 0.0)) - math.atanh(0.5)) < 1e-14

    def test_short_distance_keeps_precision(self):
        point = geodesic_point(origin(), HDirection(origin(), np.array([0.0, 1.0, 0.0])), 1e-9)
        assert abs(hdist(origin(), point) - 1e-9) < 1e-20

    def test_coincident_points_have_no_direction(self):
        with pytest.raises(DegenerateGeometryError):
            unit_tangent_raw(origin().coords, origin().coords)

    def test_right_angle_at_origin(self):
        value = angle(origin(), HPoint.from_klein(0.5, 0.0), HPoint.from_klein(0.0, 0.5))
        assert abs(value - math.pi / 2) < 1e-14

    def test_rotated_direction(self):
        direction = HDirection(origin(), np.array([0.0, 1.0, 0.0])).rotated(math.pi / 3)
        direction.check()
        target = geodesic_point(origin(), direction, 1.0)
        assert abs(angle(origin(), HPoint.from_klein(0.5, 0.0), target) - math.pi / 3) < 1e-12


class TestPointSegmentDistance:
    def test_foot_inside_segment(self):
        value = point_segment_distance(
            HPoint.from_klein(0.0, 0.5), HPoint.from_klein(-0.5, 0.0), HPoint.from_klein(0.5, 0.0)
        )
        assert abs(value - math.atanh(0.5)) < 1e-13

    def test_foot_beyond_endpoint(self):
        value = point_segment_distance(
            HPoint.from_klein(0.8, 0.0), origin(), HPoint.from_klein(0.5, 0.0)
        )
        assert abs(value - (math.atanh(0.8) - math.atanh(0.5))) < 1e-13


class TestSegmentsCross:
    def test_crossing_diagonals(self):
        assert segments_cross(
            HPoint.from_klein(-0.5, 0.0),
            HPoint.from_klein(0.5, 0.0),
            HPoint.from_klein(0.0, -0.5),
            HPoint.from_klein(0.0, 0.5),
        )

    def test_parallel_segments(self):
        assert not segments_cross(
            HPoint.from_klein(-0.5, 0.2),
            HPoint.from_klein(0.5, 0.2),
            HPoint.from_klein(-0.5, -0.2),
            HPoint.from_klein(0.5, -0.2),
        )

    def test_touching_segments_count_as_crossing(self):
        assert segments_cross(
            HPoint.from_klein(-0.5, 0.0),
            HPoint.from_klein(0.5, 0.0),
            HPoint.from_klein(0.5, 0.0),
            HPoint.from_klein(0.5, 0.4),
        )


# -----------------------------
# Isometries
# -----------------------------


class TestIsometries:
    def test_boost_sends_origin(self):
        target = HPoint.from_klein(0.2, 0.6)
        boost = boost_to(target)
        boost.check()
        assert np.allclose(boost.apply(origin()).coords, target.coords, atol=1e-14)

    def test_inverse_composes_to_identity(self):
        rotation = rotation_about(HPoint.from_klein(0.1, -0.3), 1.1)
        rotation.check()
        product = rotation.compose(rotation.inverse())
        assert np.allclose(product.matrix, np.eye(3), atol=1e-12)

    def test_reflection_fixes_its_line(self):
        a, b = HPoint.from_klein(-0.3, 0.1), HPoint.from_klein(0.4, 0.2)
        mirror = reflect_across(a, b)
        mirror.check()
        assert mirror.orientation == -1
        assert np.allclose(mirror.apply(a).coords, a.coords, atol=1e-13)
        assert np.allclose(mirror.compose(mirror).matrix, np.eye(3), atol=1e-12)

    def test_isometry_from_points(self):
        src = [origin(), HPoint.from_klein(0.5, 0.0), HPoint.from_klein(0.0, 0.5)]
        motion: HIsometry = rotation_about(HPoint.from_klein(0.2, 0.2), 0.7)
        dst = [motion.apply(point) for point in src]
        found = isometry_from_points(src, dst)
        found.check()
        assert found.orientation == 1
        assert np.allclose(found.matrix, motion.matrix, atol=1e-12)


SEEDS = range(100)


def _random_point(rng: np.random.Generator, radius: float = 0.9) -> HPoint:
    r = radius * math.sqrt(rng.uniform())
    phi = rng.uniform(0.0, 2.0 * math.pi)
    return HPoint.from_klein(r * math.cos(phi), r * math.sin(phi))


def _random_isometry(rng: np.random.Generator, kind: str) -> HIsometry:
    if kind == "rotation":
        return rotation_about(_random_point(rng), rng.uniform(-math.pi, math.pi))
    a = _random_point(rng)
    b = _random_point(rng)
    while hdist(a, b) < 1e-2:
        b = _random_point(rng)
    return reflect_across(a, b)


class TestIsometryProperties:
    @pytest.mark.parametrize("seed", range(20))
    def test_rotation_fixes_its_centre(self, seed):
        rng = np.random.default_rng(seed)
        centre = _random_point(rng)
        rotation = rotation_about(centre, rng.uniform(-math.pi, math.pi))
        assert np.allclose(rotation.apply(centre).coords, centre.coords, atol=1e-11)

    @pytest.mark.parametrize("seed", range(20))
    def test_half_turn_is_an_involution(self, seed):
        rng = np.random.default_rng(seed)
        half_turn = rotation_about(_random_point(rng), math.pi)
        assert np.allclose(half_turn.compose(half_turn).matrix, np.eye(3), atol=1e-10)

    @pytest.mark.parametrize("kind", ["rotation", "reflection"])
    @pytest.mark.parametrize("seed", SEEDS)
    def test_distance_is_preserved(self, seed, kind):
        rng = np.random.default_rng(seed)
        motion = _random_isometry(rng, kind)
        motion.check()
        p, q = _random_point(rng), _random_point(rng)
        assert abs(hdist(motion.apply(p), motion.apply(q)) - hdist(p, q)) < 1e-10

    @pytest.mark.parametrize("seed", SEEDS)
    def test_triangle_inequality(self, seed):
        rng = np.random.default_rng(seed)
        a, b, c = (_random_point(rng) for _ in range(3))
        assert hdist(a, c) <= hdist(a, b) + hdist(b, c) + 1e-12


# -----------------------------
# Face formulas
# -----------------------------


class TestFaceFormulas:
    @pytest.mark.parametrize("alpha", [0.0, -0.1, math.pi / 3, 2.0, float("nan")])
    def test_alpha_out_of_range(self, alpha):
        with pytest.raises(DomainError):
            check_alpha(alpha)

    def test_edge_length_at_quarter_pi(self):
        assert abs(edge_length(math.pi / 4) - math.acosh(1.0 + math.sqrt(2.0))) < 1e-13

    def test_edge_length_against_extended_precision(self):
        mpmath.mp.dps = 40
        for alpha in (0.1, 0.5, 1.0):
            exact = mpmath.acosh(mpmath.cos(alpha) / (1 - mpmath.cos(alpha)))
            assert abs(edge_length(alpha) - float(exact)) < 1e-12

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_edge_length_identities(self, alpha):
        for name, residual in edge_length_identities(alpha).items():
            assert abs(residual) < 1e-10, name

    @pytest.mark.parametrize("alpha", ALPHAS[::7])
    def test_altitude_meets_the_opposite_side(self, alpha):
        a = edge_length(alpha)
        h = face_altitude(alpha)
        # the altitude splits the face into two right triangles
        assert abs(math.cosh(a) - math.cosh(h) * math.cosh(a / 2)) < 1e-9 * math.cosh(a)


class TestRightTriangle:
    @pytest.mark.parametrize("legs", [(0.3, 0.4), (1.0, 2.0), (1.7, 0.2)])
    def test_residuals(self, legs):
        for name, residual in right_triangle_residuals(*right_triangle(*legs)).items():
            assert abs(residual) < 1e-10, name

    def test_right_angle_at_c(self):
        a, b, c = right_triangle(0.8, 1.3)
        assert abs(angle(c, a, b) - math.pi / 2) < 1e-14
