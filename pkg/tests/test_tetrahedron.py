import math

import numpy as np
import pytest

from conftest import ALPHA_GRID
from tetrageo.exceptions import DomainError, NonAdjacentFaces, OutsideChart
from tetrageo.geometry.hypmath import HPoint, angle, hdist, minkowski_dot, origin, reflect_across
from tetrageo.geometry.tetrahedron import (
    EDGES,
    FACES,
    TetraParams,
    chart_to_klein,
    circumradius,
    distance_bounds,
    edge_name,
    edge_pair_index,
    face_labels,
    face_of_edges,
    klein_distance,
    klein_embedding,
    opposite_edge,
    parse_edge_name,
)


# -----------------------------
# Labels
# -----------------------------


class TestLabels:
    def test_edge_names(self):
        assert [edge_name(edge) for edge in EDGES] == [
            "A1A2", "A1A3", "A1A4", "A2A3", "A2A4", "A3A4",
        ]

    @pytest.mark.parametrize("name", ["A1A2", "a3a1", " A4A2 "])
    def test_parse_edge_name(self, name):
        assert edge_name(parse_edge_name(name)) in {"A1A2", "A1A3", "A2A4"}

    def test_parse_rejects_loop(self):
        with pytest.raises(ValueError):
            parse_edge_name("A1A1")

    def test_opposite_pairs(self):
        assert opposite_edge((0, 1)) == (2, 3)
        assert opposite_edge((0, 2)) == (1, 3)
        assert opposite_edge((1, 2)) == (0, 3)
        for edge in EDGES:
            assert edge_pair_index(edge) == edge_pair_index(opposite_edge(edge))
        assert sorted({edge_pair_index(edge) for edge in EDGES}) == [0, 1, 2]

    def test_face_of_edges(self):
        assert face_of_edges((0, 1), (1, 2)) == 3
        assert face_labels(3) == (0, 1, 2)

    def test_opposite_edges_share_no_face(self):
        with pytest.raises(NonAdjacentFaces):
            face_of_edges((0, 1), (2, 3))

    def test_alpha_validated(self):
        with pytest.raises(DomainError):
            TetraParams(math.pi / 3)


# -----------------------------
# Surface
# -----------------------------


class TestSurface:
    """Charts, edge frames and gluing transitions at alpha = pi/6."""

    def test_every_edge_glues_two_faces(self, surface):
        for edge in EDGES:
            f, g = surface.faces_of_edge(edge)
            assert f != g
            assert surface.other_face(edge, f) == g

    def test_chart_is_regular(self, surface):
        chart = surface.chart(0)
        for i, j in ((0, 1), (1, 2), (0, 2)):
            assert abs(hdist(chart.vertices[i], chart.vertices[j]) - surface.a) < 1e-12
        corner = angle(chart.vertices[0], chart.vertices[1], chart.vertices[2])
        assert abs(corner - surface.alpha) < 1e-12

    def test_edge_frame_endpoints(self, surface):
        for face in FACES:
            chart = surface.chart(face)
            for edge in chart.local_edges():
                assert np.allclose(surface.point_on_edge(face, edge, 0.0), chart.vertex(edge[0]).coords)
                assert np.allclose(
                    surface.point_on_edge(face, edge, 1.0), chart.vertex(edge[1]).coords, atol=1e-12
                )

    def test_edge_param_inverts_point_on_edge(self, surface):
        point = surface.point_on_edge(2, (0, 1), 0.3)
        assert abs(surface.edge_param(2, (0, 1), point) - 0.3) < 1e-13

    def test_point_on_edge_broadcasts(self, surface):
        points = surface.point_on_edge(0, (1, 2), np.array([0.25, 0.5, 0.75]))
        assert points.shape == (3, 3)

    def test_inward_normals(self, surface):
        for face in FACES:
            chart = surface.chart(face)
            for edge in chart.local_edges():
                assert minkowski_dot(surface.inward_normal(face, edge), origin().coords) > 0

    @pytest.mark.parametrize("face,other", [(f, g) for f in FACES for g in FACES if f != g])
    def test_transition_glues_shared_edge(self, surface, face, other):
        move = surface.transition(face, other)
        move.check()
        here, there = surface.chart(face), surface.chart(other)
        for label in surface.shared_edge(face, other):
            assert np.allclose(
                move.apply(there.vertex(label)).coords, here.vertex(label).coords, atol=1e-12
            )
        (third,) = set(there.labels) - set(surface.shared_edge(face, other))
        moved = move.apply(there.vertex(third)).coords
        assert minkowski_dot(surface.inward_normal(face, surface.shared_edge(face, other)), moved) < 0

    def test_transitions_are_mutually_inverse(self, surface):
        product = surface.transition(0, 1).compose(surface.transition(1, 0))
        assert np.allclose(product.matrix, np.eye(3), atol=1e-12)

    def test_same_face_is_not_adjacent(self, surface):
        with pytest.raises(NonAdjacentFaces):
            surface.transition(2, 2)


# -----------------------------
# Bounds
# -----------------------------


class TestDistanceBounds:
    @pytest.mark.parametrize("alpha", ALPHA_GRID)
    def test_trig_bound_product_form(self, alpha):
        bounds = distance_bounds(TetraParams(alpha))
        product = math.sqrt(
            (2 * math.cos(alpha) - 1) * math.cos(1.5 * alpha) ** 2 * math.cos(alpha / 2) ** 2
        ) / math.cos(alpha)
        assert abs(math.tanh(bounds.d_trig) - product) < 1e-12

    def test_bounds_vanish_towards_flat(self):
        bounds = distance_bounds(TetraParams(math.pi / 3 - 1e-6))
        assert bounds.d_trig < 1e-3 and bounds.d_log < 1e-3

    def test_values_at_sixth_pi(self):
        bounds = distance_bounds(TetraParams(math.pi / 6))
        assert abs(bounds.d_trig - 0.819) < 1e-3
        assert abs(math.tanh(bounds.a4h1) - math.cos(math.pi / 6) * math.sqrt(math.sqrt(3) - 1)) < 1e-14


# -----------------------------
# Klein ball
# -----------------------------


class TestKleinEmbedding:
    @pytest.mark.parametrize("alpha", ALPHA_GRID)
    def test_circumradius_closed_form(self, alpha):
        c = math.cosh(distance_bounds(TetraParams(alpha)).a)
        assert abs(circumradius(alpha) ** 2 - (c - 1) / (c + 1 / 3)) < 1e-12

    def test_vertices_at_edge_length(self):
        embedding = klein_embedding(TetraParams(math.pi / 5))
        for i in range(4):
            for j in range(i + 1, 4):
                distance = klein_distance(embedding.vertices[i], embedding.vertices[j])
                assert abs(distance - embedding.edge_length) < 1e-10

    def test_chart_vertices_land_on_embedded_vertices(self, surface):
        embedding = klein_embedding(surface.params)
        chart = surface.chart(1)
        for label in chart.labels:
            mapped = chart_to_klein(surface, 1, chart.vertex(label), embedding=embedding)
            assert np.allclose(mapped, embedding.vertices[label], atol=1e-12)

    def test_chart_map_is_isometric(self, surface):
        embedding = klein_embedding(surface.params)
        chart = surface.chart(0)
        centre = chart_to_klein(surface, 0, origin(), embedding=embedding)
        corner = chart_to_klein(surface, 0, chart.vertices[0], embedding=embedding)
        assert abs(klein_distance(centre, corner) - hdist(origin(), chart.vertices[0])) < 1e-10

    def test_point_outside_face(self, surface):
        chart = surface.chart(0)
        mirror = reflect_across(chart.vertices[0], chart.vertices[1])
        outside: HPoint = mirror.apply(origin())
        with pytest.raises(OutsideChart):
            chart_to_klein(surface, 0, outside)
