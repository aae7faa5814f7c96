import math
from fractions import Fraction

import numpy as np
import pytest

from tetrageo.enums import StartFamily
from tetrageo.exceptions import (
    DomainError,
    NonAdjacentFaces,
    NonCanonicalType,
    NotCoprime,
    StructureViolation,
    VertexHit,
)
from tetrageo.geometry.hypmath import hdist
from tetrageo.geometry.tetrahedron import edge_name, opposite_edge
from tetrageo.geometry.unfolding import (
    check_canonical,
    develop,
    euclid_length,
    midpoint_family,
    midpoint_sequence,
    pair_counts,
    tiling_label,
    tiling_trace,
)
from tetrageo.services.counting_service import canonical_types

COPRIME_TYPES = [(t.p, t.q) for t in canonical_types(50)]


def _trace(seq):
    return [(edge_name(c.edge), c.t) for c in seq.crossings]


F = Fraction


# -----------------------------
# Tiling
# -----------------------------


class TestTilingLabels:
    def test_row_zero(self):
        assert [tiling_label(0, F(n)) for n in range(4)] == [0, 1, 0, 1]

    def test_row_one(self):
        assert [tiling_label(1, F(2 * n + 1, 2)) for n in range(4)] == [2, 3, 2, 3]

    def test_row_two_is_shifted(self):
        assert tiling_label(2, F(0)) == 1

    def test_not_a_vertex(self):
        with pytest.raises(DomainError):
            tiling_label(0, F(1, 2))


class TestTilingTrace:
    """Exact traces checked by hand."""

    def test_base_type(self):
        seq = tiling_trace(0, 1)
        assert _trace(seq) == [
            ("A1A2", F(1, 2)),
            ("A2A3", F(1, 2)),
            ("A3A4", F(1, 2)),
            ("A1A4", F(1, 2)),
        ]

    def test_type_one_two_rising(self):
        seq = tiling_trace(1, 2, F(1, 2), StartFamily.RISING)
        assert _trace(seq) == [
            ("A1A3", F(1, 2)),
            ("A2A3", F(5, 6)),
            ("A3A4", F(1, 4)),
            ("A1A4", F(1, 2)),
            ("A1A2", F(3, 4)),
            ("A2A3", F(1, 6)),
            ("A2A4", F(1, 2)),
            ("A1A4", F(5, 6)),
            ("A3A4", F(3, 4)),
            ("A2A3", F(1, 2)),
            ("A1A2", F(1, 4)),
            ("A1A4", F(1, 6)),
        ]
        assert seq.pair_counts() == (2, 1, 3)

    def test_type_one_three(self):
        seq = tiling_trace(1, 3)
        assert _trace(seq) == [
            ("A1A2", F(1, 2)),
            ("A2A3", F(3, 8)),
            ("A3A4", F(5, 6)),
            ("A1A4", F(7, 8)),
            ("A2A4", F(1, 2)),
            ("A2A3", F(1, 8)),
            ("A1A2", F(5, 6)),
            ("A1A4", F(5, 8)),
            ("A3A4", F(1, 2)),
            ("A2A3", F(5, 8)),
            ("A1A2", F(1, 6)),
            ("A1A4", F(1, 8)),
            ("A1A3", F(1, 2)),
            ("A2A3", F(7, 8)),
            ("A3A4", F(1, 6)),
            ("A1A4", F(3, 8)),
        ]

    def test_equal_pair(self):
        seq = tiling_trace(1, 1)
        assert _trace(seq) == [
            ("A1A2", F(1, 2)),
            ("A2A3", F(1, 4)),
            ("A2A4", F(1, 2)),
            ("A1A4", F(3, 4)),
            ("A3A4", F(1, 2)),
            ("A2A3", F(3, 4)),
            ("A1A3", F(1, 2)),
            ("A1A4", F(1, 4)),
        ]
        assert seq.pair_counts() == (1, 1, 2)

    def test_even_q_midpoint_hits_vertex(self):
        with pytest.raises(VertexHit):
            tiling_trace(1, 2)

    @pytest.mark.parametrize("p,q", COPRIME_TYPES)
    def test_horizontal_vertex_parity(self, p, q):
        if q % 2 == 0:
            with pytest.raises(VertexHit):
                tiling_trace(p, q)
        else:
            assert len(tiling_trace(p, q)) == 4 * (p + q)

    @pytest.mark.parametrize("p,q", COPRIME_TYPES)
    def test_counts_per_pair(self, p, q):
        seq = tiling_trace(p, q, F(1, 101))
        assert len(seq) == 4 * (p + q)
        assert seq.pair_counts() == (q, p, p + q)

    def test_crossings_follow_faces(self):
        seq = tiling_trace(2, 5, F(2, 7))
        faces = seq.faces()
        assert all(a != b for a, b in zip(faces, faces[1:] + faces[:1]))

    def test_offset_must_be_interior(self):
        with pytest.raises(DomainError):
            tiling_trace(1, 3, F(0))

    def test_family_parallel_to_line(self):
        with pytest.raises(DomainError):
            tiling_trace(0, 1, F(1, 2), StartFamily.RISING)


class TestCanonicalTypes:
    def test_not_coprime(self):
        with pytest.raises(NotCoprime, match="not coprime"):
            check_canonical(2, 4)

    def test_wrong_order(self):
        with pytest.raises(NonCanonicalType):
            check_canonical(3, 2)

    def test_base_type_is_canonical(self):
        check_canonical(0, 1)

    def test_equal_pair_is_canonical(self):
        check_canonical(1, 1)
        with pytest.raises(NotCoprime):
            check_canonical(2, 2)

    def test_unbalanced_pairs(self):
        with pytest.raises(StructureViolation):
            pair_counts([(0, 1), (1, 2), (0, 1)])


class TestMidpointSequence:
    @pytest.mark.parametrize("p,q", COPRIME_TYPES)
    def test_opposite_midpoints(self, p, q):
        seq, half = midpoint_sequence(p, q)
        assert half == 2 * (p + q)
        assert seq.crossings[0].t == F(1, 2) and seq.crossings[half].t == F(1, 2)
        assert seq.crossings[half].edge == opposite_edge(seq.crossings[0].edge)

    def test_family_choice(self):
        assert midpoint_family(1, 3) is StartFamily.HORIZONTAL
        assert midpoint_family(1, 2) is StartFamily.RISING
        assert midpoint_family(1, 1) is StartFamily.HORIZONTAL

    @pytest.mark.parametrize("p,q", [(0, 1), (1, 2), (2, 3), (3, 7)])
    def test_euclid_length_is_the_period(self, p, q):
        seq = tiling_trace(p, q, F(1, 101))
        assert seq.crossings[0].point.euclid() == (1 / 101, 0.0)
        period = math.hypot(q + 2 * p, q * math.sqrt(3.0))
        assert abs(euclid_length(p, q) - period) < 1e-12

    def test_known_lengths(self):
        assert euclid_length(0, 1) == 2.0
        assert abs(euclid_length(1, 2) - 2 * math.sqrt(7)) < 1e-12
        assert abs(euclid_length(1, 1) - 2 * math.sqrt(3)) < 1e-12


# -----------------------------
# Development
# -----------------------------


class TestDevelopment:
    def test_shared_edges_match(self, surface):
        seq, half = midpoint_sequence(1, 2)
        development = develop(surface, seq.faces()[:half])
        for copy, edge in enumerate(development.shared_edges):
            for label in edge:
                here = development.vertex(copy, label).coords
                there = development.vertex(copy + 1, label).coords
                assert np.allclose(here, there, atol=1e-10)

    def test_faces_do_not_overlap_their_neighbour(self, surface):
        seq, half = midpoint_sequence(1, 3)
        development = develop(surface, seq.faces()[:half])
        for copy in range(len(development.faces) - 1):
            (mine,) = set(surface.chart(development.faces[copy]).labels) - set(
                development.shared_edges[copy]
            )
            (theirs,) = set(surface.chart(development.faces[copy + 1]).labels) - set(
                development.shared_edges[copy]
            )
            distance = hdist(development.vertex(copy, mine), development.vertex(copy + 1, theirs))
            assert distance > 1e-3

    def test_boundary_angles_are_multiples(self, surface):
        seq, half = midpoint_sequence(1, 2)
        development = develop(surface, seq.faces()[:half])
        for corner in development.boundary_angles():
            assert corner.multiple == corner.copies
            assert 1 <= corner.multiple <= 4
            assert abs(corner.angle - corner.multiple * surface.alpha) < 1e-9

    def test_repeated_face(self, surface):
        with pytest.raises(NonAdjacentFaces):
            develop(surface, [1, 1])

    def test_empty(self, surface):
        with pytest.raises(DomainError):
            develop(surface, [])
