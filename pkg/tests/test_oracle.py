import math

import numpy as np
import pytest

from tetrageo.exceptions import VertexHit
from tetrageo.geometry.tetrahedron import TetraParams, build_surface, parse_edge_name
from tetrageo.geometry.unfolding import tiling_trace
from tetrageo.services.counting_service import canonical_types
from tetrageo.services.geodesic_service import GeodesicService, GeodesicType
from tetrageo.services.shooting_oracle import (
    ShootingOracle,
    group_seeds,
    identify_type,
    is_primitive,
    is_simple,
    shoot,
    shoot_word,
    start_face,
    word_key,
)

A1A2, A2A3, A3A4, A1A4, A1A3, A2A4 = (
    parse_edge_name(name) for name in ("A1A2", "A2A3", "A3A4", "A1A4", "A1A3", "A2A4")
)


# -----------------------------
# Shooting
# -----------------------------


class TestShoot:
    def test_start_face(self):
        assert start_face(A1A2) == 3
        assert start_face(A3A4) == 1

    def test_base_geodesic_closes(self, surface, base_path):
        theta = base_path.crossings[0].angle
        state = shoot(surface, A1A2, 0.5, theta, base_path.length + 0.1)
        assert not state.vertex_hit
        assert [c.edge for c in state.log[:4]] == [A2A3, A3A4, A1A4, A1A2]
        last = state.log[3]
        assert last.face == start_face(A1A2)
        assert abs(last.t - 0.5) < 1e-9
        assert abs(last.angle - theta) < 1e-9
        assert abs(last.length - base_path.length) < 1e-9

    def test_angles_match_builder(self, surface, path_12):
        first = path_12.crossings[0]
        state = shoot(
            surface, first.edge, first.t, first.angle, path_12.length - 1e-6, face=path_12.faces[0]
        )
        assert len(state.log) == len(path_12.crossings) - 1
        for shot, built in zip(state.log, path_12.crossings[1:]):
            assert shot.edge == built.edge
            assert abs(shot.t - built.t) < 1e-8
            assert abs(shot.angle - built.angle) < 1e-8

    def test_reverse_shot_retraces(self, surface, base_path):
        theta = base_path.crossings[0].angle
        back = shoot(surface, A1A2, 0.5, math.pi - theta, base_path.length + 0.1, face=2)
        assert [c.edge for c in back.log[:4]] == [A1A4, A3A4, A2A3, A1A2]

    def test_grazing_shot_hits_vertex(self, surface):
        state = shoot(surface, A1A2, 0.5, 1e-13, 10.0)
        assert state.vertex_hit
        with pytest.raises(VertexHit):
            shoot(surface, A1A2, 0.5, 1e-13, 10.0, strict=True)

    def test_stops_at_length(self, surface):
        # a chord is never longer than a side
        state = shoot(surface, A1A2, 0.5, 1.2, 2 * surface.a)
        assert state.log
        assert state.length <= 2 * surface.a
        assert state.log[-1].length == state.length

    def test_shoot_word_agrees(self, surface, base_path):
        theta = base_path.crossings[0].angle
        t, angle, length = shoot_word(surface, A1A2, 0.5, theta, [A2A3, A3A4, A1A4, A1A2])
        assert abs(t - 0.5) < 1e-9
        assert abs(angle - theta) < 1e-9
        assert abs(length - base_path.length) < 1e-9


# -----------------------------
# Words
# -----------------------------


class TestWords:
    def test_identify_base_type(self):
        assert identify_type([A2A3, A3A4, A1A4, A1A2]) == GeodesicType(0, 1)

    def test_identify_built_type(self, path_12):
        assert identify_type(path_12.edges()) == GeodesicType(1, 2)

    def test_identify_equal_pair(self):
        assert identify_type(tiling_trace(1, 1).edges()) == GeodesicType(1, 1)

    def test_identify_mirror_counts(self, path_12):
        # exchanging two vertices swaps the p and q pairs
        swap = {0: 1, 1: 0, 2: 2, 3: 3}
        mirrored = [tuple(sorted(swap[label] for label in edge)) for edge in path_12.edges()]
        assert identify_type(mirrored) == GeodesicType(1, 2)

    def test_unbalanced_word(self):
        assert identify_type([A1A2, A2A3, A1A3]) is None

    def test_key_ignores_rotation_and_reversal(self):
        word = [A2A3, A3A4, A1A4, A1A2]
        assert word_key(word) == word_key(word[2:] + word[:2])
        assert word_key(word) == word_key(word[::-1])

    def test_primitive(self):
        word = [A2A3, A3A4, A1A4, A1A2]
        assert is_primitive(word)
        assert not is_primitive(word * 2)

    def test_built_chords_are_simple(self, path_12):
        chords = [(face, chord[0], chord[1]) for face, chord in zip(path_12.faces, path_12.chords)]
        assert is_simple(chords)


# -----------------------------
# Search
# -----------------------------


class TestShootingOracle:
    def test_finds_the_base_geodesics(self, surface, base_path):
        oracle = ShootingOracle(surface, grid=48)
        found = oracle.find_closed(base_path.length + 0.5)
        assert len(found) == 3
        assert len({g.key for g in found}) == 3
        for geodesic in found:
            assert geodesic.type == GeodesicType(0, 1)
            assert abs(geodesic.length - base_path.length) < 1e-8
            assert geodesic.closure_defect < 1e-9
            assert np.isclose(geodesic.t0, 0.5, atol=1e-7)

    def test_nothing_below_the_systole(self, surface):
        assert ShootingOracle(surface, grid=4).find_closed(0.1) == []

    def test_every_word_keeps_its_seeds(self):
        base = (A2A3, A3A4, A1A4, A1A2)
        rotated = (A1A4, A1A2, A2A3, A3A4)
        other = (A1A3, A2A4, A1A3, A2A4, A1A2)
        rows = [
            [(1e-6 * k, A1A2, base, 0.5, 1.0 + k) for k in range(10)],
            [(1e-3, A3A4, rotated, 0.5, 2.0)],
            [(0.9, A1A2, other, 0.3, 0.4), (0.5, A1A2, other, 0.2, 0.1)],
        ]
        grouped = group_seeds(rows, 2)
        assert set(grouped) == {word_key(base), word_key(other)}
        assert [seed[0] for seed in grouped[word_key(base)]] == [0.0, 1e-6]
        assert [seed[0] for seed in grouped[word_key(other)]] == [0.5, 0.9]


@pytest.mark.slow
def test_agrees_with_builder_up_to_sum_four():
    surface = build_surface(TetraParams(math.pi / 4))
    service = GeodesicService(surface)
    built = {gtype: service.geodesic_length(gtype) for gtype in canonical_types(4)}
    l_max = max(built.values()) + 1e-6
    assert all(service.geodesic_length(gtype) > l_max for gtype in canonical_types(5)[len(built):])

    found = ShootingOracle(surface, grid=160, threads=4).find_closed(l_max)

    assert all(geodesic.type is not None for geodesic in found)
    assert {geodesic.type for geodesic in found} == set(built)
    for gtype in built:
        assert sum(1 for geodesic in found if geodesic.type == gtype) >= 3
    for geodesic in found:
        assert abs(geodesic.length - built[geodesic.type]) < 1e-8
        assert geodesic.closure_defect < 1e-9
