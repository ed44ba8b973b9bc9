import random

import pytest

from thetaforge.errors import PrecisionExhausted
from thetaforge.padic import PrecisionInt
from thetaforge.tree import (
    DirectedEdge,
    Vertex,
    ball,
    distance,
    geodesic_path,
    neighbors,
    normal_form,
    normal_form_exact,
    origin,
    sphere,
    to_dot,
)
from thetaforge.util import val_p


def mat(p, k, entries):
    return [[PrecisionInt(p, k, entries[0]), PrecisionInt(p, k, entries[1])],
            [PrecisionInt(p, k, entries[2]), PrecisionInt(p, k, entries[3])]]


def all_vertices_at_distance(p, r):
    """Oracle: enumerate normal forms (a, b, u) directly; distance to the
    origin of a normalized vertex is a + b."""
    out = []
    for a in range(r + 1):
        b = r - a
        for u in range(p**a):
            vu = val_p(u, p)
            floor = min(a, b) if vu is None else min(a, b, vu)
            if floor == 0:
                out.append(Vertex(p, a, b, u))
    return out


class TestNormalForm:
    def test_identity_and_scalar(self):
        p, k = 3, 6
        assert normal_form(mat(p, k, (1, 0, 0, 1))) == origin(p)
        assert normal_form(mat(p, k, (3, 0, 0, 3))) == origin(p)

    def test_column_swap_derived(self):
        p, k = 3, 6
        assert normal_form(mat(p, k, (0, 1, p, 0))) == Vertex(p, 0, 1, 0)

    def test_idempotent(self):
        p, k = 5, 8
        v = Vertex(p, 2, 0, 7)
        m00, m01, m10, m11 = v.basis_matrix()
        assert normal_form(mat(p, k, (m00, m01, m10, m11))) == v

    def test_unimodular_invariance(self):
        rng = random.Random(11)
        p, k = 3, 9
        for _ in range(150):
            a = rng.randrange(3)
            b = rng.randrange(3)
            u = rng.randrange(p**a)
            try:
                v = Vertex(p, a, b, u)
            except ValueError:
                continue
            e = [list(v.basis_matrix()[:2]), list(v.basis_matrix()[2:])]
            for _ in range(5):
                x = rng.randrange(-4, 5)
                if rng.random() < 0.5:
                    e[0][0] += x * e[0][1]
                    e[1][0] += x * e[1][1]
                else:
                    e[0][1] += x * e[0][0]
                    e[1][1] += x * e[1][0]
            if rng.random() < 0.5:  # swap columns (determinant sign flips)
                e[0].reverse()
                e[1].reverse()
            got = normal_form(mat(p, k, (e[0][0], e[0][1], e[1][0], e[1][1])))
            assert got == v

    def test_precision_exhausted(self):
        with pytest.raises(PrecisionExhausted):
            normal_form(mat(3, 2, (9, 0, 0, 9)))

    def test_vertex_validation(self):
        with pytest.raises(ValueError):
            Vertex(3, 1, 1, 0)      # not scalar-normalized
        with pytest.raises(ValueError):
            Vertex(3, 1, 0, 5)      # u out of range


class TestNeighbors:
    def test_p2_exhaustive_derived(self):
        got = set(neighbors(origin(2)))
        assert got == {Vertex(2, 1, 0, 0), Vertex(2, 1, 0, 1), Vertex(2, 0, 1, 0)}

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_count_and_distance(self, p):
        v0 = origin(p)
        nb = neighbors(v0)
        assert len(nb) == p + 1
        assert len(set(nb)) == p + 1
        assert all(distance(v0, w) == 1 for w in nb)

    def test_no_loops(self):
        for v in sphere(origin(3), 2):
            assert v not in neighbors(v)

    def test_representative_independent(self):
        # neighbors(normal_form(M)) do not depend on the representative M
        p, k = 3, 8
        v = Vertex(p, 1, 0, 2)
        twisted = mat(p, k, (5, 2, 1, 1))  # column 0 replaced by col0 + col1
        assert normal_form(twisted) == v
        assert set(neighbors(normal_form(twisted))) == set(neighbors(v))

    def test_symmetry(self):
        v = Vertex(3, 2, 0, 5)
        for w in neighbors(v):
            assert v in neighbors(w)


class TestDistance:
    def test_trivial_and_derived(self):
        v0 = origin(3)
        assert distance(v0, v0) == 0
        assert distance(v0, Vertex(3, 0, 2, 0)) == 2

    def test_symmetric(self):
        rng = random.Random(5)
        verts = sphere(origin(3), 3) + sphere(origin(3), 1)
        for _ in range(50):
            v, w = rng.choice(verts), rng.choice(verts)
            assert distance(v, w) == distance(w, v)

    def test_tree_axiom_unique_descending_neighbor(self):
        rng = random.Random(6)
        verts = [origin(3)] + sphere(origin(3), 2) + sphere(origin(3), 3)
        for _ in range(40):
            v, w = rng.choice(verts), rng.choice(verts)
            if v == w:
                continue
            d = distance(v, w)
            down = [x for x in neighbors(v) if distance(x, w) == d - 1]
            assert len(down) == 1

    def test_triangle_inequality(self):
        verts = sphere(origin(5), 2)
        rng = random.Random(9)
        for _ in range(30):
            a, b, c = rng.choice(verts), rng.choice(verts), rng.choice(verts)
            assert distance(a, c) <= distance(a, b) + distance(b, c)


class TestSphere:
    @pytest.mark.parametrize("p,r,count", [(3, 1, 4), (3, 3, 36), (2, 2, 6)])
    def test_counts(self, p, r, count):
        assert len(sphere(origin(p), r)) == count

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_matches_exhaustive_enumeration(self, p):
        for r in (1, 2, 3):
            assert set(sphere(origin(p), r)) == set(all_vertices_at_distance(p, r))

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_formula_to_depth_six(self, p):
        for r in range(1, 7):
            assert len(sphere(origin(p), r)) == (p + 1) * p ** (r - 1)

    def test_off_center(self):
        c = Vertex(3, 2, 0, 1)
        assert len(sphere(c, 2)) == 12
        assert all(distance(c, w) == 2 for w in sphere(c, 2))


class TestGeodesic:
    def test_trivial(self):
        v = origin(3)
        assert geodesic_path(v, v) == [v]

    def test_derived_straight_line(self):
        path = geodesic_path(origin(3), Vertex(3, 0, 2, 0))
        assert path == [origin(3), Vertex(3, 0, 1, 0), Vertex(3, 0, 2, 0)]

    def test_length_and_adjacency(self):
        rng = random.Random(2)
        verts = sphere(origin(3), 3)
        for _ in range(15):
            v, w = rng.choice(verts), rng.choice(verts)
            path = geodesic_path(v, w)
            assert len(path) == distance(v, w) + 1
            for x, y in zip(path, path[1:]):
                assert distance(x, y) == 1


class TestEdgesAndBall:
    def test_edge_validation(self):
        with pytest.raises(ValueError):
            DirectedEdge(origin(3), Vertex(3, 0, 2, 0))

    def test_edge_reversal(self):
        e = DirectedEdge(origin(3), Vertex(3, 1, 0, 0))
        assert e.reversal().source == e.target

    def test_ball_structure(self):
        b = ball(origin(3), 3)
        assert [len(s) for s in b.spheres] == [1, 4, 12, 36]
        assert len(list(b.directed_edges())) == 2 * (4 + 12 + 36)

    def test_dot_output(self):
        text = to_dot(origin(2), 1)
        assert text.startswith("graph")
        assert text.count("--") == 3

    def test_exact_normal_form_negative_entries(self):
        # span{(1,0), (-1,3)} = span{(1,0), (0,3)}
        v = normal_form_exact(3, 1, -1, 0, 3)
        assert v == Vertex(3, 0, 1, 0)

    def test_vertex_json(self):
        v = Vertex(5, 2, 0, 13)
        assert Vertex.from_json(5, v.to_json()) == v
