from collections import Counter
from fractions import Fraction

import pytest
import sympy

from oracles import brute_force_facets, f_vector_oracle
from polymerge.constructions import (
    CATALOG,
    build,
    cross_polytope,
    demicube,
    join_boundary,
    p18,
    p18_prime,
    p18_prime_facets,
    p9,
    p_d,
    segment_boundary,
    simplex,
    stack_facet,
)
from polymerge.errors import BadDimension, DegenerateInput, NotSimplicial
from polymerge.geometry import hull
from polymerge.lattice import FacetList, face_lattice, is_isomorphic, lattice_from_facets, vertex_figure
from polymerge.verify import is_i_simple, is_j_simplicial, simplicity_report, toric_g2_4d


def test_join_dimensions():
    sq = join_boundary(segment_boundary("a", "b"), segment_boundary("c", "d"))
    assert sq.dim == 2 and len(sq.facets) == 4
    octa = join_boundary(sq, segment_boundary("e", "f"))
    assert is_isomorphic(lattice_from_facets(octa), lattice_from_facets(cross_polytope(3))) is not None
    bip = join_boundary(simplex(2), segment_boundary("n", "s"))
    assert lattice_from_facets(bip).f_vector() == (5, 9, 6)


def test_join_rejects():
    with pytest.raises(NotSimplicial):
        join_boundary(p9(), segment_boundary("a", "b"))
    with pytest.raises(DegenerateInput):
        join_boundary(simplex(2), simplex(2))


def test_stack_facet():
    cp = cross_polytope(3)
    st = lattice_from_facets(stack_facet(cp, cp.facets[0], "z"))
    assert st.f_vector() == (7, 15, 10)
    with pytest.raises(NotSimplicial):
        stack_facet(p9(), {"u1", "u2", "u3", "up1", "up2", "up3"}, "z")


def test_p9_structure():
    L = lattice_from_facets(p9())
    assert L.f_vector() == f_vector_oracle(p9().facets, 4) == (9, 26, 26, 9)
    sizes = Counter(len(F) for F in L.facets())
    # two simplices, one octahedron, six bipyramids
    assert sizes == {4: 2, 6: 1, 5: 6}


@pytest.mark.parametrize("d, f", [
    (5, (12, 51, 96, 72, 17)),
    (6, (15, 84, 230, 320, 192, 33)),
    (7, (18, 125, 448, 900, 992, 496, 65)),
])
def test_p_d_fvectors(d, f):
    fl = p_d(d)
    assert lattice_from_facets(fl).f_vector() == f
    if d == 5:
        assert f_vector_oracle(fl.facets, d) == f


def test_p_d_small():
    assert is_isomorphic(lattice_from_facets(p_d(4)), lattice_from_facets(p9())) is not None
    with pytest.raises(BadDimension):
        p_d(3)


def test_demicube_hulls():
    expected = {4: (8, 24, 32, 16), 5: (16, 80, 160, 120, 26), 6: (32, 240, 640, 640, 252, 44)}
    for d, f in expected.items():
        L = lattice_from_facets(hull(demicube(d)))
        assert L.f_vector() == f
        assert is_j_simplicial(L, 3)
        assert is_i_simple(L, d - 3)
    # Q4 is the cross-polytope
    assert is_isomorphic(lattice_from_facets(hull(demicube(4))), lattice_from_facets(cross_polytope(4)))
    with pytest.raises(BadDimension):
        demicube(3)


def test_demicube4_brute_force():
    pts = demicube(4)
    oracle = brute_force_facets(dict(zip(pts.labels, pts.points)), 4)
    assert oracle == set(hull(pts).facets)


def test_demicube5_vertex_figure():
    L = lattice_from_facets(hull(demicube(5)))
    vf = vertex_figure(L, L.vertices[0])
    # the vertex figure of the 5-demicube is a rectified 4-simplex
    assert vf.f_vector() == (10, 30, 30, 10)


def _supporting(points, facet):
    """Exact supporting-hyperplane check through sympy."""
    labels = sorted(facet)
    base = sympy.Matrix([points[labels[0]]])
    M = sympy.Matrix.vstack(*[sympy.Matrix([points[x]]) - base for x in labels[1:]])
    ns = M.nullspace()
    if len(ns) != 1:
        return False
    n = ns[0]
    off = (base * n)[0]
    vals = {x: (sympy.Matrix([p]) * n)[0] - off for x, p in points.items()}
    on = {x for x, v in vals.items() if v == 0}
    side = {sympy.sign(v) for v in vals.values() if v != 0}
    return on == set(facet) and len(side) == 1


def test_p18_prime_hull():
    pts = p18_prime(Fraction(1, 20), 2)
    fl = hull(pts)
    listed = set(p18_prime_facets())
    assert set(fl.facets) == listed
    assert len(listed) == 19
    assert Counter(len(F) for F in listed) == {4: 11, 6: 4, 8: 4}
    points = {x: [sympy.Rational(c.numerator, c.denominator) for c in p] for x, p in zip(pts.labels, pts.points)}
    assert all(_supporting(points, F) for F in listed)


def test_p18_prime_facet_types():
    L = lattice_from_facets(hull(p18_prime()))
    by_size = Counter()
    hexbip = lattice_from_facets(join_boundary(
        _hexagon(), segment_boundary("n", "s")))
    oct_ = lattice_from_facets(cross_polytope(3))
    for F in L.facets():
        sub = face_lattice(L, F)
        if len(F) == 4:
            by_size["simplex"] += 1
        elif is_isomorphic(sub, oct_):
            by_size["cp"] += 1
        elif is_isomorphic(sub, hexbip):
            by_size["suspension"] += 1
    assert by_size == {"simplex": 11, "suspension": 4, "cp": 4}


def _hexagon():
    vs = [f"h{i}" for i in range(6)]
    return FacetList(2, vs, [{vs[i], vs[(i + 1) % 6]} for i in range(6)])


def test_p18():
    L = lattice_from_facets(p18())
    assert L.f_vector() == (18, 64, 64, 18)
    assert toric_g2_4d(L) == 2
    rep = simplicity_report(L)
    assert rep.max_j_simplicial >= 2 and rep.max_i_simple >= 2
    assert "wp" in L.vertices
    assert frozenset({"v1", "v2", "v3", "v4"}) not in L


def test_p18_rejects_large_eps():
    with pytest.raises(DegenerateInput):
        p18(Fraction(2), 2)


def test_catalog_builds():
    for name in CATALOG:
        fl = build(name)
        assert fl.validate() is not None
    with pytest.raises(KeyError):
        build("nope")
