"""Independent reference computations used only by the tests.

Nothing here imports the lattice internals: faces come from plain set
intersections, isomorphism from networkx, hulls from brute force.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx
import sympy


def faces_by_intersection(facets):
    """All faces (as frozensets) by closing the facets under intersection."""
    facets = [frozenset(f) for f in facets]
    top = frozenset().union(*facets)
    faces = {top, *facets}
    frontier = set(facets)
    while frontier:
        new = set()
        for a in frontier:
            for F in facets:
                m = a & F
                if m not in faces:
                    new.add(m)
        faces |= new
        frontier = new
    faces.add(frozenset())
    return faces


def ranks_by_longest_chain(faces):
    order = sorted(faces, key=len)
    rank = {}
    for f in order:
        below = [rank[g] for g in rank if g < f]
        rank[f] = max(below, default=-2) + 1
    return rank


def f_vector_oracle(facets, dim):
    faces = faces_by_intersection(facets)
    rank = ranks_by_longest_chain(faces)
    return tuple(sum(1 for r in rank.values() if r == k) for k in range(dim))


def incidence_graph(facets):
    G = nx.Graph()
    for k, F in enumerate(facets):
        G.add_node(("F", k), side=1)
        for v in F:
            G.add_node(("v", v), side=0)
            G.add_edge(("F", k), ("v", v))
    return G


def nx_isomorphic(facets_a, facets_b) -> bool:
    return nx.is_isomorphic(
        incidence_graph(facets_a),
        incidence_graph(facets_b),
        node_match=lambda a, b: a["side"] == b["side"],
    )


def brute_force_facets(points: dict, dim: int):
    """Facets of conv(points) for full-dimensional rational points.

    Tries every dim-subset, keeps the affinely independent ones whose
    hyperplane leaves all points on one side, then groups by hyperplane.
    """
    labels = sorted(points)
    found = set()
    for sub in itertools.combinations(labels, dim):
        base = sympy.Matrix([list(points[sub[0]])])
        rows = [sympy.Matrix([list(points[s])]) - base for s in sub[1:]]
        if not rows:
            continue
        M = sympy.Matrix.vstack(*rows)
        ns = M.nullspace()
        if len(ns) != 1:
            continue
        n = ns[0]
        off = (base * n)[0]
        vals = {x: (sympy.Matrix([list(points[x])]) * n)[0] - off for x in labels}
        if all(v >= 0 for v in vals.values()) or all(v <= 0 for v in vals.values()):
            found.add(frozenset(x for x, v in vals.items() if v == 0))
    return found


def associated_heights_sympy(d: int, alpha):
    """Heights c_1..c_d by solving each facet hyperplane symbolically.

    Upper simplex G: centred standard simplex of dimension d-1 placed at
    height 1; lower copy alpha*G* at height -1, where the polar G* has
    vertices -d*mu_j.  For
    |I| = k the facet takes the vertices of G indexed by I and the negated
    vertices of the complement.
    """
    alpha = sympy.Rational(Fraction(alpha).numerator, Fraction(alpha).denominator)
    xs = sympy.symbols(f"x0:{d}")
    t = sympy.Symbol("t")

    def mu(k):
        return [sympy.Integer(1 if j == k else 0) - sympy.Rational(1, d) for j in range(d)]

    out = []
    for k in range(1, d + 1):
        I = range(k)
        pts = [mu(i) + [1] for i in I] + [[-alpha * d * c for c in mu(j)] + [-1] for j in range(k, d)]
        coeffs = sympy.symbols(f"n0:{d + 1}")
        eqs = [sum(c * p for c, p in zip(coeffs, q)) - 1 for q in pts]
        # restrict to the hyperplane sum(x) = 0 of the chart by adding the all-ones direction
        eqs.append(sum(coeffs[:d]))
        sol = sympy.solve(eqs, coeffs, dict=True)
        assert len(sol) == 1
        n = sol[0]
        out.append(sympy.solve(sympy.Eq(n[coeffs[d]] * t, 1), t)[0])
    return out
