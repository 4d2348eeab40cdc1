"""Explicit polytopes: simplices, cross-polytopes, joins, demicubes, P9, P18, P^d."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadDimension, DegenerateInput, NotSimplicial
from .geometry import RationalPolytope, hull
from .lattice import FacetList

__all__ = [
    "NamedConstruction",
    "simplex",
    "cross_polytope",
    "segment_boundary",
    "join_boundary",
    "p9",
    "demicube",
    "p18_prime",
    "p18_prime_facets",
    "p18",
    "p_d",
    "build",
    "CATALOG",
]


def simplex(d: int) -> FacetList:
    if d < 1:
        raise BadDimension(f"simplex needs d >= 1, got {d}")
    verts = [f"u{i}" for i in range(1, d + 2)]
    return FacetList(d, verts, [frozenset(verts) - {v} for v in verts]).canonical()


def cross_polytope(d: int) -> FacetList:
    """Facets are the transversals of the antipodal pairs {u_i, up_i}."""
    if d < 1:
        raise BadDimension(f"cross_polytope needs d >= 1, got {d}")
    pairs = [(f"u{i}", f"up{i}") for i in range(1, d + 1)]
    verts = [x for p in pairs for x in p]
    facets = [frozenset(choice) for choice in itertools.product(*pairs)]
    return FacetList(d, verts, facets).canonical()


def segment_boundary(a: str, b: str) -> FacetList:
    """The 1-polytope with vertices a, b (its boundary is the 0-sphere)."""
    return FacetList(1, [a, b], [frozenset([a]), frozenset([b])])


def join_boundary(A: FacetList, B: FacetList) -> FacetList:
    """Boundary of the free sum: facets are unions of a facet of A and one of B.

    For an m-polytope A and an n-polytope B the result is an (m+n)-polytope.
    """
    for X in (A, B):
        if any(len(f) != X.dim for f in X.facets):
            raise NotSimplicial("join_boundary needs simplicial factors")
    if set(A.vertices) & set(B.vertices):
        raise DegenerateInput("factors must have disjoint vertex labels")
    facets = [f | g for f in A.facets for g in B.facets]
    return FacetList(A.dim + B.dim, list(A.vertices) + list(B.vertices), facets).canonical()


def stack_facet(fl: FacetList, facet, apex: str) -> FacetList:
    """Glue a pyramid with the given apex onto a simplex facet."""
    facet = frozenset(facet)
    if facet not in set(fl.facets) or len(facet) != fl.dim:
        raise NotSimplicial(f"{sorted(facet)} is not a simplex facet")
    facets = [F for F in fl.facets if F != facet]
    facets += [facet - {x} | {apex} for x in facet]
    return FacetList(fl.dim, list(fl.vertices) + [apex], facets).canonical()


def p9() -> FacetList:
    """The 2-simplicial 2-simple 4-polytope with nine vertices.

    u'_i is labelled ``up{i}``; ``up4`` plays the role of v_1.
    """
    U = ["u1", "u2", "u3"]
    Up = ["up1", "up2", "up3"]
    facets = [set(U + Up), {"up1", "up2", "up3", "up5"}, {"v2", "u1", "u2", "u3"}]
    for i in range(3):
        facets.append({U[i], "up5", "up4"} | (set(Up) - {Up[i]}))
        facets.append({"v2", Up[i], "up4"} | (set(U) - {U[i]}))
    verts = ["v2"] + U + Up + ["up4", "up5"]
    return FacetList(4, verts, facets).canonical()


def demicube(d: int) -> RationalPolytope:
    """Odd-parity vertices of the unit d-cube."""
    if not 4 <= d <= 6:
        raise BadDimension(f"demicube supports 4 <= d <= 6, got {d}")
    pts = [p for p in itertools.product((0, 1), repeat=d) if sum(p) % 2 == 1]
    labels = ["q" + "".join(map(str, p)) for p in pts]
    return RationalPolytope(d, pts, labels)


def _u_label(i, j, k):
    i, j = sorted((i, j))
    return f"u{i}{j}_{k}"


def p18_prime(eps=Fraction(1, 20), h=Fraction(2)) -> RationalPolytope:
    eps, h = Fraction(eps), Fraction(h)
    if eps <= 0 or h <= 0:
        raise DegenerateInput("eps and h must be positive")
    v = {
        1: (0, 0, 0, 0),
        2: (2, 2, 0, 0),
        3: (2, 0, 2, 0),
        4: (0, 2, 2, 0),
    }
    v = {k: tuple(Fraction(x) for x in p) for k, p in v.items()}
    u = (Fraction(1), Fraction(1), Fraction(1), h)
    pts = {"w": (Fraction(1), Fraction(1), Fraction(1), 3 * h * eps / (2 + 3 * eps))}
    for k in range(1, 5):
        pts[f"v{k}"] = v[k]
    for i, j in itertools.combinations(range(1, 5), 2):
        for k in range(1, 5):
            if k in (i, j):
                continue
            pts[_u_label(i, j, k)] = tuple(
                (v[i][c] + v[j][c]) / 2 + eps * (u[c] + v[k][c] - v[i][c] - v[j][c])
                for c in range(4)
            )
    labels = sorted(pts)
    return RationalPolytope(4, [pts[x] for x in labels], labels)


def p18_prime_facets() -> list:
    """The 19 facets of conv(p18_prime), written out by hand."""
    out = []
    idx = range(1, 5)
    for i, j in itertools.combinations(idx, 2):
        k, m = [x for x in idx if x not in (i, j)]
        out.append({f"v{i}", f"v{j}", _u_label(i, j, k), _u_label(i, j, m)})
    for i, j, k in itertools.combinations(idx, 3):
        out.append({_u_label(i, j, k), _u_label(i, k, j), _u_label(j, k, i), "w"})
    out.append({"v1", "v2", "v3", "v4"})
    for i in idx:
        j, k, m = [x for x in idx if x != i]
        out.append({f"v{i}", "w", _u_label(i, j, k), _u_label(i, j, m), _u_label(i, k, j),
                    _u_label(i, k, m), _u_label(i, m, j), _u_label(i, m, k)})
    for i, j, k in itertools.combinations(idx, 3):
        out.append({f"v{i}", f"v{j}", f"v{k}", _u_label(i, j, k), _u_label(i, k, j),
                    _u_label(j, k, i)})
    return [frozenset(f) for f in out]


def p18(eps=Fraction(1, 20), h=Fraction(2)) -> FacetList:
    """Hull of p18_prime followed by the w' surgery on the facet list."""
    pts = p18_prime(eps, h)
    fl = hull(pts)
    if len(fl.vertices) < 17:
        raise DegenerateInput(f"hull found only {len(fl.vertices)} vertices; eps too large")
    G = frozenset({"v1", "v2", "v3", "v4"})
    if G not in fl.facets:
        raise DegenerateInput("tetrahedron [v1,v2,v3,v4] is not a facet of the hull")
    facets = []
    for F in fl.facets:
        if F == G:
            continue
        if len(F) == 6 and len(F & G) == 3:
            F = F | {"wp"}
        facets.append(F)
    return FacetList(4, list(fl.vertices) + ["wp"], facets).canonical()


def p_d(d: int) -> FacetList:
    """Facet catalog of P^d: families F_0 .. F_{d-1}.

    Labels: u1..u_{d-1}, up1..up_{d-1}, v0 (= u'_{d+1}), v1 (= u'_d) and
    v2..v_{d-2}.
    """
    if d < 4:
        raise BadDimension(f"p_d needs d >= 4, got {d}")
    n = d - 1
    U = [f"u{i}" for i in range(1, d)]
    Up = [f"up{i}" for i in range(1, d)]
    vs = [f"v{k}" for k in range(0, d - 1)]

    def vk(k):
        return vs[min(k, d - 2)]

    facets = [frozenset(Up + ["v0"]), frozenset(U + Up)]
    for k in range(1, d):
        for I in itertools.combinations(range(n), k):
            plus = {U[i] for i in I}
            minus = {Up[j] for j in range(n) if j not in I}
            facets.append(frozenset(plus | minus | {vk(k - 1), vk(k)}))
    return FacetList(d, U + Up + vs, facets).canonical()


@dataclass(frozen=True)
class NamedConstruction:
    name: str
    params: tuple = ()

    def build(self):
        return build(self.name, *self.params)


CATALOG = ("simplex", "cross_polytope", "demicube", "p9", "p18", "p18_prime", "p_d")


def build(name: str, d: int | None = None, eps=None, h=None):
    """Catalog lookup used by the CLI; returns a FacetList."""
    if name == "simplex":
        return simplex(4 if d is None else d)
    if name == "cross_polytope":
        return cross_polytope(3 if d is None else d)
    if name == "demicube":
        return hull(demicube(5 if d is None else d))
    if name == "p9":
        return p9()
    if name == "p18":
        return p18(eps or Fraction(1, 20), h or Fraction(2))
    if name == "p18_prime":
        return hull(p18_prime(eps or Fraction(1, 20), h or Fraction(2)))
    if name == "p_d":
        return p_d(4 if d is None else d)
    raise KeyError(name)
