"""Exact rational geometry: beneath-beyond hull, charts, pseudo-regular
cross-polytopes and their associated points, and the coordinate build of P^d.

No floating point is used anywhere; every coordinate is a ``Fraction``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    ContainmentFailed,
    DegenerateHyperplane,
    DegenerateInput,
    EpsilonExhausted,
    InconsistentGeometry,
    NotCoplanar,
)
from .lattice import FacetList

__all__ = [
    "RationalPolytope",
    "HullResult",
    "hull",
    "hull_details",
    "embed_chart",
    "classify_point",
    "PseudoRegularCP",
    "pseudo_regular_cp",
    "AssociatedPoints",
    "associated_points",
    "p_d_geometric",
    "p_d_points",
    "audit_p_d",
    "geometric_vertex_figure",
    "affine_rank",
]

BENEATH, BEYOND, ON = "beneath", "beyond", "on"


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _vec(p) -> tuple:
    return tuple(_frac(x) for x in p)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _scale(t, a):
    return tuple(t * x for x in a)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _mean(pts):
    pts = list(pts)
    n = len(pts)
    return tuple(sum(c) / n for c in zip(*pts))


# -- exact linear algebra --------------------------------------------------

def _rref(rows):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncol = len(m[0])
    pivots = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _nullspace(rows, ncol):
    red, piv = _rref(rows)
    free = [c for c in range(ncol) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncol
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def affine_rank(points) -> int:
    """Dimension of the affine hull (-1 for no points)."""
    pts = [_vec(p) for p in points]
    if not pts:
        return -1
    diffs = [_sub(p, pts[0]) for p in pts[1:]]
    if not diffs:
        return 0
    return len(_rref(diffs)[1])


def _hyperplane(points):
    """(normal, offset) with normal.x == offset on all points; None unless unique."""
    n = len(points[0])
    rows = [list(p) + [Fraction(-1)] for p in points]
    ns = _nullspace(rows, n + 1)
    if len(ns) != 1:
        return None
    v = ns[0]
    normal, off = v[:n], v[n]
    if all(x == 0 for x in normal):
        return None
    return normal, off


def _orient(normal, off, interior):
    """Orient so that the interior point is strictly beneath, then normalise."""
    s = _dot(normal, interior) - off
    if s == 0:
        raise DegenerateHyperplane("reference point lies on the hyperplane")
    if s > 0:
        normal = tuple(-x for x in normal)
        off = -off
    lead = next(abs(x) for x in normal if x != 0)
    return tuple(x / lead for x in normal), off / lead


def _solve(rows, rhs):
    """Unique solution of a (possibly overdetermined) consistent system."""
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = _rref(aug)
    if n in piv:
        raise InconsistentGeometry("linear system is inconsistent")
    if len(piv) != n:
        raise InconsistentGeometry("linear system is underdetermined")
    return tuple(row[n] for row in red)


# -- point sets --------------------------------------------------------------

@dataclass(frozen=True)
class RationalPolytope:
    """A labelled finite point set with exact rational coordinates."""

    ambient_dim: int
    points: tuple
    labels: tuple = None

    def __post_init__(self):
        pts = tuple(_vec(p) for p in self.points)
        for p in pts:
            if len(p) != self.ambient_dim:
                raise DegenerateInput(f"point {p} has wrong dimension for ambient {self.ambient_dim}")
        if len(set(pts)) != len(pts):
            raise DegenerateInput("duplicate points")
        labels = self.labels
        if labels is None:
            labels = tuple(f"p{i}" for i in range(len(pts)))
        labels = tuple(str(x) for x in labels)
        if len(labels) != len(pts) or len(set(labels)) != len(labels):
            raise DegenerateInput("labels must be distinct and match the points")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)

    def affine_dim(self) -> int:
        return affine_rank(self.points)

    def point(self, label: str) -> tuple:
        return self.points[self.labels.index(label)]

    def to_dict(self) -> dict:
        return {
            "dim": self.ambient_dim,
            "labels": list(self.labels),
            "points": [[str(x) for x in p] for p in self.points],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data) -> "RationalPolytope":
        try:
            pts = [tuple(Fraction(str(x)) for x in p) for p in data["points"]]
            dim = int(data.get("dim", len(pts[0]) if pts else 0))
        except (KeyError, ValueError, ZeroDivisionError, IndexError) as exc:
            raise DegenerateInput(f"malformed points JSON: {exc}") from None
        return cls(dim, pts, data.get("labels"))


def embed_chart(poly: RationalPolytope) -> RationalPolytope:
    """Drop one coordinate of a point set lying in a rational affine hyperplane.

    The dropped coordinate has a nonzero coefficient in the hyperplane
    equation, so the projection is injective on the hyperplane and affine,
    hence preserves the combinatorics of the hull.
    """
    pts = poly.points
    n = poly.ambient_dim
    if affine_rank(pts) >= n:
        raise NotCoplanar("points span the whole ambient space")
    rows = [list(p) + [Fraction(-1)] for p in pts]
    eq = next(v for v in _nullspace(rows, n + 1) if any(x != 0 for x in v[:n]))
    k = next(i for i in range(n) if eq[i] != 0)
    return RationalPolytope(n - 1, [p[:k] + p[k + 1:] for p in pts], poly.labels)


def _full_dim_chart(pts):
    """Project onto pivot coordinates of the affine hull (injective on it)."""
    r = affine_rank(pts)
    if r < 1:
        raise DegenerateInput("points have affine dimension < 1")
    n = len(pts[0])
    if r == n:
        return pts, r
    diffs = [_sub(p, pts[0]) for p in pts[1:]]
    piv = _rref(diffs)[1]
    return [tuple(p[c] for c in piv) for p in pts], r


# -- beneath-beyond hull ---------------------------------------------------

@dataclass
class HullResult:
    facets: list = field(default_factory=list)  # (normal, offset, frozenset of point indices)
    vertices: list = field(default_factory=list)  # point indices
    interior_ref: tuple = ()
    coords: list = field(default_factory=list)  # full-dimensional coordinates used
    dim: int = 0


def hull_details(pts_in: Sequence) -> HullResult:
    pts = [_vec(p) for p in pts_in]
    if len(set(pts)) != len(pts):
        raise DegenerateInput("duplicate points")
    coords, r = _full_dim_chart(pts)

    # initial simplex by deterministic scan
    base = [0]
    for i in range(1, len(coords)):
        if affine_rank([coords[j] for j in base] + [coords[i]]) == len(base):
            base.append(i)
            if len(base) == r + 1:
                break
    ref = _mean(coords[i] for i in base)
    processed = list(base)
    facets = {}

    def add_facet(normal, off):
        key = (normal, off)
        if key not in facets:
            on = frozenset(i for i in processed if _dot(normal, coords[i]) == off)
            facets[key] = on

    for omit in base:
        sub = [coords[i] for i in base if i != omit]
        h = _hyperplane(sub)
        add_facet(*_orient(*h, ref))

    for idx in range(len(coords)):
        if idx in base:
            continue
        p = coords[idx]
        processed.append(idx)
        visible, touching = [], []
        for key in facets:
            s = _dot(key[0], p) - key[1]
            if s > 0:
                visible.append(key)
            elif s == 0:
                touching.append(key)
        for key in touching:
            facets[key] = facets[key] | {idx}
        if not visible:
            continue
        vis = set(visible)
        new = {}
        for V in visible:
            for N, on_n in facets.items():
                if N in vis:
                    continue
                ridge = facets[V] & on_n
                if len(ridge) < r - 1:
                    continue
                rpts = [coords[i] for i in sorted(ridge)]
                if affine_rank(rpts) != r - 2:
                    continue
                # r-1 independent ridge points plus p
                chosen = [rpts[0]]
                for q in rpts[1:]:
                    if affine_rank(chosen + [q]) == len(chosen):
                        chosen.append(q)
                        if len(chosen) == r - 1:
                            break
                h = _hyperplane(chosen + [p])
                if h is None:
                    raise DegenerateHyperplane("ridge and new point are not independent")
                key = _orient(*h, ref)
                if key in facets:
                    continue  # p is coplanar with an existing facet
                new[key] = None
        for V in visible:
            del facets[V]
        for key in new:
            add_facet(*key)

    facet_list = [(k[0], k[1], on) for k, on in facets.items()]
    vertices = []
    for i in range(len(coords)):
        through = [on for _, _, on in facet_list if i in on]
        if not through:
            continue
        meet = frozenset.intersection(*through)
        if meet == {i}:
            vertices.append(i)
    return HullResult(facet_list, vertices, ref, coords, r)


def hull(poly) -> FacetList:
    """Facet vertex-sets of the convex hull; non-vertex points are dropped."""
    if not isinstance(poly, RationalPolytope):
        poly = RationalPolytope(len(poly[0]), poly)
    res = hull_details(poly.points)
    vset = set(res.vertices)
    labels = poly.labels
    facets = [frozenset(labels[i] for i in on if i in vset) for _, _, on in res.facets]
    return FacetList(res.dim, [labels[i] for i in sorted(vset)], facets).canonical()


def non_vertices(poly: RationalPolytope) -> list:
    res = hull_details(poly.points)
    vs = set(res.vertices)
    return [poly.labels[i] for i in range(len(poly.points)) if i not in vs]


def classify_point(point, hyperplane_points, interior) -> str:
    """Side of ``point`` relative to the hyperplane through ``hyperplane_points``.

    The side containing ``interior`` is ``beneath``.
    """
    hp = [_vec(q) for q in hyperplane_points]
    n = len(hp[0])
    if len(hp) != n or affine_rank(hp) != n - 1:
        raise DegenerateHyperplane("need d affinely independent points in R^d")
    normal, off = _orient(*_hyperplane(hp), _vec(interior))
    s = _dot(normal, _vec(point)) - off
    return BEYOND if s > 0 else BENEATH if s < 0 else ON


# -- pseudo-regular cross-polytopes -----------------------------------------

def _chart_mu(d, k):
    """e_k - (1/d) * ones in R^d, written in the chart dropping the last coordinate."""
    return tuple(Fraction(int(i == k), 1) - Fraction(1, d) for i in range(d - 1))


@dataclass(frozen=True)
class PseudoRegularCP:
    d: int
    alpha: Fraction
    a: Fraction
    mu: tuple  # chart coordinates in R^{d-1}
    mu_prime: tuple

    @property
    def upper(self) -> tuple:
        return tuple(m + (Fraction(1),) for m in self.mu)

    @property
    def lower(self) -> tuple:
        return tuple(m + (Fraction(-1),) for m in self.mu_prime)

    def as_polytope(self) -> RationalPolytope:
        labels = [f"u{k + 1}" for k in range(self.d)] + [f"up{k + 1}" for k in range(self.d)]
        return RationalPolytope(self.d, self.upper + self.lower, labels)


def pseudo_regular_cp(d: int, alpha) -> PseudoRegularCP:
    """conv(G x {1} u alpha G* x {-1}) for the centred regular simplex G.

    G has vertices mu_k = e_k - 1/d in {sum x = 0}; the dual simplex scaled
    by alpha has vertices -a mu_k with a = alpha*d.
    """
    if d < 2:
        raise DegenerateInput("pseudo-regular cross-polytope needs d >= 2")
    alpha = _frac(alpha)
    a = alpha * d
    full = [tuple(Fraction(int(i == k)) - Fraction(1, d) for i in range(d)) for k in range(d)]
    # alpha G* = {x : mu_i . x <= a/d}; G must sit strictly inside
    for x in full:
        for m in full:
            if not _dot(m, x) < a / d:
                raise ContainmentFailed(
                    f"alpha={alpha} does not put G inside the interior of alpha G*"
                )
    mu = tuple(_chart_mu(d, k) for k in range(d))
    mu_p = tuple(_scale(-a, m) for m in mu)
    return PseudoRegularCP(d, alpha, a, mu, mu_p)


@dataclass(frozen=True)
class AssociatedPoints:
    a: tuple  # points on the last axis
    c: tuple  # heights c_1..c_d


def _axis_height(normal, off):
    if normal[-1] == 0:
        raise InconsistentGeometry("hyperplane is parallel to the height axis")
    return off / normal[-1]


def associated_points(cp: PseudoRegularCP, all_subsets: bool = True) -> AssociatedPoints:
    """Heights c_k where the hyperplanes H_I (|I| = k) meet the height axis.

    Computed by intersecting each H_I with the axis and, independently, from
    the ratio r of the parallel barycenter vectors: c = (r+1)/(r-1).  Any
    disagreement raises ``InconsistentGeometry``.
    """
    d = cp.d
    up, low = cp.upper, cp.lower
    cs = []
    for k in range(1, d + 1):
        subsets = list(itertools.combinations(range(d), k))
        if not all_subsets:
            subsets = subsets[:2]
        heights = set()
        closed = set()
        for I in subsets:
            pts = [up[i] for i in I] + [low[j] for j in range(d) if j not in I]
            h = _hyperplane(pts)
            if h is None:
                raise InconsistentGeometry(f"H_I degenerate for I={I}")
            heights.add(_axis_height(*h))
            if k == d:
                closed.add(Fraction(1))
                continue
            beta = _mean(cp.mu[i] for i in I)
            beta_p = _mean(cp.mu_prime[j] for j in range(d) if j not in I)
            ratios = {bp / b for b, bp in zip(beta, beta_p) if b != 0}
            zero_ok = all(bp == 0 for b, bp in zip(beta, beta_p) if b == 0)
            if len(ratios) != 1 or not zero_ok:
                raise InconsistentGeometry(f"barycenters not parallel for I={I}")
            r = ratios.pop()
            closed.add((r + 1) / (r - 1))
        if len(heights) != 1:
            raise InconsistentGeometry(f"hyperplanes with |I|={k} miss a common axis point")
        if heights != closed:
            raise InconsistentGeometry(
                f"k={k}: axis intersection {heights} differs from closed form {closed}"
            )
        cs.append(heights.pop())
    pts = tuple(tuple([Fraction(0)] * (d - 1)) + (c,) for c in cs)
    return AssociatedPoints(pts, tuple(cs))


# -- geometric P^d ---------------------------------------------------------

def _line_flat_intersection(p0, p1, flat):
    """Point of the line p0 + t(p1 - p0) lying in aff(flat); must be unique."""
    n = len(p0)
    m = len(flat)
    # unknowns: t, lambda_1..lambda_m ; p0 + t(p1-p0) = sum lambda_i f_i, sum lambda = 1
    dirv = _sub(p1, p0)
    rows, rhs = [], []
    for c in range(n):
        rows.append([dirv[c]] + [-f[c] for f in flat])
        rhs.append(-p0[c])
    rows.append([Fraction(0)] + [Fraction(1)] * m)
    rhs.append(Fraction(1))
    red, piv = _rref([r + [b] for r, b in zip(rows, rhs)])
    if m + 1 in piv:
        raise InconsistentGeometry("line misses the flat")
    if 0 not in piv:
        raise InconsistentGeometry("line meets the flat in more than a point")
    row = red[piv.index(0)]
    if any(row[j] != 0 for j in range(1, m + 1)):
        # t must be determined independently of the lambdas
        raise InconsistentGeometry("intersection parameter not unique")
    t = row[m + 1]
    return _add(p0, _scale(t, dirv))


def _cp_facets(d):
    """Facets of the CP grouped by |H ∩ U| as label lists (U = u1..u_{d-1})."""
    out = {}
    for k in range(1, d):
        out[k] = []
        for I in itertools.combinations(range(1, d), k):
            H = [f"u{i}" for i in I] + [f"up{j}" for j in range(1, d) if j not in I]
            out[k].append(H)
    return out


def p_d_points(d: int, eps) -> RationalPolytope:
    """The 3d-3 points of P^d in R^{d+1} (all inside sum x = 1)."""
    eps = _frac(eps)
    e = [tuple(Fraction(int(i == j)) for i in range(d + 1)) for j in range(d + 1)]
    pts = {}
    for i in range(1, d):
        pts[f"up{i}"] = e[i - 1]
    pts["v1"] = e[d - 1]
    pts["v0"] = e[d]
    for i in range(1, d):
        p = _mean(e[j - 1] for j in range(1, d + 1) if j != i)
        pts[f"u{i}"] = _add(p, _scale(eps, _sub(p, e[d])))
    b = _mean(pts[f"u{i}"] for i in range(1, d))
    bp = _mean(pts[f"up{i}"] for i in range(1, d))
    groups = _cp_facets(d)
    for k in range(2, d - 1):
        ak = None
        for H in groups[k]:
            q = _line_flat_intersection(bp, b, [pts[x] for x in H])
            if ak is None:
                ak = q
            elif q != ak:
                raise InconsistentGeometry(f"facets in H_{k} meet the axis at different points")
        pts[f"v{k}"] = _scale(Fraction(1, 2), _add(ak, pts[f"v{k - 1}"]))
    labels = sorted(pts)
    return RationalPolytope(d + 1, [pts[x] for x in labels], labels)


def p_d_geometric(d: int, eps=Fraction(1, 10), max_halvings: int = 20) -> RationalPolytope:
    """Coordinates for P^d, halving eps until the hull has the expected counts.

    Returns the points in a d-dimensional chart.
    """
    if not 4 <= d <= 7:
        raise DegenerateInput(f"p_d_geometric supports 4 <= d <= 7, got {d}")
    eps = _frac(eps)
    for _ in range(max_halvings + 1):
        poly = embed_chart(p_d_points(d, eps))
        fl = hull(poly)
        if len(fl.facets) == 2 ** (d - 1) + 1 and len(fl.vertices) == 3 * d - 3:
            return poly
        eps /= 2
    raise EpsilonExhausted(f"no eps <= initial value gave the expected hull for d={d}")


def audit_p_d(d: int, eps=Fraction(1, 10)) -> list:
    """Side of each new vertex v_k against every facet of the previous stage.

    Returns records ``(k, facet labels, observed, expected)``; the expectation
    is ``on`` for facets through H u v_{k-1} with |H ∩ U| = k, ``beyond``
    when |H ∩ U| > k, and ``beneath`` for all other facets.
    """
    poly = p_d_geometric(d, eps)
    where = dict(zip(poly.labels, poly.points))
    U = {f"u{i}" for i in range(1, d)}
    CPV = U | {f"up{i}" for i in range(1, d)}
    base = [x for x in poly.labels if not (x.startswith("v") and x not in ("v0", "v1"))]
    records = []
    for k in range(2, d - 1):
        stage = base + [f"v{j}" for j in range(2, k)]
        sub = RationalPolytope(d, [where[x] for x in stage], stage)
        res = hull_details(sub.points)
        interior = _mean(sub.points)
        for normal, off, on in res.facets:
            G = frozenset(stage[i] for i in on)
            s = _dot(normal, where[f"v{k}"]) - off
            obs = BEYOND if s > 0 else BENEATH if s < 0 else ON
            H = G & CPV
            prev = f"v{k - 1}"
            if prev in G and len(H) == d - 1 and G != CPV:
                i = len(H & U)
                exp = ON if i == k else BEYOND if i > k else BENEATH
            else:
                exp = BENEATH
            # cross-check the hull hyperplane against classify_point
            hp = [where[x] for x in sorted(G)]
            chosen = [hp[0]]
            for q in hp[1:]:
                if affine_rank(chosen + [q]) == len(chosen):
                    chosen.append(q)
            if classify_point(where[f"v{k}"], chosen, interior) != obs:
                raise InconsistentGeometry("hull hyperplane and classify_point disagree")
            records.append((k, tuple(sorted(G)), obs, exp))
    return records


def geometric_vertex_figure(poly: RationalPolytope, v: str) -> FacetList:
    """Vertex figure at ``v`` from a slicing hyperplane; labels are edge ends.

    The slice normal is the sum of the outer normals of the facets through
    ``v``, so every other point lies strictly below ``v`` in that direction.
    """
    res = hull_details(poly.points)
    coords = res.coords
    iv = poly.labels.index(v)
    if iv not in res.vertices:
        raise DegenerateInput(f"{v!r} is not a vertex of the hull")
    normals = [n for n, _, on in res.facets if iv in on]
    nsum = tuple(sum(c) for c in zip(*normals))
    pv = coords[iv]
    level = _dot(nsum, pv) - 1
    scaled = []
    labels = []
    for i in res.vertices:
        if i == iv:
            continue
        w = coords[i]
        drop = _dot(nsum, pv) - _dot(nsum, w)
        if drop <= 0:
            raise InconsistentGeometry("slice normal does not separate the vertex")
        t = (_dot(nsum, pv) - level) / drop
        scaled.append(_add(pv, _scale(t, _sub(w, pv))))
        labels.append(poly.labels[i])
    sl = RationalPolytope(len(pv), scaled, labels)
    sl = embed_chart(sl)
    fl = hull(sl)
    return FacetList(fl.dim, fl.vertices, fl.facets)
