"""The merge P1 ▷ P2, computed by facet surgery and, independently, as a
quotient of two truncated face lattices."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb

from .errors import (
    AmbiguousSite,
    DimensionMismatch,
    NotAFace,
    NotASimplexFacet,
    NotASimpleVertex,
    NotAVertex,
    PreconditionFailed,
    QuotientMismatch,
)
from .lattice import (
    FaceLattice,
    FacetList,
    as_lattice,
    dual_with_map,
    is_self_dual,
    lattice_from_facets,
)
from .verify import is_i_simple, is_j_simplicial, simple_vertices, simplex_facets

__all__ = [
    "MergeSpec",
    "MergeSites",
    "find_merge_sites",
    "merge_labels",
    "merge_facets",
    "merge_surgery",
    "merge_quotient",
    "check_merge_fvector",
    "self_dual_merge",
    "self_dual_spec",
    "self_dual_extension",
]


@dataclass(frozen=True)
class MergeSpec:
    """Ordered simplex facet [u_1..u_d] of P1, simple vertex v of P2, and the
    ordered neighbours [u'_1..u'_d] of v."""

    F_order: tuple
    v: str
    neighbor_order: tuple

    def __post_init__(self):
        object.__setattr__(self, "F_order", tuple(self.F_order))
        object.__setattr__(self, "neighbor_order", tuple(self.neighbor_order))

    def to_dict(self):
        return {"facet": list(self.F_order), "vertex": self.v, "neighbors": list(self.neighbor_order)}


@dataclass(frozen=True)
class MergeSites:
    H: tuple  # facets of P1 adjacent to F, H[j] ⊇ F \ u_j
    H_prime: tuple  # facets of P2 at v, H_prime[j] misses u'_j


def find_merge_sites(L1, L2, spec: MergeSpec) -> MergeSites:
    L1, L2 = as_lattice(L1), as_lattice(L2)
    d = L1.dim
    if L2.dim != d:
        raise DimensionMismatch(f"cannot merge a {d}-polytope with a {L2.dim}-polytope")
    F = frozenset(spec.F_order)
    if len(spec.F_order) != d or len(F) != d or F not in set(L1.facets()):
        raise NotASimplexFacet(f"{list(spec.F_order)} is not a simplex facet of P1")
    H = []
    for u in spec.F_order:
        G = F - {u}
        cands = [X for X in L1.facets() if X != F and G <= X]
        if len(cands) != 1:
            raise AmbiguousSite(f"ridge {sorted(G)} lies in {len(cands) + 1} facets")
        H.append(cands[0])
    v = spec.v
    try:
        deg = L2.degree(v)
    except (NotAVertex, NotAFace):
        raise NotASimpleVertex(f"{v!r} is not a vertex of P2") from None
    if deg != d:
        raise NotASimpleVertex(f"{v!r} lies in {deg} facets, expected {d}")
    nbrs = L2.neighbors(v)
    if len(spec.neighbor_order) != d or set(spec.neighbor_order) != nbrs:
        raise NotASimpleVertex(
            f"neighbour list {list(spec.neighbor_order)} is not a permutation of {sorted(nbrs)}"
        )
    at_v = [X for X in L2.facets() if v in X]
    Hp = []
    for j, uj in enumerate(spec.neighbor_order):
        rest = set(spec.neighbor_order) - {uj}
        cands = [X for X in at_v if rest <= X and uj not in X]
        if len(cands) != 1:
            raise AmbiguousSite(f"{len(cands)} facets at {v!r} avoid exactly {uj!r}")
        Hp.append(cands[0])
    return MergeSites(tuple(H), tuple(Hp))


def _fresh_prefix(taken, labels):
    n = 2
    while any(f"{n}.{x}" in taken for x in labels):
        n += 1
    return f"{n}."


def merge_labels(L1, L2, spec: MergeSpec, prefix: str | None = None) -> dict:
    """Relabelling of P2's vertices: u'_k -> u_k, the rest kept or prefixed.

    Unidentified labels stay as they are when they do not collide with P1's
    labels; otherwise all of them get the first free prefix ``"n."``.
    """
    L1, L2 = as_lattice(L1), as_lattice(L2)
    ident = dict(zip(spec.neighbor_order, spec.F_order))
    rest = [x for x in L2.vertices if x not in ident and x != spec.v]
    taken = set(L1.vertices)
    if prefix is None:
        prefix = "" if not taken & set(rest) else _fresh_prefix(taken, rest)
    mapping = dict(ident)
    for x in rest:
        mapping[x] = prefix + x
    if taken & {mapping[x] for x in rest}:
        raise PreconditionFailed(f"prefix {prefix!r} does not separate the vertex labels")
    return mapping


def merge_facets(L1, L2, spec: MergeSpec, prefix: str | None = None) -> FacetList:
    """Facet list of P1 ▷ P2 (surgery on the two facet lists)."""
    L1, L2 = as_lattice(L1), as_lattice(L2)
    sites = find_merge_sites(L1, L2, spec)
    m = merge_labels(L1, L2, spec, prefix)
    F = frozenset(spec.F_order)
    drop = {F, *sites.H}
    facets = [X for X in L1.facets() if X not in drop]
    facets += [frozenset(m[x] for x in X) for X in L2.facets() if spec.v not in X]
    for Hj, Hpj in zip(sites.H, sites.H_prime):
        facets.append(Hj | frozenset(m[x] for x in Hpj if x != spec.v))
    verts = list(L1.vertices) + [m[x] for x in L2.vertices if x != spec.v and m[x] not in L1.vertices]
    # a simplex P1 loses its apex only through H_j; keep vertex list honest
    used = set().union(*facets)
    verts = [x for x in verts if x in used]
    return FacetList(L1.dim, verts, facets).canonical()


def merge_surgery(L1, L2, spec: MergeSpec, prefix: str | None = None) -> FaceLattice:
    return lattice_from_facets(merge_facets(L1, L2, spec, prefix))


# -- quotient-lattice route ------------------------------------------------

def _close(rel):
    """Transitive closure of a relation given as successor bitsets."""
    n = len(rel)
    reach = list(rel)
    changed = True
    while changed:
        changed = False
        for a in range(n):
            r = reach[a]
            acc = r
            x = r
            while x:
                low = x & -x
                b = low.bit_length() - 1
                x ^= low
                acc |= reach[b]
            if acc != r:
                reach[a] = acc
                changed = True
    return reach


def merge_quotient(L1, L2, spec: MergeSpec, i: int, prefix: str | None = None) -> FaceLattice:
    """Glue L1^- and L2^- along the identified faces and read off the lattice.

    L1^- drops the faces of F of rank >= d-i; L2^- drops the faces through v
    of rank < d-i.  Faces [u_k : k in S] and [u'_k : k in S] (|S| <= d-i) are
    identified, as are the meets of the H_k and of the H'_k (|S| <= i).
    The order is generated by the comparabilities inside each piece.
    """
    L1, L2 = as_lattice(L1), as_lattice(L2)
    d = L1.dim
    if L2.dim != d:
        raise DimensionMismatch("dimensions differ")
    if not 1 <= i <= d - 1:
        raise PreconditionFailed(f"i must lie in [1, {d - 1}]")
    for name, L in (("P1", L1), ("P2", L2)):
        if d - i >= 1 and not is_j_simplicial(L, d - i):
            raise PreconditionFailed(f"{name} is not {d - i}-simplicial")
        if not is_i_simple(L, i):
            raise PreconditionFailed(f"{name} is not {i}-simple")
    sites = find_merge_sites(L1, L2, spec)
    m = merge_labels(L1, L2, spec, prefix)
    F = frozenset(spec.F_order)
    v = spec.v
    top_label = ("top",)

    # nodes: ("A", face) for L1^-, ("B", face) for L2^-, merged by a class map
    nodes = {}
    cls_of = {}

    def cls(key):
        return cls_of.setdefault(key, len(cls_of))

    faces1 = L1.ranked_faces()
    faces2 = L2.ranked_faces()
    top1, top2 = frozenset(L1.vertices), frozenset(L2.vertices)
    A = {f: r for f, r in faces1.items() if not (f <= F and r >= d - i)}
    B = {f: r for f, r in faces2.items() if not (v in f and r < d - i)}

    idx_u = {u: k for k, u in enumerate(spec.F_order)}
    idx_up = {u: k for k, u in enumerate(spec.neighbor_order)}

    def meet(facets):
        out = None
        for X in facets:
            out = X if out is None else out & X
        return out

    # vertex side: faces of F with rank < d-i (size <= d-i) are in A; the
    # matching faces of P2 spanned by the u'_k are in B
    # facet side: meets of the H_k and of the H'_k over |S| <= i
    h_meets, hp_meets = {}, {}
    for s in range(1, i + 1):
        for S in combinations(range(d), s):
            h_meets[meet(sites.H[k] for k in S)] = frozenset(S)
            hp_meets[meet(sites.H_prime[k] for k in S)] = frozenset(S)
    span = frozenset(spec.neighbor_order)
    for f in A:
        if f == top1:
            key = top_label
        elif f in h_meets:
            key = ("T", h_meets[f])
        elif f <= F:
            key = ("S", frozenset(idx_u[x] for x in f))
        else:
            key = ("A", f)
        nodes[("A", f)] = cls(key)
    for f in B:
        if f == top2:
            key = top_label
        elif f in hp_meets:
            key = ("T", hp_meets[f])
        elif v not in f and f <= span and len(f) <= d - i:
            key = ("S", frozenset(idx_up[x] for x in f))
        else:
            key = ("B", f)
        nodes[("B", f)] = cls(key)

    used = sorted(set(nodes.values()))
    pos = {c: k for k, c in enumerate(used)}
    n = len(used)
    rel = [0] * n
    for side, faces in (("A", A), ("B", B)):
        flist = list(faces)
        for a in flist:
            ca = pos[nodes[(side, a)]]
            for b in flist:
                if a != b and a <= b:
                    rel[ca] |= 1 << pos[nodes[(side, b)]]
    reach = _close(rel)
    for a in range(n):
        if reach[a] >> a & 1:
            raise QuotientMismatch("glued relation has a cycle")

    # atoms = rank-0 classes; each class's vertex set = atoms below it
    below = [0] * n
    for a in range(n):
        x = reach[a]
        while x:
            low = x & -x
            b = low.bit_length() - 1
            x ^= low
            below[b] |= 1 << a
    bottom = [a for a in range(n) if below[a] == 0]
    if len(bottom) != 1:
        raise QuotientMismatch(f"glued poset has {len(bottom)} minimal elements")
    bot = bottom[0]
    atoms = [a for a in range(n) if below[a] == 1 << bot]
    # label each atom by its vertex in the merged labelling
    atom_label = {}
    for (side, f), c in nodes.items():
        a = pos[c]
        if a in atoms and len(f) == 1:
            (x,) = f
            atom_label[a] = x if side == "A" else m[x]
    if set(atom_label) != set(atoms):
        raise QuotientMismatch("atoms of the glued poset are not vertices")
    vsets = {}
    for a in range(n):
        vs = frozenset(atom_label[b] for b in atoms if below[a] >> b & 1 or a == b)
        vsets[a] = vs
    if len(set(vsets.values())) != n:
        raise QuotientMismatch("two glued elements share a vertex set")
    # order must be inclusion of vertex sets
    for a in range(n):
        for b in range(n):
            if a != b and (reach[a] >> b & 1) != (vsets[a] < vsets[b]):
                raise QuotientMismatch("glued order differs from vertex-set inclusion")
    # coatoms generate the lattice
    top = [a for a in range(n) if reach[a] == 0]
    if len(top) != 1:
        raise QuotientMismatch(f"glued poset has {len(top)} maximal elements")
    coatoms = [a for a in range(n) if reach[a] == 1 << top[0]]
    fl = FacetList(d, sorted(vsets[top[0]]), [vsets[c] for c in coatoms])
    result = lattice_from_facets(fl)
    if set(result.faces()) != set(vsets.values()):
        raise QuotientMismatch("glued poset is not the face lattice of its coatoms")
    return result


def check_merge_fvector(L1, L2, merged) -> bool:
    L1, L2, M = as_lattice(L1), as_lattice(L2), as_lattice(merged)
    d = L1.dim
    f1, f2, fm = L1.f_vector(), L2.f_vector(), M.f_vector()
    return all(fm[j] == f1[j] + f2[j] - comb(d + 1, j + 1) for j in range(d))


def self_dual_spec(L, F_order, prefix: str = "D"):
    """Dual lattice and the merge spec pairing F with v = phi(F), u'_k = phi(H_k)."""
    L = as_lattice(L)
    d = L.dim
    if d % 2:
        raise PreconditionFailed(f"self-dual merge needs even dimension, got {d}")
    i = d // 2
    if not (is_j_simplicial(L, i) and is_i_simple(L, i)):
        raise PreconditionFailed(f"lattice is not {i}-simplicial {i}-simple")
    D, phi = dual_with_map(L, prefix)
    F = frozenset(F_order)
    if F not in set(L.facets()) or len(F) != d:
        raise NotASimplexFacet(f"{list(F_order)} is not a simplex facet")
    # phi sends a facet to a single dual vertex
    (v,) = phi[F]
    H = []
    for u in F_order:
        G = F - {u}
        (Hj,) = [X for X in L.facets() if X != F and G <= X]
        H.append(Hj)
    nbrs = []
    for Hj in H:
        (x,) = phi[Hj]
        nbrs.append(x)
    return D, MergeSpec(tuple(F_order), v, tuple(nbrs))


def self_dual_merge(L, F_order, prefix: str = "D") -> FaceLattice:
    """Merge L with its dual along F and phi(F), neighbours phi(H_1..H_d)."""
    L = as_lattice(L)
    D, spec = self_dual_spec(L, F_order, prefix)
    return merge_surgery(L, D, spec)


def self_dual_extension(S, P):
    """First self-dual merge of ``S`` with ``P`` (either order) found by search.

    Sites are scanned deterministically: S ▷ P before P ▷ S, simplex facets
    and simple vertices in canonical order, neighbour orders by permutation
    order.  Returns ``(lattice, L1_is_S, spec)`` or None.
    """
    S, P = as_lattice(S), as_lattice(P)
    for L1, L2, s_first in ((S, P, True), (P, S, False)):
        for F in sorted(sorted(X) for X in simplex_facets(L1)):
            for v in sorted(simple_vertices(L2)):
                for nb in permutations(sorted(L2.neighbors(v))):
                    spec = MergeSpec(F, v, nb)
                    M = merge_surgery(L1, L2, spec)
                    if is_self_dual(M):
                        return M, s_first, spec
    return None
