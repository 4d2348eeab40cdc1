"""Face lattices of polytopes, stored as vertex sets.

A lattice is always derived from a facet list: the faces are the
intersections of facets, closed upward from the empty face.  Internally a
face is an ``int`` bitmask over the (sorted) vertex labels; the public API
speaks ``frozenset`` of labels.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    DiamondViolation,
    InvalidFacetList,
    NotAFace,
    NotAtomic,
    NotAVertex,
    NotComparable,
    NotGraded,
    RankOutOfRange,
)

__all__ = [
    "FacetList",
    "FaceLattice",
    "lattice_from_facets",
    "as_lattice",
    "f_vector",
    "flag_count",
    "dual",
    "dual_with_map",
    "is_isomorphic",
    "is_self_dual",
    "interval",
    "is_boolean_interval",
    "vertex_figure",
    "face_lattice",
    "check_invariants",
]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _facet_sort_key(members: Iterable[str]):
    m = sorted(members)
    return (len(m), m)


@dataclass(frozen=True)
class FacetList:
    """A polytope given by its dimension, vertex labels and facet vertex sets."""

    dim: int
    vertices: tuple
    facets: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(
            self, "facets", tuple(frozenset(str(v) for v in f) for f in self.facets)
        )

    def validate(self) -> "FacetList":
        if self.dim < 1:
            raise InvalidFacetList(f"dimension must be >= 1, got {self.dim}")
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidFacetList("duplicate vertex labels")
        verts = set(self.vertices)
        if len(set(self.facets)) != len(self.facets):
            raise InvalidFacetList("duplicate facets")
        for f in self.facets:
            if not f <= verts:
                raise InvalidFacetList(f"facet uses unknown vertices: {sorted(f - verts)}")
            if not f:
                raise InvalidFacetList("empty facet")
        masks = sorted(self.facets, key=len)
        for i, f in enumerate(masks):
            for g in masks[i + 1:]:
                if f < g:
                    raise InvalidFacetList(f"facet {sorted(f)} is contained in {sorted(g)}")
        degree = Counter(v for f in self.facets for v in f)
        for v in self.vertices:
            if degree[v] < self.dim:
                raise InvalidFacetList(
                    f"vertex {v!r} lies in {degree[v]} facets, fewer than dim={self.dim}"
                )
        return self

    def canonical(self) -> "FacetList":
        return FacetList(
            self.dim,
            sorted(self.vertices),
            sorted(self.facets, key=_facet_sort_key),
        )

    def relabel(self, mapping: Mapping[str, str]) -> "FacetList":
        m = lambda v: mapping.get(v, v)  # noqa: E731
        return FacetList(
            self.dim,
            [m(v) for v in self.vertices],
            [frozenset(m(v) for v in f) for f in self.facets],
        )

    def with_prefix(self, prefix: str) -> "FacetList":
        return self.relabel({v: prefix + v for v in self.vertices})

    def to_dict(self) -> dict:
        c = self.canonical()
        return {
            "dim": c.dim,
            "vertices": list(c.vertices),
            "facets": [sorted(f) for f in c.facets],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "FacetList":
        try:
            dim = int(data["dim"])
            facets = [frozenset(map(str, f)) for f in data["facets"]]
        except (KeyError, TypeError) as exc:
            raise InvalidFacetList(f"malformed lattice JSON: {exc}") from None
        vertices = data.get("vertices")
        if vertices is None:
            vertices = sorted(set().union(*facets))
        return cls(dim, vertices, facets)

    @classmethod
    def from_json(cls, text: str) -> "FacetList":
        return cls.from_dict(json.loads(text))


class FaceLattice:
    """Immutable graded face lattice; every face is stored as its vertex set.

    Faces are indexed ``0..len-1`` sorted by (rank, labels); index 0 is the
    empty face and the last index is the whole polytope.
    """

    __slots__ = (
        "dim", "vertices", "_index", "_vmask", "_fmask", "_rank",
        "_up", "_down", "_by_mask", "_facet_idx",
    )

    def __init__(self, dim, vertices, vmask, fmask, rank, up, down, facet_idx):
        self.dim = dim
        self.vertices = tuple(vertices)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        self._vmask = tuple(vmask)
        self._fmask = tuple(fmask)
        self._rank = tuple(rank)
        self._up = tuple(tuple(u) for u in up)
        self._down = tuple(tuple(d) for d in down)
        self._by_mask = {m: i for i, m in enumerate(self._vmask)}
        self._facet_idx = tuple(facet_idx)

    # mask <-> label helpers
    def _mask(self, face: Iterable[str]) -> int:
        m = 0
        for v in face:
            try:
                m |= 1 << self._index[v]
            except KeyError:
                raise NotAVertex(f"{v!r} is not a vertex") from None
        return m

    def _labels(self, mask: int) -> frozenset:
        return frozenset(self.vertices[i] for i in _bits(mask))

    def _face_index(self, face: Iterable[str]) -> int:
        m = self._mask(face)
        try:
            return self._by_mask[m]
        except KeyError:
            raise NotAFace(f"{sorted(face)} is not a face") from None

    def __len__(self):
        return len(self._vmask)

    def __contains__(self, face):
        try:
            return self._mask(face) in self._by_mask
        except NotAVertex:
            return False

    def __eq__(self, other):
        if not isinstance(other, FaceLattice):
            return NotImplemented
        if self.dim != other.dim or set(self.vertices) != set(other.vertices):
            return False
        return self.ranked_faces() == other.ranked_faces()

    def __hash__(self):
        return hash((self.dim, frozenset(self.ranked_faces().items())))

    def __repr__(self):
        return f"FaceLattice(dim={self.dim}, f={self.f_vector()})"

    @property
    def bottom(self) -> frozenset:
        return frozenset()

    @property
    def top(self) -> frozenset:
        return frozenset(self.vertices)

    def faces(self, rank: int | None = None) -> list:
        if rank is None:
            return [self._labels(m) for m in self._vmask]
        return [self._labels(m) for m, r in zip(self._vmask, self._rank) if r == rank]

    def ranked_faces(self) -> dict:
        return {self._labels(m): r for m, r in zip(self._vmask, self._rank)}

    def facets(self) -> list:
        return [self._labels(self._vmask[i]) for i in self._facet_idx]

    def rank(self, face: Iterable[str]) -> int:
        return self._rank[self._face_index(face)]

    def upper_covers(self, face) -> list:
        return [self._labels(self._vmask[j]) for j in self._up[self._face_index(face)]]

    def lower_covers(self, face) -> list:
        return [self._labels(self._vmask[j]) for j in self._down[self._face_index(face)]]

    def covers(self) -> list:
        return [
            (self._labels(self._vmask[i]), self._labels(self._vmask[j]))
            for i, ups in enumerate(self._up) for j in ups
        ]

    def facets_containing(self, face) -> list:
        i = self._face_index(face)
        return [self._labels(self._vmask[self._facet_idx[j]]) for j in _bits(self._fmask[i])]

    def num_facets_containing(self, face) -> int:
        return bin(self._fmask[self._face_index(face)]).count("1")

    def degree(self, v: str) -> int:
        """Number of facets through the vertex ``v``."""
        return self.num_facets_containing([v])

    def neighbors(self, v: str) -> frozenset:
        if v not in self._index:
            raise NotAVertex(f"{v!r} is not a vertex")
        bit = 1 << self._index[v]
        out = set()
        for m, r in zip(self._vmask, self._rank):
            if r == 1 and m & bit:
                out |= self._labels(m ^ bit)
        return frozenset(out)

    def f_vector(self) -> tuple:
        counts = Counter(self._rank)
        return tuple(counts[j] for j in range(self.dim))

    def to_facet_list(self) -> FacetList:
        return FacetList(self.dim, self.vertices, self.facets()).canonical()


def as_lattice(obj) -> FaceLattice:
    if isinstance(obj, FaceLattice):
        return obj
    if isinstance(obj, FacetList):
        return lattice_from_facets(obj)
    raise TypeError(f"expected FaceLattice or FacetList, got {type(obj).__name__}")


def lattice_from_facets(fl: FacetList) -> FaceLattice:
    """Close the facet sets of ``fl`` under intersection and grade the result."""
    fl.validate()
    labels = sorted(fl.vertices)
    index = {v: i for i, v in enumerate(labels)}
    n = len(labels)
    facet_vm = sorted(
        (sum(1 << index[v] for v in f) for f in fl.facets),
        key=lambda m: (bin(m).count("1"), [labels[i] for i in _bits(m)]),
    )
    m = len(facet_vm)
    vfac = [0] * n
    for j, fm in enumerate(facet_vm):
        for i in _bits(fm):
            vfac[i] |= 1 << j
    full_v = (1 << n) - 1
    full_f = (1 << m) - 1

    def vertex_set(fmask: int) -> int:
        if fmask == 0:
            return full_v
        out = full_v
        for j in _bits(fmask):
            out &= facet_vm[j]
        return out

    if vertex_set(full_f) != 0:
        raise NotGraded("the facets share a common vertex; not a polytope boundary")

    # faces keyed by their facet mask, which determines them uniquely
    vm_of = {full_f: 0}
    order = [full_f]
    ups = {}
    head = 0
    while head < len(order):
        fm = order[head]
        head += 1
        vm = vm_of[fm]
        if vm == full_v:
            ups[fm] = ()
            continue
        cand = {}
        for i in range(n):
            if vm >> i & 1:
                continue
            fm2 = fm & vfac[i]
            if fm2 not in vm_of:
                vm_of[fm2] = vertex_set(fm2)
                order.append(fm2)
            cand[fm2] = vm_of[fm2]
        ups[fm] = tuple(
            c for c, cv in cand.items()
            if not any(ov != cv and ov & cv == ov for ov in cand.values())
        )

    for i in range(n):
        if vm_of.get(vfac[i]) != 1 << i:
            raise NotAtomic(f"vertex {labels[i]!r} is not a face of its own")

    # longest-chain rank, processed in a linear extension (by face size)
    by_size = sorted(vm_of, key=lambda f: bin(vm_of[f]).count("1"))
    rank = {full_f: -1}
    for fm in by_size:
        r = rank[fm]
        for c in ups[fm]:
            if rank.get(c, -2) < r + 1:
                rank[c] = r + 1
    for fm in by_size:
        for c in ups[fm]:
            if rank[c] != rank[fm] + 1:
                raise NotGraded(
                    f"cover {sorted(labels[i] for i in _bits(vm_of[fm]))} < "
                    f"{sorted(labels[i] for i in _bits(vm_of[c]))} skips a rank"
                )
    if rank[0] != fl.dim:
        raise NotGraded(f"top face has rank {rank[0]}, expected dim={fl.dim}")

    def key(fm):
        return (rank[fm], [labels[i] for i in _bits(vm_of[fm])])

    ordered = sorted(vm_of, key=key)
    pos = {fm: k for k, fm in enumerate(ordered)}
    up = [sorted(pos[c] for c in ups[fm]) for fm in ordered]
    down = [[] for _ in ordered]
    for k, us in enumerate(up):
        for j in us:
            down[j].append(k)

    for a, us in enumerate(up):
        hits = Counter(c for b in us for c in up[b])
        for c, cnt in hits.items():
            if cnt != 2:
                raise DiamondViolation(
                    f"interval of length 2 above "
                    f"{sorted(labels[i] for i in _bits(vm_of[ordered[a]]))} has {cnt} middle elements"
                )

    # facet masks re-indexed onto the facet order used by FaceLattice.facets()
    facet_pos = [pos[1 << j] for j in range(m)]
    ordered_fm = list(ordered)
    facet_idx = sorted(range(m), key=lambda j: facet_pos[j])
    remap = {old: new for new, old in enumerate(facet_idx)}
    fmask = []
    for fm in ordered_fm:
        nm = 0
        for j in _bits(fm):
            nm |= 1 << remap[j]
        fmask.append(nm)
    return FaceLattice(
        fl.dim,
        labels,
        [vm_of[fm] for fm in ordered],
        fmask,
        [rank[fm] for fm in ordered],
        up,
        down,
        [facet_pos[j] for j in facet_idx],
    )


def f_vector(L) -> tuple:
    return as_lattice(L).f_vector()


def flag_count(L, i: int, j: int) -> int:
    """Number of incident pairs (i-face inside j-face)."""
    L = as_lattice(L)
    if not (0 <= i < j <= L.dim - 1):
        raise RankOutOfRange(f"need 0 <= i < j <= {L.dim - 1}, got ({i}, {j})")
    low = [m for m, r in zip(L._vmask, L._rank) if r == i]
    high = [m for m, r in zip(L._vmask, L._rank) if r == j]
    return sum(1 for b in high for a in low if a & b == a)


def dual_with_map(L, prefix: str = "F"):
    """Dual lattice plus the order-reversing bijection face -> dual face.

    Dual vertices are the facets of ``L`` labelled ``prefix + index`` in the
    canonical facet order.
    """
    L = as_lattice(L)
    facets = L.facets()
    flabels = [f"{prefix}{k}" for k in range(len(facets))]
    dual_facets = [
        frozenset(flabels[k] for k, F in enumerate(facets) if v in F) for v in L.vertices
    ]
    D = lattice_from_facets(FacetList(L.dim, flabels, dual_facets))
    phi = {}
    for m, fm in zip(L._vmask, L._fmask):
        phi[L._labels(m)] = frozenset(flabels[k] for k in _bits(fm))
    return D, phi


def dual(L, prefix: str = "F") -> FaceLattice:
    return dual_with_map(L, prefix)[0]


# -- isomorphism -----------------------------------------------------------

class _Incidence:
    def __init__(self, L: FaceLattice):
        self.labels = L.vertices
        self.f2v = [tuple(_bits(L._vmask[i])) for i in L._facet_idx]
        v2f = [[] for _ in L.vertices]
        for j, vs in enumerate(self.f2v):
            for i in vs:
                v2f[i].append(j)
        self.v2f = [tuple(x) for x in v2f]
        self.facet_masks = {L._vmask[i] for i in L._facet_idx}


def _refine(A, B, vc):
    """Colour refinement on both incidence structures at once.

    Returns refined (vertex colours A, vertex colours B) or None when the
    colour histograms disagree.
    """
    va, vb = vc
    fa = [0] * len(A.f2v)
    fb = [0] * len(B.f2v)
    classes = -1
    while True:
        sfa = [tuple(sorted(va[i] for i in vs)) for vs in A.f2v]
        sfb = [tuple(sorted(vb[i] for i in vs)) for vs in B.f2v]
        sfa = [(fa[j], s) for j, s in enumerate(sfa)]
        sfb = [(fb[j], s) for j, s in enumerate(sfb)]
        if Counter(sfa) != Counter(sfb):
            return None
        pal = {s: k for k, s in enumerate(sorted(set(sfa)))}
        fa = [pal[s] for s in sfa]
        fb = [pal[s] for s in sfb]
        sva = [(va[i], tuple(sorted(fa[j] for j in fs))) for i, fs in enumerate(A.v2f)]
        svb = [(vb[i], tuple(sorted(fb[j] for j in fs))) for i, fs in enumerate(B.v2f)]
        if Counter(sva) != Counter(svb):
            return None
        pal = {s: k for k, s in enumerate(sorted(set(sva)))}
        va = [pal[s] for s in sva]
        vb = [pal[s] for s in svb]
        now = len(pal) + len(set(fa))
        if now == classes:
            return va, vb
        classes = now


def _search(A, B, vc):
    res = _refine(A, B, vc)
    if res is None:
        return None
    va, vb = res
    sizes = Counter(va)
    open_classes = [c for c, s in sizes.items() if s > 1]
    if not open_classes:
        perm = {}
        pos_b = {c: i for i, c in enumerate(vb)}
        for i, c in enumerate(va):
            perm[i] = pos_b[c]
        mapped = set()
        for vs in A.f2v:
            m = 0
            for i in vs:
                m |= 1 << perm[i]
            mapped.add(m)
        if mapped != B.facet_masks:
            return None
        return {A.labels[i]: B.labels[j] for i, j in perm.items()}
    target = min(open_classes, key=lambda c: (sizes[c], c))
    x = va.index(target)
    fresh = max(va) + 1
    for y in (k for k, c in enumerate(vb) if c == target):
        na, nb = list(va), list(vb)
        na[x] = fresh
        nb[y] = fresh
        found = _search(A, B, (na, nb))
        if found is not None:
            return found
    return None


def is_isomorphic(L1, L2):
    """A vertex bijection inducing a lattice isomorphism ``L1 -> L2``, or None.

    Cheap invariants (dimension, f-vector, facet sizes, vertex degrees) are
    compared first, then colour refinement with individualisation.
    """
    L1, L2 = as_lattice(L1), as_lattice(L2)
    if L1.dim != L2.dim or L1.f_vector() != L2.f_vector() or len(L1) != len(L2):
        return None
    A, B = _Incidence(L1), _Incidence(L2)
    if Counter(map(len, A.f2v)) != Counter(map(len, B.f2v)):
        return None
    if Counter(map(len, A.v2f)) != Counter(map(len, B.v2f)):
        return None
    return _search(A, B, ([0] * len(A.v2f), [0] * len(B.v2f)))


def is_self_dual(L) -> bool:
    L = as_lattice(L)
    return is_isomorphic(L, dual(L)) is not None


# -- intervals ---------------------------------------------------------------

def interval(L, a, b) -> list:
    """Faces ``c`` with ``a <= c <= b``, sorted by rank."""
    L = as_lattice(L)
    ia, ib = L._face_index(a), L._face_index(b)
    ma, mb = L._vmask[ia], L._vmask[ib]
    if ma & mb != ma:
        raise NotComparable(f"{sorted(a)} is not below {sorted(b)}")
    return [
        L._labels(m) for m in L._vmask if m & ma == ma and m & mb == m
    ]


def is_boolean_interval(L, a, b) -> bool:
    L = as_lattice(L)
    elems = interval(L, a, b)
    ra = L.rank(a)
    r = L.rank(b) - ra
    atoms = [c for c in elems if L.rank(c) == ra + 1]
    if len(atoms) != r or len(elems) != 2 ** r:
        return False
    images = {frozenset(k for k, t in enumerate(atoms) if t <= c) for c in elems}
    return len(images) == 2 ** r


def face_lattice(L, face) -> FaceLattice:
    """The interval [empty, face] as a lattice of its own."""
    L = as_lattice(L)
    r = L.rank(face)
    face = frozenset(face)
    if r < 1:
        raise RankOutOfRange("face_lattice needs a face of rank >= 1")
    subs = [G for G in L.faces(r - 1) if G <= face]
    return lattice_from_facets(FacetList(r, sorted(face), subs))


def vertex_figure(L, v: str) -> FaceLattice:
    """The interval [v, top] as a (d-1)-lattice; atoms are labelled by the
    far endpoint of each edge at ``v``."""
    L = as_lattice(L)
    if v not in L._index:
        raise NotAVertex(f"{v!r} is not a vertex")
    nbrs = sorted(L.neighbors(v))
    facets = [frozenset(w for w in nbrs if w in F) for F in L.facets() if v in F]
    return lattice_from_facets(FacetList(L.dim - 1, nbrs, facets))


# -- invariant audit -------------------------------------------------------

def check_invariants(L) -> dict:
    """Re-verify the structural invariants of ``L`` from scratch.

    Returns a dict of named boolean checks; every value is True for a
    polytope lattice.
    """
    L = as_lattice(L)
    masks, ranks = L._vmask, L._rank
    full = (1 << len(L.vertices)) - 1
    out = {}
    out["bounded"] = masks[0] == 0 and masks[-1] == full and ranks[0] == -1 and ranks[-1] == L.dim
    out["distinct"] = len(set(masks)) == len(masks)
    out["graded"] = all(
        ranks[j] == ranks[i] + 1 for i, ups in enumerate(L._up) for j in ups
    ) and all(L._up[i] for i in range(len(masks) - 1)) and all(
        L._down[i] for i in range(1, len(masks))
    )
    atoms = [m for m, r in zip(masks, ranks) if r == 0]
    out["atomic"] = sorted(atoms) == sorted(1 << i for i in range(len(L.vertices)))
    facet_masks = [masks[i] for i in L._facet_idx]
    coatomic = True
    for m in masks[:-1]:
        meet = full
        for fmask in facet_masks:
            if fmask & m == m:
                meet &= fmask
        if meet != m:
            coatomic = False
            break
    out["coatomic"] = coatomic
    diamond = True
    for i, ups in enumerate(L._up):
        hits = Counter(c for b in ups for c in L._up[b])
        if any(cnt != 2 for cnt in hits.values()):
            diamond = False
            break
    out["diamond"] = diamond
    # inclusion of vertex sets coincides with the cover order
    incl = True
    for i, ups in enumerate(L._up):
        for j in ups:
            if masks[i] & masks[j] != masks[i] or masks[i] == masks[j]:
                incl = False
    out["inclusion_order"] = incl
    return out
