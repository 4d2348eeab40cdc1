"""Chains of merged P^d copies and their 0/1 profiles."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from functools import lru_cache

from .constructions import cross_polytope, p_d, stack_facet
from .errors import BadDimension, NotAChainLattice
from .lattice import FaceLattice, as_lattice, face_lattice, is_isomorphic, lattice_from_facets
from .merge import MergeSpec, merge_surgery

__all__ = ["Profile", "chain_spec", "build_chain", "profile", "census", "CensusResult"]


@dataclass(frozen=True)
class Profile:
    labels: tuple

    def __str__(self):
        return "".join(map(str, self.labels))


def chain_spec(d: int, i: int, bit: int) -> MergeSpec:
    """Spec for step i: F_i of copy T_i against w_{i+1} = v0 of copy T_{i+1}.

    The CP facet of T_i is H_d (opposite v_{d-2}); bit 0 pairs it with the
    simplex facet at w (neighbour v1 in last position), bit 1 with a bipyramid.
    """
    a, b = f"T{i}.", f"T{i + 1}."
    F = [a + f"u{k}" for k in range(1, d)] + [a + f"v{d - 2}"]
    if bit == 0:
        nb = [b + f"up{k}" for k in range(1, d)] + [b + "v1"]
    elif bit == 1:
        nb = [b + "v1"] + [b + f"up{k}" for k in range(2, d)] + [b + "up1"]
    else:
        raise ValueError(f"bits must be 0 or 1, got {bit}")
    return MergeSpec(F, b + "v0", nb)


def build_chain(d: int, bits) -> FaceLattice:
    """Merge k+1 copies of P^d; ``bits`` holds the k-1 free choices.

    The first step always pairs the CP facet with a bipyramid.
    """
    if d < 4:
        raise BadDimension(f"chains need d >= 4, got {d}")
    bits = [int(b) for b in bits]
    k = len(bits) + 1
    base = p_d(d)
    R = lattice_from_facets(base.with_prefix("T1."))
    for i, bit in enumerate([1] + bits, start=1):
        T = lattice_from_facets(base.with_prefix(f"T{i + 1}."))
        R = merge_surgery(R, T, chain_spec(d, i, bit), prefix="")
    return R


@lru_cache(maxsize=None)
def _special_types(m: int):
    """Reference lattices of CP and of CP with one facet stacked, dimension m."""
    cp = cross_polytope(m)
    stacked = stack_facet(cp, cp.facets[0], "apex")
    return lattice_from_facets(cp), lattice_from_facets(stacked)


def special_facets(L, d: int | None = None) -> dict:
    """Facets of the form CP (label 0) or CP#simplex (label 1).

    Vertex counts 2d-2 / 2d-1 are only a prefilter: for d = 4 a merged
    bipyramid also has 2d-2 vertices, so the type is settled by isomorphism.
    """
    L = as_lattice(L)
    d = L.dim if d is None else d
    cp, stacked = _special_types(d - 1)
    out = {}
    for F in L.facets():
        if len(F) == 2 * d - 2 and is_isomorphic(face_lattice(L, F), cp) is not None:
            out[F] = 0
        elif len(F) == 2 * d - 1 and is_isomorphic(face_lattice(L, F), stacked) is not None:
            out[F] = 1
    return out


def profile(L, d: int | None = None) -> Profile:
    """Path of special facets read from the CP#simplex end."""
    L = as_lattice(L)
    d = L.dim if d is None else d
    if d < 4:
        raise BadDimension("profiles need d >= 4")
    label = special_facets(L, d)
    special = list(label)
    if not special:
        raise NotAChainLattice("no special facets")
    ridge_rank = d - 2
    adj = {F: set() for F in special}
    for F, G in itertools.combinations(special, 2):
        meet = F & G
        if meet in L and L.rank(meet) == ridge_rank:
            adj[F].add(G)
            adj[G].add(F)
    if len(special) == 1:
        return Profile((label[special[0]],))
    ends = [F for F in special if len(adj[F]) == 1]
    edges = sum(len(a) for a in adj.values()) // 2
    if len(ends) != 2 or edges != len(special) - 1 or any(len(a) > 2 for a in adj.values()):
        raise NotAChainLattice("special facets do not form a path")
    ones = [F for F in ends if label[F] == 1]
    zeros = [F for F in ends if label[F] == 0]
    if len(ones) != 1 or len(zeros) != 1:
        raise NotAChainLattice("path endpoints are not labelled 1 and 0")
    walk = [ones[0]]
    prev = None
    while len(walk) < len(special):
        nxt = [G for G in adj[walk[-1]] if G != prev]
        prev = walk[-1]
        walk.append(nxt[0])
    if len(set(walk)) != len(special):
        raise NotAChainLattice("special facets do not form a path")
    return Profile(tuple(label[F] for F in walk))


@dataclass(frozen=True)
class CensusResult:
    d: int
    k: int
    count: int
    profiles: tuple
    pairwise_non_isomorphic: bool


def census(d: int, k: int) -> CensusResult:
    """Build all 2^(k-1) chains; count pairwise non-isomorphic lattices."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lattices, profs = [], []
    for bits in itertools.product((0, 1), repeat=k - 1):
        L = build_chain(d, bits)
        lattices.append(L)
        profs.append(profile(L, d))
    distinct = True
    reps = []
    for L in lattices:
        if any(is_isomorphic(L, R) is not None for R in reps):
            distinct = False
            continue
        reps.append(L)
    return CensusResult(d, k, len(reps), tuple(profs), distinct and len(set(profs)) == len(profs))
