"""Structural predicates (j-simplicial, i-simple) and f-vector identities."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .errors import DimensionMismatch, PreconditionFailed, RankOutOfRange
from .lattice import as_lattice

__all__ = [
    "SimplicialityReport",
    "simplicity_report",
    "is_j_simplicial",
    "is_i_simple",
    "simple_vertices",
    "simplex_facets",
    "check_ratio_criterion",
    "toric_g2_4d",
    "toric_g3_5d",
    "euler_check",
    "FVectorSolution",
    "solve_5d_fvector",
]


@dataclass(frozen=True)
class SimplicialityReport:
    max_j_simplicial: int
    max_i_simple: int
    simple_vertices: frozenset
    simplex_facets: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "max_j_simplicial": self.max_j_simplicial,
            "max_i_simple": self.max_i_simple,
            "simple_vertices": sorted(self.simple_vertices),
            "simplex_facets": [sorted(f) for f in self.simplex_facets],
        }


def _check_range(L, k, name):
    if not 1 <= k <= L.dim - 1:
        raise RankOutOfRange(f"{name} must lie in [1, {L.dim - 1}], got {k}")


def is_j_simplicial(L, j: int) -> bool:
    """Every rank-j face has exactly j+1 vertices."""
    L = as_lattice(L)
    _check_range(L, j, "j")
    return all(len(f) == j + 1 for f in L.faces(j))


def is_i_simple(L, i: int) -> bool:
    """Every rank-(d-i-1) face lies in exactly i+1 facets."""
    L = as_lattice(L)
    _check_range(L, i, "i")
    r = L.dim - i - 1
    return all(
        bin(fm).count("1") == i + 1
        for fm, rk in zip(L._fmask, L._rank) if rk == r
    )


def simple_vertices(L) -> frozenset:
    L = as_lattice(L)
    return frozenset(v for v in L.vertices if L.degree(v) == L.dim)


def simplex_facets(L) -> list:
    L = as_lattice(L)
    return [F for F in L.facets() if len(F) == L.dim]


def simplicity_report(L) -> SimplicialityReport:
    L = as_lattice(L)
    d = L.dim
    mj = 1 if d >= 2 else 0
    for j in range(1, d):
        if is_j_simplicial(L, j):
            mj = j
        else:
            break
    mi = 1 if d >= 2 else 0
    for i in range(1, d):
        if is_i_simple(L, i):
            mi = i
        else:
            break
    return SimplicialityReport(mj, mi, simple_vertices(L), tuple(simplex_facets(L)))


def check_ratio_criterion(L, i: int) -> bool:
    """(d-i+1) f_{d-i} == (i+1) f_{d-i-1} for a (d-i)-simplicial lattice."""
    L = as_lattice(L)
    _check_range(L, i, "i")
    d = L.dim
    if not is_j_simplicial(L, d - i):
        raise PreconditionFailed(f"lattice is not {d - i}-simplicial")
    f = L.f_vector()
    return (d - i + 1) * f[d - i] == (i + 1) * f[d - i - 1]


def toric_g2_4d(L) -> int:
    L = as_lattice(L)
    if L.dim != 4:
        raise DimensionMismatch(f"g2 functional needs d=4, got {L.dim}")
    if not is_j_simplicial(L, 2):
        raise PreconditionFailed("lattice is not 2-simplicial")
    f = L.f_vector()
    return f[1] - 4 * f[0] + 10


def toric_g3_5d(L) -> int:
    L = as_lattice(L)
    if L.dim != 5:
        raise DimensionMismatch(f"g3 functional needs d=5, got {L.dim}")
    if not is_j_simplicial(L, 3):
        raise PreconditionFailed("lattice is not 3-simplicial")
    f = L.f_vector()
    return f[2] - 4 * f[1] + 10 * f[0] - 20


def euler_check(L) -> bool:
    L = as_lattice(L)
    d = L.dim
    return sum((-1) ** j * fj for j, fj in enumerate(L.f_vector())) == 1 - (-1) ** d


@dataclass(frozen=True)
class FVectorSolution:
    fvector: tuple
    feasible: bool
    reason: str

    def to_dict(self) -> dict:
        return {"fvector": list(self.fvector), "feasible": self.feasible, "reason": self.reason}


def solve_5d_fvector(f0: int, f1: int):
    """f-vector forced on a 3-simplicial 2-simple 5-polytope by (f0, f1).

    Uses g3 = 0, 4 f3 = 3 f2 (ratio criterion) and Euler's relation.
    Returns None when an entry is negative or not an integer; otherwise the
    solution carries the check f3 <= C(f4, 2) (each ridge lies in two
    facets, and simple 2-simplicial duality pairs ridges with facet pairs).
    """
    f2 = 4 * f1 - 10 * f0 + 20
    if f2 < 0 or (3 * f2) % 4:
        return None
    f3 = 3 * f2 // 4
    f4 = 2 - f0 + f1 - f2 + f3
    fv = (f0, f1, f2, f3, f4)
    if any(x < 0 for x in fv):
        return None
    bound = comb(f4, 2)
    if f3 > bound:
        return FVectorSolution(fv, False, f"f3={f3} exceeds C(f4,2)={bound}")
    return FVectorSolution(fv, True, f"f3={f3} <= C(f4,2)={bound}")
