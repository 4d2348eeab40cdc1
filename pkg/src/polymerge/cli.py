"""Command-line front end.

Every verb reads and writes the JSON formats of the library on standard
streams; file arguments are optional.  Exit status: 0 success, 1 domain
error (JSON on stderr), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import constructions, geometry
from .errors import PolytopeError
from .lattice import FacetList, dual, f_vector, is_isomorphic, lattice_from_facets
from .merge import MergeSpec, check_merge_fvector, merge_quotient, merge_surgery
from .profiles import build_chain, census
from .verify import is_i_simple, is_j_simplicial, simplicity_report


class InputError(PolytopeError):
    pass


def _read(path):
    try:
        if path in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
        return json.loads(text)
    except OSError as exc:
        raise InputError(str(exc)) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _lattice(path):
    return lattice_from_facets(FacetList.from_dict(_read(path)))


def _emit(args, text: str):
    out = getattr(args, "output", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _emit_json(args, obj):
    _emit(args, json.dumps(obj, sort_keys=False))


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None


def _labels(s: str) -> list:
    return [x.strip() for x in s.split(",") if x.strip()]


def cmd_construct(args):
    name = args.name
    if args.points:
        if name == "demicube":
            pts = constructions.demicube(args.d or 5)
        elif name == "p18_prime":
            pts = constructions.p18_prime(args.eps or Fraction(1, 20), args.h or Fraction(2))
        elif name == "p_d":
            pts = geometry.p_d_geometric(args.d or 4, args.eps or Fraction(1, 10))
        else:
            raise InputError(f"{name} has no coordinate form")
        _emit_json(args, pts.to_dict())
        return
    fl = constructions.build(name, args.d, args.eps, args.h)
    _emit_json(args, fl.to_dict())


def cmd_hull(args):
    pts = geometry.RationalPolytope.from_dict(_read(args.points))
    _emit_json(args, geometry.hull(pts).to_dict())


def cmd_merge(args):
    L1, L2 = _lattice(args.first), _lattice(args.second)
    spec = MergeSpec(_labels(args.facet), args.vertex, _labels(args.neighbors))
    M = merge_surgery(L1, L2, spec, prefix=args.prefix)
    if args.check_quotient is not None:
        Q = merge_quotient(L1, L2, spec, args.check_quotient, prefix=args.prefix)
        if Q != M:
            raise PolytopeError("quotient lattice differs from the surgery result")
    if not check_merge_fvector(L1, L2, M):
        raise PolytopeError("merged f-vector violates the merge identity")
    _emit_json(args, M.to_facet_list().to_dict())


def cmd_verify(args):
    L = _lattice(args.lattice)
    rep = simplicity_report(L)
    ok = True
    checks = {}
    if args.simplicial is not None:
        checks[f"{args.simplicial}-simplicial"] = is_j_simplicial(L, args.simplicial)
    if args.simple is not None:
        checks[f"{args.simple}-simple"] = is_i_simple(L, args.simple)
    ok = all(checks.values())
    out = {"pass": ok, "checks": checks, "dim": L.dim, "f_vector": list(L.f_vector())}
    out.update(rep.to_dict())
    _emit_json(args, out)


def cmd_census(args):
    res = census(args.d, args.k)
    lines = [str(res.count)] + [str(p) for p in res.profiles]
    _emit(args, "\n".join(lines))


def cmd_chain(args):
    bits = [int(c) for c in args.bits] if args.bits else []
    if any(b not in (0, 1) for b in bits):
        raise InputError("bits must be a 0/1 string")
    _emit_json(args, build_chain(args.d, bits).to_facet_list().to_dict())


def cmd_fvector(args):
    _emit(args, " ".join(map(str, f_vector(_lattice(args.lattice)))))


def cmd_dualize(args):
    _emit_json(args, dual(_lattice(args.lattice)).to_facet_list().to_dict())


def cmd_compare(args):
    m = is_isomorphic(_lattice(args.first), _lattice(args.second))
    _emit_json(args, {"isomorphic": m is not None, "map": dict(sorted(m.items())) if m else None})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polymerge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def out(sp):
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")

    sp = sub.add_parser("construct", help="emit a named polytope")
    sp.add_argument("name", choices=constructions.CATALOG)
    sp.add_argument("--d", type=int)
    sp.add_argument("--eps", type=_rational)
    sp.add_argument("--h", type=_rational)
    sp.add_argument("--points", action="store_true", help="emit coordinates instead of facets")
    out(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("hull", help="facets of the convex hull of rational points")
    sp.add_argument("points", nargs="?")
    out(sp)
    sp.set_defaults(func=cmd_hull)

    sp = sub.add_parser("merge", help="merge two lattices along a simplex facet and a simple vertex")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--facet", required=True)
    sp.add_argument("--vertex", required=True)
    sp.add_argument("--neighbors", required=True)
    sp.add_argument("--check-quotient", type=int, metavar="I")
    sp.add_argument("--prefix")
    out(sp)
    sp.set_defaults(func=cmd_merge)

    sp = sub.add_parser("verify", help="simpliciality/simplicity report")
    sp.add_argument("lattice", nargs="?")
    sp.add_argument("--simplicial", type=int, metavar="J")
    sp.add_argument("--simple", type=int, metavar="I")
    out(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("census", help="count chain types")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    out(sp)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("chain", help="build a merged chain of P^d copies")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--bits", default="")
    out(sp)
    sp.set_defaults(func=cmd_chain)

    for verb, func, helptext in (
        ("fvector", cmd_fvector, "print the f-vector"),
        ("dualize", cmd_dualize, "emit the dual lattice"),
    ):
        sp = sub.add_parser(verb, help=helptext)
        sp.add_argument("lattice", nargs="?")
        out(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("compare", help="lattice isomorphism test")
    sp.add_argument("first")
    sp.add_argument("second")
    out(sp)
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except PolytopeError as exc:
        sys.stderr.write(json.dumps(exc.to_dict()) + "\n")
        return 1
    except (KeyError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
