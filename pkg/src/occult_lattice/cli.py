"""Command-line driver: ``occult-lattice <subcommand> ...``.

Lattice arguments are either a path to a lattice file or a catalog
expression such as ``U(3)``, ``L6prime`` or ``"U(2)^2+D8(-1)+A1(-1)^2"``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import catalog as cat
from .embedding import EmbeddingMap, find_primitive_embedding, invariants_match, isometric_definite, orthogonal_complement
from .enumeration import d_value
from .isometry import (
    CyclotomicProfile,
    MuActionDatum,
    ball_dimension,
    cyclotomic_profile,
    disc_action_trivial,
    fixed_sublattice,
    order_of,
    orthogonal_group_order_mod_p,
    verify_isometry,
)
from .lattice import Lattice, LatticeError, delta, determinant, is_definite, is_even, make_catalog, signature
from .normal_forms import discriminant_form, discriminant_group
from .textio import load_isometry_file, load_lattice_file

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2

# Named period-domain data: (n, profile, invariant rank).
DATUMS = {
    "genus4": (3, {1: 2, 3: 10}, 2),
    "genus3": (4, {1: 8, 4: 7}, 8),
    "genus6": (2, {1: 5, 2: 17}, 5),
    "fivepoints": (5, {1: 10, 5: 3}, 10),
    "cubic": (3, {1: 12, 3: 5}, 12),
    "sixpoints": (3, {1: 14, 3: 4}, 14),
}


def resolve_lattice(arg: str) -> Lattice:
    p = Path(arg)
    if p.is_file():
        return load_lattice_file(p)
    return cat.lattice_from_expr(arg)


def _rows(m) -> str:
    return "\n".join(" ".join(f"{x:>3}" for x in row) for row in m)


def _info_lines(lat: Lattice) -> list[str]:
    sig = signature(lat)
    return [
        f"label      {lat.label}",
        f"rank       {lat.rank}",
        f"det        {determinant(lat)}",
        f"signature  ({sig.pos},{sig.neg})",
        f"parity     {'even' if is_even(lat) else 'odd'}",
        f"disc       {discriminant_group(lat)}",
    ]


def cmd_info(args) -> int:
    print("\n".join(_info_lines(resolve_lattice(args.lattice))))
    return EXIT_OK


def cmd_disc(args) -> int:
    lat = resolve_lattice(args.lattice)
    q = discriminant_form(lat)
    print(f"group      {q.group}")
    print(f"order      {delta(lat)}")
    print("q (mod 2)  " + " ".join(str(v) for v in q.q_values))
    if q.b_matrix:
        print("b (mod 1)")
        print("\n".join("  " + " ".join(f"{str(v):>5}" for v in row) for row in q.b_matrix))
    return EXIT_OK


def cmd_dvalue(args) -> int:
    dv = d_value(resolve_lattice(args.lattice), args.box)
    print(f"gcd        {dv.gcd}")
    print(f"lower      {dv.certified_lower_bound}")
    print(f"exact      {'yes' if dv.exact else 'no'}")
    print(f"stable     {'yes' if dv.stabilized else 'no'}")
    print(f"box        {dv.box}")
    for deg, v in sorted(dv.witnesses.items()):
        print(f"witness    degree {deg}: {' '.join(map(str, v))}")
    return EXIT_OK


def _embedding(m_arg: str, l_arg: str, box) -> EmbeddingMap | None:
    m, l = resolve_lattice(m_arg), resolve_lattice(l_arg)
    entry = cat.ENTRIES.get(m_arg)
    if entry is not None and entry.witness_columns is not None and l.gram == make_catalog("LK3").gram:
        return entry.embedding_witness
    return find_primitive_embedding(m, l, box)


def cmd_embed(args) -> int:
    e = _embedding(args.source, args.target, args.box)
    if e is None:
        print("no primitive embedding found within the search box")
        return EXIT_NEGATIVE
    print("primitive embedding (columns are images):")
    print(_rows(e.matrix))
    return EXIT_OK


def cmd_complement(args) -> int:
    e = _embedding(args.source, args.target, args.box)
    if e is None:
        print("no primitive embedding found within the search box")
        return EXIT_NEGATIVE
    comp, basis = orthogonal_complement(e)
    print("\n".join(_info_lines(comp)))
    print("gram")
    print(_rows(comp.gram))
    if args.basis:
        print("basis (columns, ambient coordinates)")
        print(_rows(basis))
    return EXIT_OK


def cmd_match(args) -> int:
    a, b = resolve_lattice(args.first), resolve_lattice(args.second)
    if is_definite(a) and is_definite(b):
        t = isometric_definite(a, b)
        print("isometric" if t is not None else "not isometric")
        if t is not None:
            print(_rows(t))
        return EXIT_OK if t is not None else EXIT_NEGATIVE
    ok = invariants_match(a, b)
    print("invariants match" if ok else "invariants differ")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_profile(args) -> int:
    lat = resolve_lattice(args.lattice)
    _, rows = load_isometry_file(args.isometry)
    g = verify_isometry(lat, rows)
    order = order_of(g)
    if order is None:
        print("infinite order (or beyond the order cutoff)")
        return EXIT_NEGATIVE
    prof = cyclotomic_profile(g)
    fixed, _ = fixed_sublattice(g)
    print(f"order      {order}")
    print(f"profile    {prof}")
    print(f"fixed rank {0 if fixed is None else fixed.rank}")
    if is_even(lat):
        print(f"disc-trivial {'yes' if disc_action_trivial(g) else 'no'}")
    return EXIT_OK


def _parse_profile(text: str) -> dict[int, int]:
    out = {}
    for part in text.split(","):
        k, _, m = part.partition(":")
        out[int(k)] = int(m)
    return out


def cmd_balldim(args) -> int:
    if args.datum:
        n, mult, inv = DATUMS[args.datum]
    else:
        if args.n is None or args.profile is None:
            raise LatticeError("give --datum, or both --n and --profile")
        n, mult = args.n, _parse_profile(args.profile)
        inv = mult.get(1, 0)
    print(ball_dimension(MuActionDatum(n, CyclotomicProfile.of(mult), inv)))
    return EXIT_OK


def cmd_grouporder(args) -> int:
    q = discriminant_form(resolve_lattice(args.lattice))
    factors = q.group.invariant_factors
    p = args.p or (factors[0] if factors else 2)
    print(orthogonal_group_order_mod_p(q, p))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .suite import emit_report, run_paper_suite

    selection = [s for part in args.only for s in part.split(",") if s] if args.only else None
    report = run_paper_suite(selection, timings=args.timings)
    sys.stdout.buffer.write(emit_report(report, args.format))
    sys.stdout.flush()
    if args.figures:
        from .plotting import render_figures

        for path in render_figures(report, args.figures):
            print(f"figure: {path}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="occult-lattice", description="Exact integral-lattice toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="rank, det, signature, parity, disc group")
    p.add_argument("lattice")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("disc", help="discriminant form")
    p.add_argument("lattice")
    p.set_defaults(func=cmd_disc)

    p = sub.add_parser("dvalue", help="boxed computation of d(L)")
    p.add_argument("lattice")
    p.add_argument("--box", type=int, default=None)
    p.set_defaults(func=cmd_dvalue)

    for name, func, helptext in (
        ("embed", cmd_embed, "find a primitive embedding M -> L"),
        ("complement", cmd_complement, "orthogonal complement of M in L"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("source")
        p.add_argument("target")
        p.add_argument("--box", type=int, default=None)
        if name == "complement":
            p.add_argument("--basis", action="store_true", help="also print the complement basis")
        p.set_defaults(func=func)

    p = sub.add_parser("match", help="decide whether two lattices are isomorphic")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("profile", help="order and cyclotomic profile of an isometry")
    p.add_argument("lattice")
    p.add_argument("isometry", help="isometry file")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("balldim", help="period-domain dimension")
    p.add_argument("--datum", choices=sorted(DATUMS))
    p.add_argument("--n", type=int)
    p.add_argument("--profile", help="multiplicities as k:m pairs, e.g. 1:2,3:10")
    p.set_defaults(func=cmd_balldim)

    p = sub.add_parser("grouporder", help="|O(q)| of an elementary discriminant form")
    p.add_argument("lattice")
    p.add_argument("--p", type=int, default=None)
    p.set_defaults(func=cmd_grouporder)

    p = sub.add_parser("verify-paper", help="run the catalog verification suite")
    p.add_argument("--only", action="append", help="check ids or id prefixes, comma separated")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--timings", action="store_true", help="record per-check runtimes")
    p.add_argument("--figures", metavar="DIR", help="also write summary figures to DIR")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LatticeError, ValueError, KeyError, OSError, RuntimeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
