"""Command line interface.

Every subcommand exits with 0 when all of its checks pass, 1 when a check
fails and 2 on bad input (unreadable table, unknown family, bad prime).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import chain, pipeline, suites
from .conglat import all_congruences, is_directly_decomposable, is_subdirectly_irreducible, lattice_shape, lattice_to_dot
from .constructions import build_G3_G5, build_Q4, build_Qpj, build_SR, latin16_family
from .grpmodel import fix_subgroup
from .linfq import is_prime
from .quandle import QuandleError, TableFormatError, coset_quandle, read_table, write_table
from .quiso import are_isomorphic

PROPS = ("latin", "connected", "faithful", "solvable", "si", "dd")


class UsageError(ValueError):
    pass


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if p < 3 or not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not an odd prime")
    return p


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, default=str))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_classify(args) -> int:
    rep = pipeline.table1(args.p, args.tier, tables_dir=args.tables_dir)
    data = rep.as_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(data, indent=2) + "\n")
    c = rep.counts
    print(f"p={args.p} si={c['si']} dd={c['dd']} sr_not_dd={c['sr_not_dd']} exhaustive={rep.exhaustive} total_ms={data['timings_ms']['total']}")
    for k, v in rep.checks.items():
        print(f"  {'ok  ' if v else 'FAIL'} {k}")
    return 0 if rep.ok else 1


def cmd_chain_search(args) -> int:
    primes = sorted(chain.ADMISSIBLE) if args.p == "all" else [_prime(args.p)]
    ok = True
    sizes = []
    out = []
    for p in primes:
        if p not in chain.ADMISSIBLE:
            raise UsageError(f"p = {p} has no admissible dimension; choose from {sorted(chain.ADMISSIBLE)} or 'all'")
        res = chain.chain_search(p, args.tier)
        for q in res.quandles:
            good = q.latin and q.n == 16 * p and lattice_shape(all_congruences(q)).tag == "chain-3"
            ok &= good
            sizes.append(q.n)
        out.append({"p": p, "found": [q.n for q in res.quandles], "coverage": res.coverage, "pairs": [r.as_dict() for r in res.pairs]})
    _emit({"tier": args.tier, "results": out, "sizes": sorted(sizes)})
    return 0 if ok else 1


def _construct(family: str, p: int | None, j: int, a: int):
    if family == "q4":
        return [build_Q4()]
    if family == "latin16":
        return latin16_family()
    if family in ("g3", "g5"):
        (g3, f3), (g5, f5) = build_G3_G5()
        G, f = (g3, f3) if family == "g3" else (g5, f5)
        return [coset_quandle(G, fix_subgroup(f), f)]
    if p is None:
        raise UsageError(f"--p is required for family {family}")
    if p % 3 != 1:
        raise UsageError(f"family {family} needs p = 1 mod 3, got {p}")
    if family == "lss4p":
        return [build_Qpj(p, j)]
    if family == "sr":
        return [build_SR(p, j, a=(a, 0))]
    raise UsageError(f"unknown family {family}")


def cmd_construct(args) -> int:
    qs = _construct(args.family, args.p, args.j, args.a)
    out = Path(args.out)
    if len(qs) == 1:
        write_table(qs[0], out)
        paths = [out]
    else:
        paths = [out.with_name(f"{out.stem}_{i}{out.suffix or '.tbl'}") for i in range(len(qs))]
        for q, path in zip(qs, paths):
            write_table(q, path)
    for q, path in zip(qs, paths):
        print(f"{path}: n={q.n} latin={q.latin}")
    return 0 if all(q.is_quandle() for q in qs) else 1


def cmd_verify(args) -> int:
    q = read_table(args.file)
    props = [s.strip() for s in args.props.split(",") if s.strip()]
    bad = [s for s in props if s not in PROPS]
    if bad:
        raise UsageError(f"unknown properties {bad}; choose from {', '.join(PROPS)}")
    L = None
    result = {}
    for prop in props:
        if prop in ("si", "dd") and L is None:
            L = all_congruences(q)
        result[prop] = {
            "latin": lambda: q.latin,
            "connected": lambda: q.connected,
            "faithful": lambda: q.faithful,
            "solvable": lambda: q.dis.is_solvable(),
            "si": lambda: is_subdirectly_irreducible(L),
            "dd": lambda: is_directly_decomposable(q, L),
        }[prop]()
    for k, v in result.items():
        print(f"{k}: {v}")
    return 0 if all(result.values()) else 1


def cmd_lattice(args) -> int:
    q = read_table(args.file)
    L = all_congruences(q)
    Path(args.dot).write_text(lattice_to_dot(L))
    print(f"{len(L)} congruences, shape {lattice_shape(L)}")
    return 0


def cmd_iso(args) -> int:
    a, b = read_table(args.a), read_table(args.b)
    phi = are_isomorphic(a, b)
    if phi is None:
        print("not isomorphic")
        return 1
    print("isomorphic")
    print(" ".join(str(int(v)) for v in phi))
    return 0


def cmd_suite(args) -> int:
    if args.name == "counting" and args.p is None:
        args.p = 7
    rep = suites.SUITES[args.name](args.p)
    for k, v in rep.checks.items():
        print(f"{'ok  ' if v else 'FAIL'} {k}")
    details = {k: v for k, v in rep.details.items() if k != "per_quandle"}
    print(json.dumps(details, default=str))
    print(f"{rep.name}: {'pass' if rep.ok else 'FAIL'} in {rep.seconds:.1f}s")
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quandle16p", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="count latin quandles of size 16p by family")
    s.add_argument("--p", type=_prime, required=True)
    s.add_argument("--tier", type=int, choices=(1, 2, 3), default=2)
    s.add_argument("--out", help="write the JSON report here")
    s.add_argument("--tables-dir", dest="tables_dir", help="write one table file per class into this directory")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("chain-search", help="search the coset quandles with a 3-chain lattice")
    s.add_argument("--p", required=True, help="an admissible prime or 'all'")
    s.add_argument("--tier", type=int, choices=(1, 2, 3), required=True)
    s.set_defaults(func=cmd_chain_search)

    s = sub.add_parser("construct", help="write a named quandle as a table file")
    s.add_argument("--family", required=True, choices=("sr", "lss4p", "latin16", "q4", "g3", "g5"))
    s.add_argument("--p", type=_prime)
    s.add_argument("--j", type=int, choices=(1, 2), default=1)
    s.add_argument("--a", type=int, choices=(0, 1), default=1, help="first coordinate of the twist for sr (default 1)")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", help="check properties of a table file")
    s.add_argument("--file", required=True)
    s.add_argument("--props", required=True, help=",".join(PROPS))
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("lattice", help="congruence lattice as a DOT Hasse diagram")
    s.add_argument("--file", required=True)
    s.add_argument("--dot", required=True)
    s.set_defaults(func=cmd_lattice)

    s = sub.add_parser("iso", help="decide isomorphism of two connected quandles")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("suite", help="run a verification suite")
    s.add_argument("--name", required=True, choices=tuple(suites.SUITES))
    s.add_argument("--p", type=_prime)
    s.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (TableFormatError, UsageError, QuandleError, argparse.ArgumentTypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
