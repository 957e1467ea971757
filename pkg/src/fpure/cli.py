"""Command-line front end.

    fpure enumerate --field 2 --vars x,y --u "x*y" --e 1 --format json
    fpure hash --field 2 --vars x,y --u "x*y" "x" "y^2"
    fpure check-fixed --field 2 --vars x,y --u "x*y" "x"
    fpure eth-root --field 2 --vars x,y --e 1 "x^3*y"

Exit status: 0 success, 1 usage or parse error, 2 search limits exceeded
(partial output flagged ``"complete": false``), 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter

from .cartier import CartierMap, InvariantViolation, eth_root, hash_op, is_compatible, is_fixed
from .enumerator import STRATEGIES, LimitExceeded, Limits, enumerate_fixed
from .ffield import parse_field
from .ideals import Ideal, _nakayama_basis, maximal_ideal
from .polyring import PolynomialRing

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_LIMITS = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; 2 is reserved for exhausted limits here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env_number(name, kind):
    v = os.environ.get(name)
    if v is None or v.strip() == "":
        return None
    try:
        return kind(v)
    except ValueError:
        raise UsageError(f"{name}={v!r} is not a number") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", required=True, help='"p" or "q:c0,...,cf" (modulus, constant term first)')
    common.add_argument("--vars", required=True, help="comma separated variable names")
    common.add_argument("--e", type=int, default=1, help="Frobenius exponent e >= 1")
    common.add_argument("--format", choices=("text", "json"), default="text")

    with_u = argparse.ArgumentParser(add_help=False)
    with_u.add_argument("--u", required=True, help="the polynomial u of phi = u * Phi_e")

    p = _Parser(prog="fpure", description="Fixed ideals of Cartier maps u * Phi_e on F_q[x_1..x_d].")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eth-root", parents=[common], help="the e-th root ideal I_e(<gens>)")
    s.add_argument("gens", nargs="*")

    s = sub.add_parser("hash", parents=[common, with_u], help="the greatest fixed ideal inside <gens>")
    s.add_argument("gens", nargs="*")

    s = sub.add_parser("check-fixed", parents=[common, with_u], help="classify <gens> as fixed, compatible or neither")
    s.add_argument("gens", nargs="*")

    s = sub.add_parser("enumerate", parents=[common, with_u], help="all fixed ideals")
    s.add_argument("--max-nodes", type=int, default=None,
                   help="node budget (default $FPURE_MAX_NODES or 1000000)")
    s.add_argument("--max-seconds", type=float, default=None,
                   help="wall-clock budget (default $FPURE_MAX_SECONDS or unlimited)")
    s.add_argument("--trace", action="store_true", help="write search events as JSON lines to stderr")
    s.add_argument("--jobs", type=int, default=1, help="worker processes for sibling nodes")
    s.add_argument("--strategy", choices=STRATEGIES, default="auto")
    return p


def _ring(args):
    field = parse_field(args.field)
    names = [v.strip() for v in args.vars.split(",")]
    return PolynomialRing(field, names)


def _phi(args, ring):
    if args.e < 1:
        raise UsageError("--e must be >= 1")
    return CartierMap(ring.parse(args.u), args.e)


def _header(args, ring, phi=None):
    out = {"field": str(ring.field), "vars": list(ring.variables), "e": args.e}
    if phi is not None:
        out["u"] = str(phi.u)
    return out


def _show(ideal: Ideal) -> str:
    return str(ideal)


def _category(I: Ideal, m: Ideal) -> str:
    if I.is_zero():
        return "zero ideal"
    if I.is_unit():
        return "unit ideal"
    if not I.in_maximal_ideal():
        return "not inside the maximal ideal of the origin"
    s = len(_nakayama_basis(I, m * I))
    return f"{s} minimal generator" + ("s" if s != 1 else "")


def _print_enumeration(res, args, out):
    if args.format == "json":
        out.write(json.dumps(res.to_json(), indent=2, sort_keys=False) + "\n")
        return
    ring = res.phi.ring
    m = maximal_ideal(ring)
    status = "complete" if res.complete else "INCOMPLETE (limits exceeded)"
    out.write(f"phi = ({res.phi.u}) * Phi_{res.phi.e} on F_{ring.field.q}[{','.join(ring.variables)}]\n")
    out.write(f"{len(res)} fixed ideals, {status}\n")
    for I in res.sorted():
        out.write(f"  {_show(I)}\n")
    cats = Counter(_category(I, m) for I in res.sorted())
    out.write("summary:\n")

    def rank(c):
        if c == "unit ideal":
            return (0, 0)
        if c[0].isdigit():
            return (1, -int(c.split()[0]))
        return (2, 0) if c != "zero ideal" else (3, 0)

    for c in sorted(cats, key=rank):
        out.write(f"  {c}: {cats[c]}\n")
    stats = ", ".join(f"{k}={v}" for k, v in res.stats.items())
    out.write(f"stats: {stats}\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ring = _ring(args)
        gens = [ring.parse(g) for g in getattr(args, "gens", [])]
        J = Ideal(ring, gens)
        if args.command == "eth-root":
            if args.e < 1:
                raise UsageError("--e must be >= 1")
            R = eth_root(J, args.e)
            if args.format == "json":
                out.write(json.dumps({**_header(args, ring), "ideal": R.generator_strings()}) + "\n")
            else:
                out.write(_show(R) + "\n")
            return EXIT_OK
        phi = _phi(args, ring)
        if args.command == "hash":
            H = hash_op(phi, J)
            if args.format == "json":
                out.write(json.dumps({**_header(args, ring, phi), "ideal": H.generator_strings()}) + "\n")
            else:
                out.write(_show(H) + "\n")
            return EXIT_OK
        if args.command == "check-fixed":
            verdict = "fixed" if is_fixed(phi, J) else "compatible" if is_compatible(phi, J) else "neither"
            if args.format == "json":
                out.write(json.dumps({**_header(args, ring, phi), "ideal": J.generator_strings(),
                                      "verdict": verdict}) + "\n")
            else:
                out.write(verdict + "\n")
            return EXIT_OK
        # enumerate
        max_nodes = args.max_nodes
        if max_nodes is None:
            max_nodes = _env_number("FPURE_MAX_NODES", int)
        max_seconds = args.max_seconds
        if max_seconds is None:
            max_seconds = _env_number("FPURE_MAX_SECONDS", float)
        limits = Limits() if max_nodes is None else Limits(max_nodes=max_nodes)
        limits.max_seconds = max_seconds
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        try:
            res = enumerate_fixed(phi, limits, trace=err if args.trace else None,
                                  jobs=args.jobs, strategy=args.strategy)
        except LimitExceeded as ex:
            _print_enumeration(ex.partial, args, out)
            err.write(f"fpure: {ex}; output is incomplete\n")
            return EXIT_LIMITS
        _print_enumeration(res, args, out)
        return EXIT_OK
    except InvariantViolation as ex:
        err.write(f"fpure: internal error: {ex}\n")
        return EXIT_INTERNAL
    except (UsageError, ValueError, ZeroDivisionError) as ex:
        err.write(f"fpure: error: {ex}\n")
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
