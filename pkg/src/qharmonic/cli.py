"""Command line front end.

Exit status: 0 when everything requested succeeded (for ``verify``: no
failing check), 1 when a check failed, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .combinat import B4_SECOND_KIND_NOTE, bernoulli, bernoulli2, k_poly, k_value
from .exact import NonUnitError
from .qmhs import Index, h_norm, h_sum, p_series
from .rings import Modulus, Residue, is_prime, one_minus_q
from .verify import CHECK_IDS, CHECKS, VerifyConfig, parse_prime_range, run_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def compact_form(r: Residue, weight: int) -> Fraction | None:
    """``c`` if ``r`` equals c*(1-q)^weight in its ring, else ``None``."""
    return (r / one_minus_q(r.ring) ** weight).constant_value()


def render_residue(r: Residue, weight: int = 0) -> str:
    c = compact_form(r, weight)
    if c is None:
        return str(r)
    if weight == 0:
        return str(c)
    power = "(1-q)" if weight == 1 else f"(1-q)^{weight}"
    return f"{c}*{power}\n  = {r}"


def cmd_compute(args) -> int:
    try:
        idx = Index.parse(args.index, args.modifier)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    p = args.prime
    n = p - 1 if args.upto is None else args.upto
    m = Modulus(p, args.exponent)
    try:
        if args.normalized:
            r = h_norm(idx, n, m)
        else:
            r = h_sum(idx, n, m)
    except NonUnitError as exc:
        raise UsageError(f"sum is undefined modulo [{p}]_q^{args.exponent}: {exc}") from None
    print(render_residue(r, 0 if args.normalized else idx.weight))
    return EXIT_OK


def cmd_series(args) -> int:
    N = args.order
    if N < 0:
        raise UsageError("order must be nonnegative")
    if args.kind == "pn":
        if args.prime is None:
            raise UsageError("--pn needs --prime")
        for n, v in enumerate(p_series(args.prime, N)):
            print(f"P_{n} = {v}")
    elif args.kind == "bernoulli":
        for n in range(N + 1):
            print(f"B_{n} = {bernoulli(n)}")
    elif args.kind == "bernoulli2":
        for n in range(N + 1):
            print(f"b_{n} = {bernoulli2(n)}")
        if N >= 4:
            print(f"note: {B4_SECOND_KIND_NOTE}")
    else:
        for n in range(2, N + 1):
            if args.prime is None:
                print(f"K_{n}(p) = {k_poly(n).as_poly}")
            else:
                print(f"K_{n}({args.prime}) = {k_value(n, args.prime)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    primes = parse_prime_range(args.primes)
    if not primes:
        raise UsageError(f"no primes in range {args.primes}")
    checks = None
    if args.checks:
        checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise UsageError(f"unknown check id(s): {', '.join(unknown)}")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    config = VerifyConfig(
        primes=primes,
        max_depth=args.max_depth,
        max_order=args.max_order,
        max_s=args.max_s,
        max_m=args.max_m,
        max_half_n=args.max_half_n,
        stuffle_pairs=args.stuffle_pairs,
        seed=args.seed,
        checks=checks,
        jobs=args.jobs,
    )
    report = run_all(config)
    text = {"text": report.to_text, "json": report.to_json, "csv": report.to_csv}[args.format]()
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_list_checks(args) -> int:
    for cid in CHECK_IDS:
        print(f"{cid:15} {CHECKS[cid].statement}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qharmonic",
        description="q-analogs of multiple harmonic sums modulo powers of [p]_q",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="evaluate one sum as a residue")
    c.add_argument("--prime", type=_prime, required=True)
    c.add_argument("--index", required=True, help="exponents s1,s2,...")
    c.add_argument("--modifier", help="modifier t1,t2,... (default all zero)")
    c.add_argument("--exponent", type=int, choices=(1, 2), default=1,
                   help="work modulo [p]_q^exponent")
    c.add_argument("--upto", type=int, help="upper summation limit (default p-1)")
    c.add_argument("--normalized", action="store_true",
                   help="divide by (1-q)^weight")
    c.set_defaults(func=cmd_compute)

    s = sub.add_parser("series", help="print generating-function coefficients")
    kind = s.add_mutually_exclusive_group(required=True)
    kind.add_argument("--pn", dest="kind", action="store_const", const="pn")
    kind.add_argument("--bernoulli", dest="kind", action="store_const", const="bernoulli")
    kind.add_argument("--bernoulli2", dest="kind", action="store_const", const="bernoulli2")
    kind.add_argument("--k", dest="kind", action="store_const", const="k",
                      help="K_n(p), symbolic unless --prime is given")
    s.add_argument("--prime", type=_prime)
    s.add_argument("--order", type=int, default=8)
    s.set_defaults(func=cmd_series)

    v = sub.add_parser("verify", help="run the congruence catalog")
    d = VerifyConfig()
    v.add_argument("--primes", default="2..31", help="inclusive range a..b")
    v.add_argument("--checks", help="comma separated check ids (default all)")
    v.add_argument("--max-depth", type=int, default=d.max_depth)
    v.add_argument("--max-order", type=int, default=d.max_order)
    v.add_argument("--max-s", type=int, default=d.max_s)
    v.add_argument("--max-m", type=int, default=d.max_m)
    v.add_argument("--max-half-n", type=int, default=d.max_half_n)
    v.add_argument("--stuffle-pairs", type=int, default=d.stuffle_pairs)
    v.add_argument("--seed", type=int, default=d.seed)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--format", choices=("text", "json", "csv"), default="text")
    v.add_argument("--output", help="write the report here instead of stdout")
    v.set_defaults(func=cmd_verify)

    ls = sub.add_parser("list-checks", help="list check ids and statements")
    ls.set_defaults(func=cmd_list_checks)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
