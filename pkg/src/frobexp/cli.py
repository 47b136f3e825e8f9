"""Command-line interface. Every command reads and writes canonical JSON.

Exit status: 0 on success, 1 when a verification report records failures,
2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import sys

from . import bch, dist, heisenberg, oneparam, rootdata
from .errors import FrobexpError
from .fields import prime_field
from .jsonio import emit, load
from .matrices import CommutingTuple, SquareMatrix
from .report import Report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        raise SystemExit(EXIT_USAGE)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer, got %s" % text)
    return value


def _blocks(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(b) for b in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("blocks must look like 1,2,1") from None


def _read_matrix(args) -> SquareMatrix:
    field = prime_field(args.p) if args.p is not None else None
    obj = load(args.inp)
    if isinstance(obj, list):
        obj = {"rows": obj}
    return SquareMatrix.from_json(obj, field)


def _finish(result, args) -> int:
    if isinstance(result, Report):
        emit(result.to_dict(), args.out)
        return EXIT_OK if result.passed else EXIT_FAIL
    emit(result, args.out)
    return EXIT_OK


# commands


def cmd_exp(args):
    return oneparam.exp_p(_read_matrix(args)).to_json()


def cmd_log(args):
    return oneparam.log_p(_read_matrix(args)).to_json()


def cmd_lift(args):
    tup = CommutingTuple.from_json(load(args.inp))
    return oneparam.lift(tup, args.r).to_json()


def cmd_decompose(args):
    obj = load(args.inp)
    return oneparam.decompose(oneparam._polymatrix_from_file(obj)).to_json()


def cmd_saturate(args):
    g = _read_matrix(args)
    phi = oneparam.saturate(g, args.r)
    out = phi.to_json()
    out["verification"] = {
        "homomorphism": oneparam.verify_homomorphism(phi),
        "phi_at_1_is_g": phi.evaluate(1) == g,
    }
    return out


def cmd_verify_bijection(args):
    return oneparam.verify_bijection(prime_field(args.p), args.n, args.r, args.samples, args.seed, args.jobs)


def cmd_verify_axioms(args):
    cand = oneparam.ExponentialCandidate(prime_field(args.p), args.n)
    return oneparam.verify_exponential_axioms(cand, samples=args.samples, seed=args.seed)


def cmd_verify_bch(args):
    model = bch.UnipotentRadicalModel(prime_field(args.p), args.blocks)
    other = bch.UnipotentRadicalModel(prime_field(args.p), args.blocks_j or args.blocks)
    report = Report(
        "bch",
        {"p": args.p, "blocks": list(model.blocks), "blocks_J": list(other.blocks), "samples": args.samples, "seed": args.seed},
    )
    parts = (
        bch.check_group_axioms(model, args.samples, args.seed),
        bch.check_P_equivariance(model, args.samples, args.seed + 1),
        bch.check_cross_parabolic(model, other, args.samples, args.seed + 2),
    )
    for part in parts:
        for name, (evaluated, failed) in part.tallies.items():
            tally = report.tallies.setdefault(name, [0, 0])
            tally[0] += evaluated
            tally[1] += failed
        report.violations.extend(part.violations)
    return report


def cmd_verify_dist(args):
    return dist.verify_dist(args.p, args.r)


def cmd_verify_sl2(args):
    return oneparam.sl2_example_check(args.p)


def cmd_verify_sl_n(args):
    return oneparam.sl_n_compatibility_check(prime_field(args.p), args.n, args.samples, args.seed)


def cmd_verify_saturation(args):
    return oneparam.verify_saturation(prime_field(args.p), args.n, args.samples, args.seed)


def cmd_heisenberg_enumerate(args):
    maps = heisenberg.enumerate_hopf_maps(args.p, args.r, args.jobs)
    return {"p": args.p, "r": args.r, "count": len(maps), "maps": [m.to_json() for m in maps]}


def cmd_heisenberg_family(args):
    return heisenberg.verify_family(args.p, args.r)


def cmd_heisenberg_report(args):
    return heisenberg.counterexample_report(args.p, args.r, args.jobs)


def cmd_primes_good(args):
    labels = [t for t in args.type.split(",") if t]
    return {"p": args.p, "type": labels, "good": rootdata.is_good_prime(labels, args.p)}


def cmd_primes_pretty_good(args):
    datum = rootdata.builtin_datum(args.datum)
    return {
        "datum": args.datum,
        "p": args.p,
        "pretty_good": rootdata.is_pretty_good(datum, args.p),
        "witness": rootdata.pretty_good_witness(datum, args.p),
    }


# parser


def _io(sp, need_p=False):
    sp.add_argument("--p", type=int, required=need_p, help="prime; required when the input carries no field")
    sp.add_argument("--in", dest="inp", default=None, help="input JSON file (default stdin)")
    sp.add_argument("--out", default=None, help="output JSON file (default stdout)")


def _sampling(sp, samples, jobs=False):
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--samples", type=_positive, default=samples)
    if jobs:
        sp.add_argument("--jobs", type=_positive, default=oneparam.default_jobs(), help="worker processes (env %s)" % oneparam.JOBS_ENV)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frobexp", description="Frobenius kernels, one-parameter subgroups and exponentials over F_p.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn, helptext in (("exp", cmd_exp, "truncated exponential of a p-nilpotent matrix"), ("log", cmd_log, "truncated logarithm of a p-unipotent matrix")):
        sp = sub.add_parser(name, help=helptext)
        _io(sp)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("lift", help="commuting tuple file -> one-parameter subgroup file")
    _io(sp)
    sp.add_argument("--r", type=_positive, default=None, help="height (default: number of layers)")
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("decompose", help="one-parameter subgroup file -> commuting tuple file")
    _io(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("saturate", help="p-unipotent matrix file -> one-parameter subgroup through it")
    _io(sp)
    sp.add_argument("--r", type=_positive, default=1)
    sp.set_defaults(func=cmd_saturate)

    verify = sub.add_parser("verify", help="run a verification suite").add_subparsers(dest="suite", required=True, parser_class=_Parser)

    sp = verify.add_parser("bijection")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--r", type=_positive, required=True)
    _sampling(sp, 200, jobs=True)
    sp.set_defaults(func=cmd_verify_bijection)

    sp = verify.add_parser("axioms")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=_positive, required=True)
    _sampling(sp, 20)
    sp.set_defaults(func=cmd_verify_axioms)

    sp = verify.add_parser("bch")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--blocks", type=_blocks, required=True, help="composition of n, e.g. 1,1,1")
    sp.add_argument("--blocks-j", type=_blocks, default=None, help="second parabolic for the cross check (default: --blocks)")
    _sampling(sp, 100)
    sp.set_defaults(func=cmd_verify_bch)

    sp = verify.add_parser("dist")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=_positive, required=True)
    sp.set_defaults(func=cmd_verify_dist)

    sp = verify.add_parser("sl2-example")
    sp.add_argument("--p", type=int, default=3)
    sp.set_defaults(func=cmd_verify_sl2)

    sp = verify.add_parser("sl-n")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=_positive, required=True)
    _sampling(sp, 20)
    sp.set_defaults(func=cmd_verify_sl_n)

    sp = verify.add_parser("saturation")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=_positive, required=True)
    _sampling(sp, 100)
    sp.set_defaults(func=cmd_verify_saturation)

    for sp in verify.choices.values():
        sp.add_argument("--out", default=None)

    heis = sub.add_parser("heisenberg", help="Hopf maps into the fake Heisenberg group").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, fn in (("enumerate", cmd_heisenberg_enumerate), ("family", cmd_heisenberg_family), ("report", cmd_heisenberg_report)):
        sp = heis.add_parser(name)
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--r", type=_positive, required=True)
        sp.add_argument("--jobs", type=_positive, default=oneparam.default_jobs())
        sp.add_argument("--out", default=None)
        sp.set_defaults(func=fn)

    primes = sub.add_parser("primes", help="good and pretty good primes").add_subparsers(dest="predicate", required=True, parser_class=_Parser)
    sp = primes.add_parser("good")
    sp.add_argument("--type", required=True, help="comma-separated simple types, e.g. A2,G2")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_primes_good)
    sp = primes.add_parser("pretty-good")
    sp.add_argument("--datum", required=True, choices=rootdata.BUILTIN_NAMES)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_primes_pretty_good)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _finish(args.func(args), args)
    except (FrobexpError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, KeyError):
            exc = "missing key %s in input" % exc
        sys.stderr.write("frobexp: error: %s\n" % exc)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
