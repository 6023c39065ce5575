"""Command-line front end: ``dhrsieve <command> [options]``.

Exit status: 0 success, 2 infeasible parameters or a failed hypothesis on H,
3 numeric non-convergence, 4 input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys

from . import optimizer
from .bounds import compute_C0, ratio_N
from .exceptions import (AccuracyError, ConvergenceError, DegeneratePrimeError, DomainError,
                         FactorizationBudgetError, HypothesisError,
                         InfeasibleParametersError, InputError, SieveError)
from .sievefn import MAX_DIMENSION, build_sieve_function_table, get_limits

EXIT_OK, EXIT_INFEASIBLE, EXIT_CONVERGENCE, EXIT_INPUT = 0, 2, 3, 4
WORKERS_ENV = "DHRSIEVE_WORKERS"

log = logging.getLogger("dhrsieve")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_range(text):
    """``"2..4"``, ``"1,3,5"`` or ``"7"`` as a list of ints."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            try:
                lo, hi = int(lo), int(hi)
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad range {part!r}") from None
            if hi < lo:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            try:
                out.append(int(part))
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad integer {part!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty range")
    return out


def _number(text):
    """Integer or float, allowing ``1e6``."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number {text!r}") from None
    return int(value) if value.is_integer() else value


def _int(text):
    value = _number(text)
    if not isinstance(value, int):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return value


def _fmt(x):
    return f"{x:.12g}"


def _workers(args):
    if args.workers is not None:
        return args.workers
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return 1


def _check_g(gs, extra=0):
    for g in gs:
        if not 1 <= g <= MAX_DIMENSION - extra:
            raise InputError(f"g = {g} outside [1, {MAX_DIMENSION - extra}]")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_limits(args):
    _check_g(args.g)
    rows = []
    for g in args.g:
        lim = get_limits(g, args.limits)
        row = {"g": g, "alpha": lim.alpha, "beta": lim.beta, "source": lim.source}
        if args.limits == "solved":
            ref = get_limits(g, "reference")
            row.update(delta_alpha=lim.alpha - ref.alpha, delta_beta=lim.beta - ref.beta)
        rows.append(row)
    if args.format == "json":
        return json.dumps(rows, indent=2) + "\n"
    if args.format == "csv":
        return _csv(rows)
    lines = []
    for row in rows:
        text = f"alpha={_fmt(row['alpha'])} beta={_fmt(row['beta'])}"
        if len(rows) > 1:
            text = f"g={row['g']} " + text
        if "delta_alpha" in row:
            text += f" delta_alpha={row['delta_alpha']:.3e} delta_beta={row['delta_beta']:.3e}"
        lines.append(text)
    return "\n".join(lines) + "\n"


def _csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def cmd_sievefn(args):
    _check_g(args.g)
    if len(args.g) != 1:
        raise InputError("sievefn takes a single g")
    g = args.g[0]
    table = build_sieve_function_table(g, get_limits(g, args.limits), args.u_max, args.step)
    if not args.u:
        if args.format != "csv":
            raise InputError("the full table is written as csv; pass --u for other formats")
        return table.to_csv()
    rows = [{"u": u, "F": float(table.F(u)), "f": float(table.f(u))} for u in args.u]
    if args.format == "json":
        return json.dumps(rows, indent=2) + "\n"
    if args.format == "csv":
        return _csv(rows)
    return "".join(f"u={_fmt(r['u'])} F={_fmt(r['F'])} f={_fmt(r['f'])}\n" for r in rows)


def cmd_optimize(args):
    _check_g(args.g, extra=1)
    results = []
    for g in args.g:
        for k in args.k:
            res = optimizer.minimize_r(g, k, args.n_max, args.limits)
            results.append(res)
    if args.format == "csv":
        return optimizer.format_csv(results)
    if args.format == "json":
        docs = []
        for res in results:
            d = res.to_dict()
            lg, ln = get_limits(res.g, args.limits), get_limits(res.g + 1, args.limits)
            n = ratio_N(lg, ln)
            # large-k threshold of the asymptotic analysis; informational only
            d["k_bound"] = (n - 1) ** 2 * (ln.beta - 1.0) / compute_C0()
            d["ratio_N"] = n
            d["published_r"] = optimizer.published_r(res.g, res.k)
            docs.append(d)
        note = "error terms dropped; r values are idealised, not rigorous"
        return json.dumps({"note": note, "results": docs}, indent=2, sort_keys=True) + "\n"
    lines = []
    for res in results:
        p, b = res.params, res.breakdown
        lines.append(f"g={res.g} k={res.k} r={res.r} threshold={_fmt(b.threshold)} "
                     f"v={_fmt(p.v)} w={_fmt(p.w)} u={_fmt(p.u)} n={res.n_star}")
    return "\n".join(lines) + "\n"


def cmd_table(args):
    _check_g(args.g, extra=1)
    return optimizer.generate_table(args.g, args.k, args.format, args.n_max, args.limits,
                                    _workers(args))


def _system(args):
    from .arith import parse_polynomial_system
    if not args.poly:
        raise InputError("--poly is required")
    return parse_polynomial_system(args.poly, assume_irreducible=args.assume_irreducible)


def cmd_verify(args):
    from .arith import count_almost_primes, weighted_sum_W
    system = _system(args)
    if args.x is None or args.r is None:
        raise InputError("verify needs --x and --r")
    report = count_almost_primes(system, args.x, args.r, _workers(args), seed=args.seed,
                                 include_factorizations=args.factors)
    if args.format == "csv":
        return report.to_csv()
    doc = report.to_dict()
    if args.v is not None and args.u is not None:
        doc["weighted_sum"] = weighted_sum_W(system, args.x, args.r, args.v, args.u).to_dict()
    if args.format == "text":
        return "".join(f"{k}={v}\n" for k, v in doc.items() if k != "factorizations")
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_density(args):
    from .arith import (V_product, Vprime_product, check_hypothesis, density_sum,
                        mertens_ratio)
    system = _system(args)
    x = args.x if args.x is not None else 10 ** 6
    z = args.z if args.z is not None else x
    sums = density_sum(system, x)
    hyp = check_hypothesis(system)
    doc = {
        "polynomials": str(system), "g": system.g, "k": system.k, "H0": system.H0,
        "hypothesis": hyp.to_dict(),
        "density": sums.to_dict(),
        "z": z, "V": V_product(system, z), "Vprime": Vprime_product(system, z),
        "mertens_ratio": mertens_ratio(system, z),
        "V_log_g": V_product(system, z) * math.log(z) ** system.g,
    }
    if args.format == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    flat = {k: v for k, v in doc.items() if not isinstance(v, dict)}
    flat.update({f"density_{k}": v for k, v in sums.to_dict().items()})
    flat["hypothesis_passed"] = hyp.passed
    if args.format == "csv":
        return _csv([flat])
    return "".join(f"{k}={v}\n" for k, v in flat.items())


JSON_COMMANDS = ("verify", "density")

COMMANDS = {
    "limits": cmd_limits, "sievefn": cmd_sievefn, "optimize": cmd_optimize,
    "table": cmd_table, "verify": cmd_verify, "density": cmd_density,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "text"), default=None,
                        help="output format (default: json for verify/density, else text)")
    common.add_argument("--limits", choices=("solved", "reference"), default="reference",
                        help="sifting limits from the shipped file or the solver")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--workers", type=int, default=None,
                        help=f"worker processes (default: ${WORKERS_ENV} or 1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--verbose", action="store_true")

    parser = _Parser(prog="dhrsieve", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("limits", parents=[common], help="sifting limits alpha_g, beta_g")
    p.add_argument("--g", type=parse_range, required=True)

    p = sub.add_parser("sievefn", parents=[common], help="tabulate or evaluate F_g and f_g")
    p.add_argument("--g", type=parse_range, required=True)
    p.add_argument("--u", type=float, nargs="+")
    p.add_argument("--u-max", type=float, default=None)
    p.add_argument("--step", type=float, default=2.0 ** -10)

    for name, help_ in (("optimize", "minimal admissible r with parameters"),
                        ("table", "grid of admissible r against the classical values")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--g", type=parse_range, required=True)
        p.add_argument("--k", type=parse_range, required=True)
        p.add_argument("--n-max", type=int, default=optimizer.N_MAX)

    for name, help_ in (("verify", "count primes p in (x, 2x] with Omega(H(p)) <= r"),
                        ("density", "density sums, V, V' and the Mertens ratio")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--poly", required=True, help='e.g. "n^3+2; n^3+6"')
        p.add_argument("--x", type=_int)
        p.add_argument("--assume-irreducible", action="store_true")
        if name == "verify":
            p.add_argument("--r", type=int)
            p.add_argument("--v", type=float, help="with --u, also report W(A)")
            p.add_argument("--u", type=float)
            p.add_argument("--factors", action="store_true",
                           help="include every factorisation in the JSON report")
        else:
            p.add_argument("--z", type=_int)
    return parser


def run(argv=None):
    """Parse ``argv`` and dispatch; returns (exit status, output text)."""
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = "json" if args.command in JSON_COMMANDS else "text"
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text = COMMANDS[args.command](args)
    except (InfeasibleParametersError, HypothesisError, DegeneratePrimeError) as exc:
        return EXIT_INFEASIBLE, _fail(exc)
    except (ConvergenceError, AccuracyError, FactorizationBudgetError) as exc:
        return EXIT_CONVERGENCE, _fail(exc)
    except (InputError, DomainError, SieveError) as exc:
        return EXIT_INPUT, _fail(exc)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            return EXIT_INPUT, _fail(exc)
        return EXIT_OK, ""
    return EXIT_OK, text


def _fail(exc):
    print(f"dhrsieve: {type(exc).__name__}: {exc}", file=sys.stderr)
    return ""


def main(argv=None):
    status, text = run(argv)
    if text:
        sys.stdout.write(text)
    return status
