"""Command-line front end.

Exit codes: 0 success, 2 usage or input error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np

from .basis import Basis
from .coeffs import SampleError, load_sample
from .estimator import fit_adaptive
from .numerics import DEFAULT_PANELS, QuadratureRule
from .project import DEFAULT_E_STAR, ProjectionError
from .sampling import SamplerConfig, SamplingError, check_density, draw
from .sim import SimulationConfig, comparison_cutoff, run_simulation, truth_from_spec
from .sparsity import (SparsityParams, check_membership_ak, check_membership_ek,
                       check_membership_theta, eval_series, minimal_tail_constant)

EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    return format(float(v), ".17g")


def write_grid(path, xs, ys) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "density"])
        for x, y in zip(xs, ys):
            w.writerow([_fmt(x), _fmt(y)])


def read_grid(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _even_panels(text):
    v = int(text)
    if v < 2 or v % 2:
        raise argparse.ArgumentTypeError("must be an even integer >= 2")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("must be a 64-bit unsigned integer")
    return v


def _add_estimator_flags(p, defaults=True):
    def opt(value):
        return (value, "") if defaults else (None, f" (default: {value})")

    p.add_argument("--basis", default="cosine", choices=[b.value for b in Basis],
                   help="orthonormal basis")
    for flag, typ, value, text in (
        ("--J", _positive_int, 200, "number of basis terms estimated before thresholding"),
        ("--multiplier", _positive_float, 1.0, "threshold is multiplier * lambda"),
        ("--e-star", _positive_float, DEFAULT_E_STAR, "P-algorithm stops when |C - 1| < e-star"),
        ("--quad-panels", _even_panels, DEFAULT_PANELS, "composite Simpson panels on [0, 1]"),
    ):
        default, suffix = opt(value)
        p.add_argument(flag, type=typ, default=default, help=text + suffix)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparseries",
        description="Adaptive hard-thresholded cosine series density estimation.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("estimate", formatter_class=fmt,
                       help="fit the adaptive estimator to a sample file")
    p.add_argument("--input", required=True, help="sample file, one value in [0, 1] per line")
    _add_estimator_flags(p)
    p.add_argument("--k", type=_positive_float, default=2.0,
                   help="decay exponent used only by the regularity diagnostic")
    p.add_argument("--emit-density", metavar="CSV", help="write (x, density) pairs of the estimate")
    p.add_argument("--grid", type=_positive_int, default=1001, help="points in the emitted grid")
    p.add_argument("--out", help="write the JSON report here as well as to stdout")

    p = sub.add_parser("emit-density", formatter_class=fmt,
                       help="write a density on a grid, fitted from a sample or given directly")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="sample file; the adaptive estimate is emitted")
    src.add_argument("--density", help="'design', 'uniform' or a {basis, theta} JSON file")
    _add_estimator_flags(p)
    p.add_argument("--grid", type=_positive_int, default=1001)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sample", formatter_class=fmt,
                       help="draw an i.i.d. sample by inverse transform sampling")
    p.add_argument("--density", default="design", help="'design', 'uniform' or a JSON file")
    p.add_argument("--n", type=_positive_int, default=10000)
    p.add_argument("--seed", type=_seed, default=42)
    p.add_argument("--root-tol", type=_positive_float, default=1e-12)
    p.add_argument("--out", required=True)

    p = sub.add_parser("check-class", formatter_class=fmt,
                       help="check a coefficient vector against the sparsity classes")
    p.add_argument("--params", required=True, help="A,k,C (fractions such as 4/3 allowed)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="density JSON {basis, theta}")
    src.add_argument("--density", help="'design' or 'uniform'")

    # defaults here are None so that a config file can fill them in; the help
    # strings spell out the built-in values instead
    p = sub.add_parser("simulate",
                       help="Monte-Carlo MISE of the adaptive and fixed-cutoff estimators")
    p.add_argument("--config", help="JSON config; flags override its values")
    p.add_argument("--out", required=True, help="summary CSV")
    p.add_argument("--emit-plotdata", metavar="CSV", help="per-replication ISE in long format")
    p.add_argument("--truth", help="'design', 'uniform' or a JSON file (default: design)")
    p.add_argument("--B", type=_positive_int, default=None, help="replications (default: 100)")
    p.add_argument("--sizes", default=None,
                   help="comma-separated sample sizes (default: 5000,10000,15000,20000)")
    p.add_argument("--seed", type=_seed, default=None, help="root seed (default: 20240101)")
    p.add_argument("--rounding", choices=["floor", "round", "ceil"], default=None,
                   help="rounding of the comparison cutoff N^(1/4) (default: floor)")
    p.add_argument("--workers", type=_positive_int, default=1,
                   help="worker processes (default: 1)")
    p.add_argument("--full-scale", action="store_true", help="B = 1000 replications")
    _add_estimator_flags(p, defaults=False)
    return parser


def _emit_json(obj, out=None):
    text = json.dumps(obj, indent=2)
    print(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _fit(args, path):
    sample = load_sample(path)
    rule = QuadratureRule(args.quad_panels)
    return fit_adaptive(sample, args.J, args.basis, args.multiplier, rule, args.e_star,
                        k=getattr(args, "k", 2.0))


def cmd_estimate(args) -> int:
    fit = _fit(args, args.input)
    _emit_json(fit.summary(), args.out)
    if args.emit_density:
        xs = np.linspace(0.0, 1.0, args.grid)
        write_grid(args.emit_density, xs, fit.density(xs))
    return 0


def cmd_emit_density(args) -> int:
    xs = np.linspace(0.0, 1.0, args.grid)
    if args.input:
        ys = _fit(args, args.input).density(xs)
    else:
        ys = eval_series(truth_from_spec(args.density), xs)
    write_grid(args.out, xs, ys)
    return 0


def cmd_sample(args) -> int:
    f = truth_from_spec(args.density)
    try:
        check_density(f)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    s = draw(f, args.n, SamplerConfig(seed=args.seed, root_tol=args.root_tol))
    s.save(args.out)
    return 0


def cmd_check_class(args) -> int:
    params = SparsityParams.parse(args.params)
    f = truth_from_spec(args.input or args.density)
    rep = check_membership_theta(f.theta, params)
    _emit_json({
        "params": {"A": params.A, "k": params.k, "C": params.C},
        "ordered_ok": rep.ordered_ok,
        "tail_ok": rep.tail_ok,
        "member": rep.member,
        "first_violation": rep.first_violation,
        "ordering": list(rep.ordering[:int(np.count_nonzero(f.theta))]),
        "in_unordered_class": check_membership_ek(f.theta, params.A, params.k),
        "in_tail_class": check_membership_ak(f.theta, params.A, params.k, params.C),
        "minimal_tail_constant": minimal_tail_constant(f.theta, params.k),
    })
    return 0


def _sim_config(args) -> SimulationConfig:
    obj = {}
    if args.config:
        with open(args.config) as fh:
            obj = json.load(fh)
    # normalise config aliases first so that flags always win
    for key, full in (("B", "replications"), ("J", "J_adaptive")):
        if key in obj:
            obj[full] = obj.pop(key)
    if args.truth:
        obj["truth"] = args.truth
    if args.full_scale:
        obj["replications"] = 1000
    if args.B is not None:
        obj["replications"] = args.B
    if args.sizes:
        obj["sizes"] = [int(s) for s in args.sizes.split(",") if s.strip()]
    for flag, key in (("seed", "seed"), ("J", "J_adaptive"), ("multiplier", "multiplier"),
                      ("e_star", "e_star"), ("quad_panels", "quad_panels"),
                      ("rounding", "comparison_rounding")):
        v = getattr(args, flag)
        if v is not None:
            obj[key] = v
    return SimulationConfig.from_json(obj)


def cmd_simulate(args) -> int:
    cfg = _sim_config(args)
    logging.getLogger(__name__).info(
        "simulating B=%d sizes=%s cutoffs=%s", cfg.replications, cfg.sizes,
        [comparison_cutoff(N, cfg.comparison_rounding) for N in cfg.sizes])
    result = run_simulation(cfg, workers=args.workers)
    result.write_csv(args.out)
    if args.emit_plotdata:
        result.write_plotdata(args.emit_plotdata)
    if result.failures:
        print(f"{result.failures} replications failed", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


COMMANDS = {
    "estimate": cmd_estimate,
    "emit-density": cmd_emit_density,
    "sample": cmd_sample,
    "check-class": cmd_check_class,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ProjectionError, SamplingError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, SampleError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
