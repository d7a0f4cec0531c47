"""Command-line interface.

Exit codes: 0 on success, 2 for invalid input, 3 when a numerical routine
fails its contract. Errors print a single ``error: <Kind>: <detail>`` line.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .eigen import principal_eigenvalue
from .exceptions import NumericalError, PulsefrontError, RegimeWarning, ValidationError
from .homog import beta_mean_zero, gamma
from .output import plot_csv, write_csv
from .patch import frag_sweep
from .profiles import PatchConfig, pair_from_dict
from .simulate import SimConfig, run_front
from .speed import minimal_speed, sweep_L


def _load_pair(path: str):
    try:
        desc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc.msg}") from exc
    return pair_from_dict(desc)


class _Printer:
    def __init__(self, args):
        self.quiet = args.quiet
        self.json = args.json

    def report(self, values: dict):
        if self.quiet:
            return
        if self.json:
            print(json.dumps(values, sort_keys=True, default=_jsonable))
            return
        for key, val in values.items():
            if isinstance(val, float):
                val = f"{val:.12g}"
            print(f"{key}: {val}")

    def note(self, text: str):
        if not self.quiet:
            print(text, file=sys.stderr)


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(type(v).__name__)


def cmd_eigen(args, out: _Printer):
    pair = _load_pair(args.config)
    res = principal_eigenvalue(pair, args.lam, args.L, args.n, method=args.method)
    values = {"k": res.k, "k_tilde": res.k_tilde, "residual": res.residual, "n": res.n,
              "lambda": res.lam, "L": res.L}
    if res.rho1 is not None:
        values["rho1"] = res.rho1
    if args.out:
        write_csv(args.out, ("x", "phi"), zip(res.x, res.phi))
    out.report(values)


def cmd_speed(args, out: _Printer):
    pair = _load_pair(args.config)
    res = minimal_speed(pair, args.L, args.n)
    out.report(res.to_dict())


def cmd_sweep(args, out: _Printer):
    pair = _load_pair(args.config)
    if not (args.l_min > 0 and args.l_max > args.l_min):
        raise ValidationError("need 0 < --l-min < --l-max")
    if args.points < 2:
        raise ValidationError("--points must be >= 2")
    if args.geometric:
        Ls = np.geomspace(args.l_min, args.l_max, args.points)
    else:
        Ls = np.linspace(args.l_min, args.l_max, args.points)
    rep = sweep_L(pair, [float(L) for L in Ls], args.n)
    if args.out:
        write_csv(args.out, rep.columns, rep.table())
    elif not out.quiet and not out.json:
        write_csv(sys.stdout, rep.columns, rep.table())
    values = {"rows": len(rep.rows), "d1": rep.d1, "d2": rep.d2, "c_limit": rep.c_limit}
    if out.json:
        values["table"] = [dict(zip(rep.columns, row)) for row in rep.table()]
    out.report(values)


def cmd_gamma(args, out: _Printer):
    out.report(gamma(_load_pair(args.config)).to_dict())


def cmd_beta0(args, out: _Printer):
    out.report(beta_mean_zero(_load_pair(args.config)).to_dict())


def cmd_frag(args, out: _Printer):
    cfg = PatchConfig(args.L0, args.l, 0.0, args.m)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RegimeWarning)
        rep = frag_sweep(cfg, args.z_steps)
    for w in caught:
        out.note(f"warning: RegimeWarning: {w.message}")
    if args.out:
        write_csv(args.out, rep.columns, rep.table())
    out.report({
        "points": len(rep.rows),
        "z_min": rep.z_min,
        "c_star_min": float(rep.c_star.min()),
        "monotone_decreasing": rep.monotone_decreasing,
        "monotone_increasing": rep.monotone_increasing,
        "symmetry_defect": rep.symmetry_defect,
        "regime_warning": rep.regime_warning,
    })


def cmd_simulate(args, out: _Printer):
    pair = _load_pair(args.config)
    domain = args.domain_length
    if domain is None:
        # the front starts mid-domain and cannot outrun 2 sqrt(a_M mu_M)
        bound = 2.0 * math.sqrt(pair.a_max * max(pair.mu_max, 0.0))
        domain = max(50.0 * max(args.L, 1.0), 2.0 * (1.1 * bound * args.t_end + 20 * args.dx))
    cfg = SimConfig(pair, args.L, domain, args.dx, args.t_end, dt=args.dt,
                    front_level=args.front_level)
    trace, res = run_front(cfg)
    if args.out:
        write_csv(args.out, ("t", "x_front"), zip(trace.times, trace.positions))
    values = {"measured_speed": res.measured_speed, "fit_residual": res.fit_residual,
              "pulsation_defect": res.pulsation_defect, "domain_length": domain}
    if args.compare:
        ref = minimal_speed(pair, args.L)
        values["c_star"] = ref.c_star
        values["relative_gap"] = (res.measured_speed - ref.c_star) / ref.c_star
    out.report(values)


def cmd_plot(args, out: _Printer):
    plot_csv(args.csv, args.svg, args.x, args.y)
    out.report({"svg": str(args.svg)})


def _global_options(parser: argparse.ArgumentParser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--quiet", action="store_true", default=default or False,
                      help="print nothing on success")
    mode.add_argument("--json", action="store_true", default=default or False,
                      help="machine-readable output")
    parser.add_argument("--seed", type=int, default=default,
                        help="reserved; all computations are deterministic")
    parser.add_argument("--out", default=default, help="output file (CSV) where applicable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulsefront",
        description="Minimal speeds of pulsating KPP fronts in periodic media.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("eigen", parents=[common], help="principal eigenvalue k(lambda, L)")
    p.add_argument("--config", required=True, help="JSON profile or patch descriptor")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--n", type=int, default=None, help="grid size (power of two)")
    p.add_argument("--method", choices=("transfer", "power"), default="transfer")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("speed", parents=[common], help="minimal speed c*_L")
    p.add_argument("--config", required=True)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_speed)

    p = sub.add_parser("sweep-l", parents=[common], help="c*_L over a range of periods")
    p.add_argument("--config", required=True)
    p.add_argument("--l-min", type=float, required=True)
    p.add_argument("--l-max", type=float, required=True)
    p.add_argument("--points", type=int, default=8)
    p.add_argument("--geometric", action="store_true", help="geometric instead of linear spacing")
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gamma", parents=[common], help="homogenized speed and gamma")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("beta0", parents=[common], help="first-order slope for zero-mean growth")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_beta0)

    p = sub.add_parser("frag", parents=[common], help="patch-model speeds over the gap offset")
    p.add_argument("--L0", type=float, required=True)
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--z-steps", type=int, default=41)
    p.set_defaults(func=cmd_frag)

    p = sub.add_parser("simulate", parents=[common], help="direct front simulation")
    p.add_argument("--config", required=True)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--dx", type=float, required=True)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--domain-length", type=float, default=None)
    p.add_argument("--front-level", type=float, default=0.5)
    p.add_argument("--compare", action="store_true", help="also report c*_L from the speed module")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("plot", parents=[common], help="SVG line plot of two CSV columns")
    p.add_argument("csv")
    p.add_argument("svg")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.quiet and args.json:
        parser.error("--quiet and --json are mutually exclusive")
    printer = _Printer(args)
    try:
        args.func(args, printer)
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, PulsefrontError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
