"""Command line interface: ``microrev {map,curve,cut,extremum,photonic-sim,verify}``."""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import svg, verify
from .channel import ChannelParams, TimeMap, p_from_time
from .photonics import ShotConfig, run_experiment
from .states import ThermalReservoir
from .sweeps import CASE_ALIASES, Regime, SweepGrid, Table, diagonal_cut, find_extremum, gamma_curve, gamma_map, resolve_case

# -- argument types -----------------------------------------------------------


def _float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isnan(x):
        raise argparse.ArgumentTypeError("NaN is not allowed")
    return x


def probability(text: str) -> float:
    x = _float(text)
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {x}")
    return x


def nonnegative(text: str) -> float:
    x = _float(text)
    if x < 0.0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {x}")
    return x


def positive(text: str) -> float:
    x = _float(text)
    if not x > 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {x}")
    return x


def finite(text: str) -> float:
    x = _float(text)
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"must be finite, got {x}")
    return x


def int_at_least(lo: int):
    def parse(text: str) -> int:
        try:
            n = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if n < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {n}")
        return n

    return parse


def regime(text: str) -> Regime:
    try:
        return Regime(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"choose 'release' or 'absorb', got {text!r}") from None


def case_name(text: str) -> str:
    try:
        return resolve_case(text).name
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- serialization -----------------------------------------------------------------


def fmt(x) -> str:
    """Shortest round-trip decimal; ``inf`` for divergences, 0/1 for flags."""
    if isinstance(x, (str, np.str_)):
        return str(x)
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return "inf" if math.isinf(x) else x
    if isinstance(x, dict):
        return {k: json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [json_value(v) for v in x]
    return x


def table_csv(table: Table) -> str:
    buf = io.StringIO()
    buf.write(",".join(table.names) + "\n")
    for row in table.rows():
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def table_json(table: Table, params: dict) -> str:
    doc = {"params": params, "columns": table.names, "rows": [[json_value(v) for v in row] for row in table.rows()]}
    return json.dumps(json_value(doc), indent=1) + "\n"


def emit(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def write_table(table: Table, args, params: dict) -> None:
    text = table_csv(table) if args.format == "csv" else table_json(table, params)
    emit(text, args.output)


# -- subcommands ------------------------------------------------------------------------


def _damping(args) -> float:
    if args.time is not None:
        return p_from_time(args.time, TimeMap(args.tau)).p
    return 0.5 if args.p is None else args.p


def cmd_map(args) -> int:
    p = _damping(args)
    grid = SweepGrid(args.beta_delta_e, p, args.grid, args.grid, args.phi_i, args.phi_f)
    table = gamma_map(grid, args.regime, method=args.method, workers=args.workers)
    params = {"beta_delta_e": args.beta_delta_e, "p": p, "regime": args.regime.value, "grid": args.grid,
              "phi_i": args.phi_i, "phi_f": args.phi_f, "method": args.method}
    write_table(table, args, params)
    if args.svg:
        values = table["gamma"].reshape(args.grid, args.grid)
        emit(svg.heatmap(values, f"Gamma, {args.regime.value}, beta dE = {args.beta_delta_e:g}, p = {p:g}"), args.svg)
    return 0


def cmd_curve(args) -> int:
    p = _damping(args)
    betas = np.linspace(args.beta_min, args.beta_max, args.n_beta)
    table = gamma_curve(args.case, betas, p)
    params = {"case": args.case, "p": p, "beta_min": args.beta_min, "beta_max": args.beta_max, "n_beta": args.n_beta}
    write_table(table, args, params)
    if args.svg:
        emit(svg.curve(betas, {args.case: table["gamma"]}, f"Gamma vs beta dE, p = {p:g}"), args.svg)
    return 0


def cmd_cut(args) -> int:
    p = _damping(args)
    table = diagonal_cut(args.beta_delta_e, p, args.regime, args.n, args.phi_i - args.phi_f)
    params = {"beta_delta_e": args.beta_delta_e, "p": p, "regime": args.regime.value, "n": args.n}
    write_table(table, args, params)
    if args.svg:
        emit(svg.curve(table["c"], {args.regime.value: table["gamma"]}, f"Gamma along C_i = C_f, beta dE = {args.beta_delta_e:g}"), args.svg)
    return 0


def cmd_extremum(args) -> int:
    p = _damping(args)
    res = find_extremum(args.beta_delta_e, p, args.regime, dphi=args.phi_i - args.phi_f)
    summary = " ".join([res.kind.value, fmt(res.c_i_star), fmt(res.c_f_star), fmt(res.gamma_star), fmt(res.refinement_residual)])
    print(summary)
    if args.output != "-":
        table = Table({
            "kind": np.array([res.kind.value]),
            "c_i": np.array([res.c_i_star]),
            "c_f": np.array([res.c_f_star]),
            "gamma": np.array([res.gamma_star]),
            "residual": np.array([res.refinement_residual]),
        })
        params = {"beta_delta_e": args.beta_delta_e, "p": p, "regime": args.regime.value}
        write_table(table, args, params)
    return 0


def cmd_photonic_sim(args) -> int:
    p = _damping(args)
    case = resolve_case(args.case)
    r = ThermalReservoir(args.beta_delta_e)
    shots = ShotConfig(args.n_shots, args.seed) if args.n_shots > 0 else None
    run = run_experiment(case.initial, case.final, r, ChannelParams(p), shots)
    report = {
        "params": {"case": case.name, "beta_delta_e": args.beta_delta_e, "p": p, "n_shots": args.n_shots,
                   "theta_i": case.initial.theta, "theta_f": case.final.theta},
        "analytic": {"p_forward": run.p_forward, "p_backward": run.p_backward, "ratio": run.ratio, "gamma": run.gamma},
        "sampled": None,
        "seed": args.seed,
    }
    if run.sampled:
        report["sampled"] = {
            "p_forward": run.p_forward_hat,
            "p_backward": run.p_backward_hat,
            "gamma": run.gamma_hat,
            "counts": {"forward": run.forward_shots.counts, "backward": run.backward_shots.counts},
            "std_err": {
                "p_forward": float(run.forward_shots.std_errors[0]),
                "p_backward": float(run.backward_shots.std_errors[0]),
                "gamma": run.gamma_std_err,
            },
        }
    emit(json.dumps(json_value(report), indent=1) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    names = args.suite or list(verify.SUITES)
    unknown = [n for n in names if n not in verify.SUITES]
    if unknown:
        print(f"error: unknown suite(s) {unknown}; available: {list(verify.SUITES)}", file=sys.stderr)
        return 2
    summary = verify.run_all(names)
    emit(json.dumps(summary, indent=1) + "\n", args.output)
    return 0 if summary["ok"] else 1


# -- parser ----------------------------------------------------------------------------------


def _common(sp, beta_default: float | None = 2.0, regime_flag: bool = True, phases: bool = True, fmt_flag: bool = True):
    if beta_default is not None:
        sp.add_argument("--beta-delta-e", type=nonnegative, default=beta_default,
                        help="reservoir inverse temperature times level splitting (default: %(default)s)")
    sp.add_argument("--p", type=probability, default=None, help="damping parameter in [0, 1] (default: 0.5)")
    sp.add_argument("--time", type=nonnegative, default=None, help="evolution time; sets p = exp(-time/tau), overriding --p")
    sp.add_argument("--tau", type=positive, default=1.0, help="time constant for --time (default: %(default)s)")
    if regime_flag:
        sp.add_argument("--regime", type=regime, default=Regime.HEAT_RELEASE,
                        help="'release' (theta_i >= pi/2 >= theta_f) or 'absorb' (default: release)")
    if phases:
        sp.add_argument("--phi-i", type=finite, default=0.0, help="initial azimuth in radians (default: %(default)s)")
        sp.add_argument("--phi-f", type=finite, default=0.0, help="final azimuth in radians (default: %(default)s)")
    sp.add_argument("-o", "--output", default="-", help="output file, '-' for stdout (default: %(default)s)")
    if fmt_flag:
        sp.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default: %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="microrev", description="Quantum microscopic reversibility under generalized amplitude damping.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("map", help="deviation factor over the (C_i, C_f) square")
    _common(sp)
    sp.add_argument("--grid", type=int_at_least(2), default=201, help="points per coherence axis (default: %(default)s)")
    sp.add_argument("--method", choices=("closed", "numeric"), default="closed", help="closed forms or explicit traces (default: %(default)s)")
    sp.add_argument("--workers", type=int_at_least(1), default=1, help="processes for --method numeric (default: %(default)s)")
    sp.add_argument("--svg", default=None, help="also write an SVG heatmap to this path")
    sp.set_defaults(func=cmd_map)

    cases = ", ".join(f"{k} ({v})" for k, v in CASE_ALIASES.items())
    sp = sub.add_parser("curve", help="deviation factor against beta*dE for a transition case")
    _common(sp, beta_default=None, regime_flag=False, phases=False)
    sp.add_argument("--case", type=case_name, default="coherent-excited", help=f"transition case: {cases} (default: %(default)s)")
    sp.add_argument("--beta-min", type=nonnegative, default=0.0, help="(default: %(default)s)")
    sp.add_argument("--beta-max", type=nonnegative, default=4.0, help="(default: %(default)s)")
    sp.add_argument("--n-beta", type=int_at_least(2), default=81, help="number of temperature samples (default: %(default)s)")
    sp.add_argument("--svg", default=None, help="also write an SVG curve to this path")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("cut", help="deviation factor along the diagonal C_i = C_f")
    _common(sp)
    sp.add_argument("--n", type=int_at_least(2), default=101, help="points along the cut (default: %(default)s)")
    sp.add_argument("--svg", default=None, help="also write an SVG curve to this path")
    sp.set_defaults(func=cmd_cut)

    sp = sub.add_parser("extremum", help="locate the minimum (release) or maximum (absorb) deviation factor")
    _common(sp)
    sp.set_defaults(func=cmd_extremum)

    sp = sub.add_parser("photonic-sim", help="interferometer simulation with shot noise (JSON report)")
    _common(sp, regime_flag=False, phases=False, fmt_flag=False)
    sp.add_argument("--case", type=case_name, default="coherent-excited", help=f"transition case: {cases} (default: %(default)s)")
    sp.add_argument("--n-shots", type=int_at_least(0), default=100000, help="photons per experiment, 0 for analytic only (default: %(default)s)")
    sp.add_argument("--seed", type=int_at_least(0), default=0, help="generator seed, echoed in the report (default: %(default)s)")
    sp.set_defaults(func=cmd_photonic_sim)

    sp = sub.add_parser("verify", help="run the built-in oracle and invariant suites")
    sp.add_argument("--suite", action="append", default=None, help=f"run only this suite (repeatable); available: {', '.join(verify.SUITES)}")
    sp.add_argument("-o", "--output", default="-", help="summary file, '-' for stdout (default: %(default)s)")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"microrev {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
