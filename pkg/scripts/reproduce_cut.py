"""Diagonal cut C_i = C_f for both regimes, with shot-noise error bars.

Error bars come from the photonic Monte Carlo at each sampled point.
"""

import argparse
from pathlib import Path

import numpy as np

from microrev import svg
from microrev.channel import ChannelParams
from microrev.cli import table_csv
from microrev.photonics import ShotConfig, run_experiment
from microrev.states import BlochState, ThermalReservoir
from microrev.sweeps import Regime, Table, diagonal_cut


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/cut"))
    ap.add_argument("--beta-delta-e", type=float, default=2.0)
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--n", type=int, default=101)
    ap.add_argument("--n-points-sampled", type=int, default=11)
    ap.add_argument("--n-shots", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    r, c = ThermalReservoir(args.beta_delta_e), ChannelParams(args.p)
    curves = {}
    for k, regime in enumerate(Regime):
        table = diagonal_cut(args.beta_delta_e, args.p, regime, args.n)
        (args.out / f"cut_{regime.value}.csv").write_text(table_csv(table))
        curves[regime.value] = table["gamma"]

        cs = np.linspace(0.0, 1.0, args.n_points_sampled)
        ti, tf = regime.thetas(cs, cs)
        runs = [
            run_experiment(BlochState(float(a)), BlochState(float(b)), r, c, ShotConfig(args.n_shots, args.seed + 1000 * k + j))
            for j, (a, b) in enumerate(zip(ti, tf))
        ]
        sampled = Table({
            "c": cs,
            "gamma": np.array([run.gamma for run in runs]),
            "gamma_hat": np.array([run.gamma_hat for run in runs]),
            "std_err": np.array([run.gamma_std_err for run in runs]),
        })
        (args.out / f"cut_{regime.value}_sampled.csv").write_text(table_csv(sampled))
        g = table["gamma"]
        print(f"{regime.value:8s} extreme Gamma {g.min() if regime is Regime.HEAT_RELEASE else g.max():.4f}")
    (args.out / "cut.svg").write_text(svg.curve(np.linspace(0.0, 1.0, args.n), curves, f"Gamma along C_i = C_f, beta dE = {args.beta_delta_e:g}"))


if __name__ == "__main__":
    main()
