"""Extremal deviation factors against temperature for both regimes."""

import argparse
from pathlib import Path

import numpy as np

from microrev.cli import table_csv
from microrev.sweeps import Regime, Table, find_extremum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/extrema.csv"))
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--betas", type=float, nargs="+", default=[0.5, 1.0, 2.0, 3.0, 4.0])
    args = ap.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)

    cols = {k: [] for k in ("beta_delta_e", "regime", "c_i", "c_f", "gamma", "residual")}
    for beta in args.betas:
        for regime in Regime:
            res = find_extremum(beta, args.p, regime)
            for k, v in zip(cols, (beta, regime.value, res.c_i_star, res.c_f_star, res.gamma_star, res.refinement_residual)):
                cols[k].append(v)
            print(f"beta dE = {beta:<4g} {regime.value:8s} C_i = {res.c_i_star:.4f} C_f = {res.c_f_star:.4f} Gamma = {res.gamma_star:.4f}")
    args.out.write_text(table_csv(Table({k: np.array(v) for k, v in cols.items()})))


if __name__ == "__main__":
    main()
