"""Deviation-factor maps over (C_i, C_f) for both regimes at several temperatures.

Writes one CSV and one SVG heatmap per (regime, beta dE) into --out.
"""

import argparse
from pathlib import Path

from microrev import svg
from microrev.cli import table_csv
from microrev.sweeps import Regime, SweepGrid, gamma_map


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/maps"))
    ap.add_argument("--betas", type=float, nargs="+", default=[0.01, 1.0, 2.0])
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--grid", type=int, default=201)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for regime in Regime:
        for beta in args.betas:
            table = gamma_map(SweepGrid(beta, args.p, args.grid, args.grid), regime)
            stem = f"gamma_{regime.value}_b{beta:g}"
            (args.out / f"{stem}.csv").write_text(table_csv(table))
            values = table["gamma"].reshape(args.grid, args.grid)
            (args.out / f"{stem}.svg").write_text(svg.heatmap(values, f"Gamma, {regime.value}, beta dE = {beta:g}, p = {args.p:g}"))
            print(f"{regime.value:8s} beta dE = {beta:<5g} min {values.min():.4f} max {values.max():.4f}")


if __name__ == "__main__":
    main()
