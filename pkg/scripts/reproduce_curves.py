"""Deviation factor against beta dE for the three transition cases."""

import argparse
from pathlib import Path

import numpy as np

from microrev import svg
from microrev.cli import table_csv
from microrev.sweeps import CASES, gamma_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/curves"))
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--beta-max", type=float, default=4.0)
    ap.add_argument("--n", type=int, default=81)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    betas = np.linspace(0.0, args.beta_max, args.n)
    curves = {}
    for name in CASES:
        table = gamma_curve(name, betas, args.p)
        (args.out / f"curve_{name}.csv").write_text(table_csv(table))
        curves[name] = table["gamma"]
        print(f"{name:18s} Gamma(beta dE = {betas[-1]:g}) = {table['gamma'][-1]:.4f}")
    (args.out / "curves.svg").write_text(svg.curve(betas, curves, f"Gamma vs beta dE, p = {args.p:g}"))


if __name__ == "__main__":
    main()
