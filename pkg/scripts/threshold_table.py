#!/usr/bin/env python3
"""Tabulate the critical mass M* and the ground-state criterion around it.

For each (N, alpha, mu) the script prints M* and verifies that the
symmetric state beats the full-line soliton energetically below M* and
loses above it, i.e. that no ground state exists at large mass while the
state remains a local minimizer there.

Example:
    python scripts/threshold_table.py --out results/threshold_table.csv
"""

import argparse
import csv
import itertools
from pathlib import Path

from starnls.manifold import ground_state_inequality, threshold_mass
from starnls.params import ModelParams


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--edges", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    ap.add_argument("--mus", type=float, nargs="+", default=[0.5, 1.0, 1.5])
    ap.add_argument("--out", type=Path, default=Path("results/threshold_table.csv"))
    args = ap.parse_args()

    args.out.parent.mkdir(parents=True, exist_ok=True)
    print(f"{'N':>3} {'alpha':>7} {'mu':>5} {'M*':>14} below/above criterion")
    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["N", "alpha", "mu", "m_star", "holds_below", "holds_above"])
        consistent = True
        for n, alpha, mu in itertools.product(args.edges, args.alphas, args.mus):
            params = ModelParams(N=n, alpha=alpha, mu=mu)
            m_star = threshold_mass(params)
            holds_below = ground_state_inequality(0.9 * m_star, params)[2]
            holds_above = ground_state_inequality(1.1 * m_star, params)[2]
            row_ok = holds_below and not holds_above
            consistent &= row_ok
            print(
                f"{n:>3} {alpha:>7g} {mu:>5g} {m_star:>14.8f} "
                f"{'ok' if row_ok else 'INCONSISTENT'}"
            )
            w.writerow([n, alpha, mu, f"{m_star:.12g}", holds_below, holds_above])
    print(f"table written to {args.out}")
    return 0 if consistent else 1


if __name__ == "__main__":
    raise SystemExit(main())
