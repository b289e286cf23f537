#!/usr/bin/env python3
"""Scan the reduced-energy Hessian at the symmetric point over (N, alpha, mu, M).

For every parameter combination the symmetric state is a stationary
point; the scan records the gradient norm, the m-block eigenvalues, the
vertex-direction entry, and whether the full Hessian is positive
definite -- including masses above the critical mass, where the state is
a local but no longer a global minimizer.

Example:
    python scripts/hessian_scan.py --out results/hessian_scan.csv
"""

import argparse
import csv
import itertools
from pathlib import Path

import numpy as np

from starnls.manifold import (
    reduced_gradient,
    reduced_hessian,
    threshold_mass,
    tilde_point,
)
from starnls.params import ModelParams


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--edges", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    ap.add_argument("--mus", type=float, nargs="+", default=[0.5, 1.0, 1.5])
    ap.add_argument(
        "--mass-factors",
        type=float,
        nargs="+",
        default=[0.5, 1.0, 2.0],
        help="masses as multiples of the critical mass M*",
    )
    ap.add_argument("--out", type=Path, default=Path("results/hessian_scan.csv"))
    args = ap.parse_args()

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "N",
                "alpha",
                "mu",
                "mass",
                "mass_over_mstar",
                "grad_norm",
                "mixed_max",
                "m_block_eig_min",
                "m_block_eig_max",
                "a_entry",
                "min_eig",
                "positive_definite",
            ]
        )
        n_pos = n_tot = 0
        for n, alpha, mu in itertools.product(args.edges, args.alphas, args.mus):
            params = ModelParams(N=n, alpha=alpha, mu=mu)
            m_star = threshold_mass(params)
            for factor in args.mass_factors:
                M = factor * m_star
                tp = tilde_point(M, params)
                grad = reduced_gradient(tp, params)
                H = reduced_hessian(tp, params)
                eig_m = np.sort(np.linalg.eigvalsh(H[:-1, :-1]))
                min_eig = float(np.min(np.linalg.eigvalsh(H)))
                pos = min_eig > 0.0
                n_pos += pos
                n_tot += 1
                w.writerow(
                    [
                        n,
                        alpha,
                        mu,
                        f"{M:.12g}",
                        factor,
                        f"{float(np.linalg.norm(grad)):.3e}",
                        f"{float(np.max(np.abs(H[-1, :-1]))):.3e}",
                        f"{eig_m[0]:.12g}",
                        f"{eig_m[-1]:.12g}",
                        f"{H[-1, -1]:.12g}",
                        f"{min_eig:.12g}",
                        pos,
                    ]
                )
    print(f"{n_pos}/{n_tot} points positive definite; table written to {args.out}")
    return 0 if n_pos == n_tot else 1


if __name__ == "__main__":
    raise SystemExit(main())
