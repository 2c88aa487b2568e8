#!/usr/bin/env python3
"""Tabulate the t-indexed measures over a grid for external plotting.

Writes one CSV per distribution with columns t, residual_extropy,
past_extropy, weighted_residual_extropy, weighted_past_extropy,
dynamic_survival_extropy.
"""

import argparse
import csv

from extropy import measures
from extropy.distributions import exponential, gamma_dist, pareto, uniform

MEMBERS = [
    exponential(1.0),
    uniform(0.0, 2.0),
    gamma_dist(2.0, 1.0),
    pareto(2.0, 1.0),
]

CURVES = ("residual_extropy", "past_extropy", "weighted_residual_extropy",
          "weighted_past_extropy", "dynamic_survival_extropy")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--prefix", default="curves")
    args = ap.parse_args()

    for dist in MEMBERS:
        path = f"{args.prefix}_{dist.family}.csv"
        grid = measures.default_t_grid(dist, args.points)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(("t",) + CURVES)
            for t in grid:
                row = [f"{float(t):.12g}"]
                for mid in CURVES:
                    mv = measures.compute_measure(dist, mid, t=float(t))
                    row.append(f"{mv.value:.12g}")
                w.writerow(row)
        print(f"wrote {path} ({args.points} points)")


if __name__ == "__main__":
    main()
