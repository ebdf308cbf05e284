#!/usr/bin/env python3
"""Residual-vs-p scan of the averaged one-particle constraints.

Sweeps the Werner parameter at fixed beta and reports where the positive
multipliers start solving the averaged constraints (the equipartition
region).  Defaults reproduce the standard beta=10, step-0.01 curve.
"""
import argparse

import numpy as np

from sepmech import equipartition_scan

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--beta", type=float, default=10.0)
ap.add_argument("--p-lo", type=float, default=0.50)
ap.add_argument("--p-hi", type=float, default=1.00)
ap.add_argument("--step", type=float, default=0.01)
ap.add_argument("--threshold", type=float, default=1e-6)
ap.add_argument("--seed", type=int, default=0)
ap.add_argument("--out", default=None, help="optional CSV path")
args = ap.parse_args()

grid = np.round(np.arange(args.p_lo, args.p_hi + args.step / 2, args.step), 12)
scan = equipartition_scan(grid, args.beta, args.threshold, seed=args.seed)

rows = ["p,residual,gamma_star,lambda_star,interior"]
for p, res, sad in zip(scan.p_grid, scan.residuals, scan.saddles):
    rows.append(f"{p:.6g},{res:.9e},{sad.gamma_star:.9e},"
                f"{sad.lambda_star:.9e},{int(sad.interior)}")
text = "\n".join(rows) + "\n"
if args.out:
    with open(args.out, "w") as fh:
        fh.write(text)
else:
    print(text, end="")
print(f"# beta={args.beta} threshold={args.threshold} "
      f"region_start={scan.region_start}")
