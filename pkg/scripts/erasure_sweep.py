#!/usr/bin/env python3
"""Sweep the erasure family and compare estimators against the analytic
values: q1 = max(0, 1-2p) log2 d, chi = (1-p) log2 d, ce = 2(1-p) log2 d,
and the complement duality q1(E_p^c) = q1(E_{1-p})."""

import argparse
import json

import numpy as np

from capbound import OptOptions, ce, complementary_channel, erasure, holevo_chi, q1


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--restarts", type=int, default=8)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--points", type=int, default=11)
    ap.add_argument("--out", default=None, help="optional JSON output path")
    args = ap.parse_args()

    opts = OptOptions(restarts=args.restarts, **({"seed": args.seed} if args.seed else {}))
    logd = np.log2(args.dim)
    rows = []
    print(f"{'p':>5} {'q1':>10} {'q1 exact':>10} {'chi':>10} {'chi exact':>10} "
          f"{'ce':>10} {'ce exact':>10} {'q1(E^c)':>10} {'q1(E_1-p)':>10}")
    for p in np.linspace(0.0, 1.0, args.points):
        ch = erasure(args.dim, float(p))
        q1v = q1(ch, opts).value
        chiv = holevo_chi(ch, opts).value
        cev = ce(ch).value
        q1c = q1(complementary_channel(ch), opts).value
        q1dual = q1(erasure(args.dim, float(1 - p)), opts).value
        row = {
            "p": float(p),
            "q1": q1v, "q1_exact": max(0.0, 1 - 2 * p) * logd,
            "chi": chiv, "chi_exact": (1 - p) * logd,
            "ce": cev, "ce_exact": 2 * (1 - p) * logd,
            "q1_complement": q1c, "q1_dual": q1dual,
        }
        rows.append(row)
        print(f"{p:5.2f} {q1v:10.6f} {row['q1_exact']:10.6f} {chiv:10.6f} "
              f"{row['chi_exact']:10.6f} {cev:10.6f} {row['ce_exact']:10.6f} "
              f"{q1c:10.6f} {q1dual:10.6f}")

    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"schema": 1, "dim": args.dim, "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
