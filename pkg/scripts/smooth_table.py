"""Empirical C(eps): worst offset / sqrt(N) to the next N^eps-smooth integer.

Samples N uniformly in [lo, 2 lo] (seeded) and reports, per eps, the largest
offset seen and the share of N with no witness inside C sqrt(N).
"""

import argparse
import math

import numpy as np

from liouville_lab.multiplicative import smooth_offsets


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=int, default=10**6)
    ap.add_argument("--samples", type=int, default=10**4)
    ap.add_argument("--eps", default="0.2,0.25,0.3,0.4,0.5")
    ap.add_argument("--c", type=float, default=20.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng([args.seed, 0])
    Ns = np.sort(rng.integers(args.lo, 2 * args.lo + 1, args.samples))
    print("eps,samples,missing,max_offset,max_offset_over_sqrtN,median_offset_over_sqrtN")
    for eps in (float(e) for e in args.eps.split(",")):
        off = smooth_offsets(Ns, eps, args.c)
        found = off >= 0
        scaled = off[found] / np.sqrt(Ns[found].astype(float))
        mx = scaled.max() if scaled.size else math.nan
        med = np.median(scaled) if scaled.size else math.nan
        print(f"{eps:g},{Ns.size},{int((~found).sum())},{int(off.max())},{mx:.6g},{med:.6g}")


if __name__ == "__main__":
    main()
