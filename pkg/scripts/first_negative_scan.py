"""Least prime p0(D) with (D/p0) = -1 over fundamental 1 < D <= X.

    python3 scripts/first_negative_scan.py --X 1e5 --top 10

Reports the largest log p0 / log D, overall and past a cutoff, next to the
Burgess exponent 1 / (4 sqrt e).
"""
import argparse

import numpy as np

from eisensign.stats import first_negative_scan


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--X", type=float, default=1e5)
    ap.add_argument("--top", type=int, default=10)
    ap.add_argument("--cutoff", type=int, default=1000)
    args = ap.parse_args()

    r = first_negative_scan(int(args.X))
    Ds, p0 = r["Ds"], r["p0"]
    ratio = np.log(p0) / np.log(Ds)
    print(f"discriminants: {r['count']}, max p0: {r['max_p0']}")
    print(f"max ratio {r['max_ratio']:.6f} at D={r['argmax_D']} (p0={r['p0_at_argmax']})")
    tail = Ds > args.cutoff
    if tail.any():
        i = int(np.argmax(np.where(tail, ratio, -1)))
        print(f"max ratio for D > {args.cutoff}: {ratio[i]:.6f} at D={int(Ds[i])} (p0={int(p0[i])})")
    print(f"Burgess exponent: {r['burgess_exponent']:.6f}")
    print()
    print("D,p0,ratio")
    for i in np.argsort(-ratio, kind="stable")[: args.top]:
        print(f"{int(Ds[i])},{int(p0[i])},{ratio[i]:.6f}")
    print()
    print("p0,count")
    values, counts = np.unique(p0, return_counts=True)
    for v, c in zip(values, counts):
        print(f"{int(v)},{int(c)}")


if __name__ == "__main__":
    main()
