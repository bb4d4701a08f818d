"""Partial sums of theta and the empirical mean of eta(D1, D2).

    python3 scripts/theta_eta.py --terms 10 50 200 --x 1e3 1e4 1e5 1e6
"""
import argparse

from eisensign.stats import average_eta, theta_constant


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--terms", type=int, nargs="+", default=[1, 5, 25, 100, 200])
    ap.add_argument("--x", type=float, nargs="+", default=[1e3, 1e4, 1e5, 1e6])
    ap.add_argument("--include-one", action="store_true")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print("terms,theta_partial")
    for L in args.terms:
        print(f"{L},{theta_constant(L, 30)}")
    print()
    print("x,pairs,resolved,unresolved,mean_eta")
    for x in map(int, args.x):
        r = average_eta(x, include_one=args.include_one, threads=args.threads)
        print(f"{x},{r.pairs},{r.resolved},{r.unresolved},{float(r.mean):.6f}", flush=True)


if __name__ == "__main__":
    main()
