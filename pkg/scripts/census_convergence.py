"""Census error against x for a few sign patterns.

    python3 scripts/census_convergence.py --x 1e5 1e6 1e7 1e8 --pattern 3:-1 3:0

Prints a CSV table; the last column fits the error to a / log x.
"""
import argparse
import math
import resource
import time

from eisensign.stats import SignPattern, census


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--x", type=float, nargs="+", default=[1e5, 1e6, 1e7, 1e8])
    ap.add_argument("--pattern", nargs="+", default=["3:-1", "3:0", "5:-1"])
    ap.add_argument("--include-one", action="store_true")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print("pattern,x,pairs,empirical,predicted,abs_error,error_times_log_x,seconds,max_rss_mb")
    for text in args.pattern:
        pattern = SignPattern.parse(text)
        for x in map(int, args.x):
            t = time.perf_counter()
            r = census(pattern, x, include_one=args.include_one, threads=args.threads)
            dt = time.perf_counter() - t
            err = float(r.empirical - r.predicted)
            rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
            print(f"{text},{x},{r.sample_size},{float(r.empirical):.6f},{float(r.predicted):.6f},"
                  f"{abs(err):.6f},{err * math.log(x):.4f},{dt:.2f},{rss:.0f}", flush=True)


if __name__ == "__main__":
    main()
