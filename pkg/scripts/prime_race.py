"""Prime race S(y) = sum_{p <= y} (D/p) for a few discriminants.

    python3 scripts/prime_race.py --D 5 8 12 13 --X 1e7
"""
import argparse

from eisensign.chars import char_from_discriminant
from eisensign.stats import prime_race


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--D", type=int, nargs="+", default=[5, 8, 12, 13, 17, 21, 24])
    ap.add_argument("--X", type=float, default=1e7)
    ap.add_argument("--points", type=int, default=400)
    ap.add_argument("--series", action="store_true", help="also print every grid point")
    args = ap.parse_args()

    print("D,X,S(X),negative_fraction,predicted_bias")
    for D in args.D:
        r = prime_race(char_from_discriminant(D), int(args.X), args.points)
        last = r["series"][-1][1]
        bias = r["predicted_bias"]
        print(f"{D},{int(args.X)},{last},{float(r['negative_fraction']):.4f},"
              f"{'' if bias is None else f'{bias:.4f}'}")
        if args.series:
            for y, s in r["series"]:
                print(f"  {y},{s}")


if __name__ == "__main__":
    main()
