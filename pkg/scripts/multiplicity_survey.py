"""Eigenvalue and sign agreement densities over all pairs of quadratic newforms.

    python3 scripts/multiplicity_survey.py --level 60 --weights 2 3 4

Buckets pairs by density and by whether they share a character or are
related by a quadratic twist, and prints a few examples per bucket.
"""
import argparse
from collections import Counter, defaultdict
from itertools import combinations

from eisensign.multone import (detect_twist, eigenvalue_agreement_density, quadratic_newforms,
                               sign_agreement_density)


def relation(f, g):
    if detect_twist(f, g) is not None:
        return "twist"
    if {f.chi1, f.chi2} & {g.chi1, g.chi2}:
        return "shared-character"
    return "none"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--level", type=int, default=60)
    ap.add_argument("--weights", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    ap.add_argument("--examples", type=int, default=3)
    args = ap.parse_args()

    eig, sgn = Counter(), Counter()
    seen = defaultdict(list)
    for k in args.weights:
        forms = quadratic_newforms(args.level, [k])
        for f, g in combinations(forms, 2):
            rel = relation(f, g)
            d = eigenvalue_agreement_density(f, g).density
            s = sign_agreement_density(f, g).density
            eig[(rel, d)] += 1
            sgn[(rel, s)] += 1
            if len(seen[(rel, d)]) < args.examples:
                seen[(rel, d)].append(f"{f.descriptor} vs {g.descriptor}")

    print("kind,relation,density,pairs,examples")
    for (rel, d), n in sorted(eig.items(), key=lambda kv: (kv[0][0], -kv[0][1])):
        print(f"eigenvalue,{rel},{d},{n},{' | '.join(seen[(rel, d)])}")
    for (rel, d), n in sorted(sgn.items(), key=lambda kv: (kv[0][0], -kv[0][1])):
        print(f"sign,{rel},{d},{n},")


if __name__ == "__main__":
    main()
