"""Monte Carlo sweep of the containment frequency of random linear codes across the threshold rate."""
import argparse
from fractions import Fraction

from subdesign.fields import GF
from subdesign.io import pretty_json
from subdesign.profiles import monte_carlo_threshold, threshold_rate, weight_profile


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--w", type=int, default=10)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    P = weight_profile(GF(2), args.n, args.w)
    rv = threshold_rate(P).rate
    rows = []
    for k in range(1, args.n):
        R = Fraction(k, args.n)
        mc = monte_carlo_threshold(P, R, args.trials, seed=args.seed)
        rows.append({"rate": str(R), "frequency": mc["frequency"]})
    print(pretty_json({"n": args.n, "w": args.w, "threshold": str(rv), "sweep": rows}))


if __name__ == "__main__":
    main()
