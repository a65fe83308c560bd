"""Randomized folded-Wronskian checks: independence criterion, degree bound and root multiplicities."""
import argparse

from subdesign.designs import wronskian_suite
from subdesign.fields import GF
from subdesign.io import pretty_json


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", default="11,17,101")
    ap.add_argument("--instances", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = {q: wronskian_suite(GF(int(q)), args.instances, seed=args.seed) for q in args.primes.split(",")}
    print(pretty_json(out))


if __name__ == "__main__":
    main()
