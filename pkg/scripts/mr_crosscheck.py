"""Cross-check the reduced-mode MR oracle against the generic random-point oracle on every pattern."""
import argparse
import time

from subdesign.io import pretty_json
from subdesign.matroids import all_patterns
from subdesign.mr_oracle import algorithm1_params, generic_reference_oracle, mr_independent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()
    P = algorithm1_params(args.m, args.n, 1, 1, "reduced")
    t0 = time.perf_counter()
    counts, mismatches = {}, []
    for E in all_patterns(args.m, args.n):
        v = mr_independent(E, P)
        counts[v.decision] = counts.get(v.decision, 0) + 1
        refs = {generic_reference_oracle(args.m, args.n, 1, 1, E, trials=args.trials, seed=s)["decision"]
                for s in range(args.seeds)}
        if refs != {v.decision}:
            mismatches.append({"cells": sorted(E.cells), "oracle": v.decision, "reference": sorted(refs)})
    print(pretty_json({"params": {"s": P.s, "t": P.t, "a_prime": P.a_prime, "b_prime": P.b_prime},
                       "decisions": counts, "mismatches": mismatches,
                       "seconds": round(time.perf_counter() - t0, 2)}))


if __name__ == "__main__":
    main()
