"""Exhaustive subspace-design audits: the F3 counterexample, its F9 lift and two GK designs."""
import argparse
import time

from subdesign.codes import EvaluationScheme, default_scheme
from subdesign.designs import audit_design, f3_counterexample, gk_design, lift_design
from subdesign.fields import GF
from subdesign.io import pretty_json


def run(name, design, d):
    t0 = time.perf_counter()
    a = audit_design(design, d)
    return {"name": name, "a_weak": a.a_weak, "a_strong": a.a_strong,
            "subspaces": a.subspaces_checked, "exhaustive": a.exhaustive,
            "seconds": round(time.perf_counter() - t0, 3)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--skip-large", action="store_true", help="skip the q=23 audit (~10 s)")
    args = ap.parse_args()
    rows = [run("F3 counterexample", f3_counterexample(), 2),
            run("F3 counterexample lifted to F9", lift_design(f3_counterexample(), GF(3, 2)), 2),
            run("GK q=11 k=3 s=2 n=2", gk_design(3, EvaluationScheme(GF(11), 2, (1, 4), 2)), 2)]
    if not args.skip_large:
        rows.append(run("GK q=23 k=4 s=3 n=3", gk_design(4, default_scheme(GF(23), 3, 3)), 2))
    print(pretty_json(rows))


if __name__ == "__main__":
    main()
