"""Command-line front end: every verifier, audit and oracle with reproducible JSON.

Each subcommand prints a report {command, params, result, bound fields...} as
JSON with sorted keys.  Exit codes: 0 verified or decided, 1 violation or
DEPENDENT, 2 guard refusal, UNDECIDED or malformed input.  `--manifest FILE`
writes a RunManifest; `subdesign rerun FILE` replays it and compares digests.
"""
from __future__ import annotations

import argparse
import shlex
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import __version__
from .codes import CodeError, default_scheme, folded_rs_code, is_mds, rs_code
from .designs import (PreconditionError, audit_design, closed_field_floor, design_bound,
                      design_from_code, f3_counterexample, gk_design, lift_design, old_gk_bound,
                      wronskian_suite)
from .fields import GF, FieldError, field_from_spec
from .io import InputError, canonical_json, digest, load, load_json, pretty_json
from .linalg import DEFAULT_SUBSPACE_GUARD, SearchTooLarge
from .matroids import (DEFAULT_PATTERN_GUARD, ErasurePattern, PatternError, PotentialMatroid,
                       abstract_birigidity_audit, all_patterns, check_scaling_margins,
                       correctability_oracle,
                       full_pattern, matroid_axiom_audit, monotonicity_check, potential_oracle,
                       scaling_lemma_check, stand_in_code)
from .mr_oracle import (DEPENDENT, INDEPENDENT, UNDECIDED, MarginError, algorithm1_params,
                        generic_reference_oracle, mr_independent, mr_rank,
                        verify_verdict_certificate)
from .profiles import (ProfileError, contains_profile, monte_carlo_threshold, theorem_tail,
                       threshold_rate, validate_witness)

EXIT_OK, EXIT_VIOLATION, EXIT_GUARD = 0, 1, 2


@dataclass
class RunManifest:
    command: str
    argv: list
    params: dict
    seed: int
    guards: dict
    version: str
    wall_time: float
    result_digest: str

    def rerun_command(self):
        return "subdesign " + " ".join(shlex.quote(a) for a in self.argv)


class Outcome:
    """Result payload plus exit code."""

    def __init__(self, result: dict, code: int = EXIT_OK, **extra):
        self.result, self.code, self.extra = result, code, extra


# -- helpers ----------------------------------------------------------------------

def _field(spec):
    try:
        return field_from_spec(spec)
    except FieldError as exc:
        raise InputError(f"--field: {exc}") from exc


def _ints(text, name):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"{name}: expected comma-separated integers, got {text!r}") from exc


def _pattern_arg(args, m, n):
    if args.pattern:
        E = load(args.pattern, "pattern")
        if (E.m, E.n) != (m, n):
            raise InputError(f"{args.pattern}: pattern is {E.m}x{E.n}, expected {m}x{n}")
        return E
    if args.cells is not None:
        cells = []
        for tok in args.cells.split(";"):
            if tok.strip():
                i, j = _ints(tok, "--cells")
                cells.append((i, j))
        try:
            return ErasurePattern(m, n, tuple(cells))
        except PatternError as exc:
            raise InputError(f"--cells: {exc}") from exc
    return None


def _scheme_code(args):
    F = _field(args.field)
    scheme = default_scheme(F, args.n, args.s, args.gamma)
    return F, scheme


# -- design ---------------------------------------------------------------------

def cmd_design_audit(args):
    if bool(args.design) == bool(args.code):
        raise InputError("design audit: give exactly one of --design or --code")
    design = load(args.design, "design") if args.design else design_from_code(load(args.code, "code"))
    audit = audit_design(design, args.ell, args.guard_subspaces, args.threads)
    res = {"params": {"k": design.k, "s": design.s, "n": design.n, "field": design.field.spec, "ell": args.ell},
           **audit.to_json()}
    code = EXIT_OK
    if 1 <= args.ell <= design.s <= design.k:
        res["bound"] = design_bound(design.k, design.s, args.ell)
        res["old_bound"] = old_gk_bound(design.k, design.s, args.ell)
        res["closed_field_floor"] = closed_field_floor(design.k, design.s, args.ell)
        if args.expect_strong and audit.a_strong > res["bound"]:
            code = EXIT_VIOLATION
    return Outcome(res, code)


def cmd_design_gk(args):
    F, scheme = _scheme_code(args)
    design = gk_design(args.k, scheme)
    audit = audit_design(design, args.ell, args.guard_subspaces, args.threads)
    bound = design_bound(args.k, args.s, args.ell)
    res = {"params": {"field": F.spec, "k": args.k, "s": args.s, "n": args.n, "ell": args.ell},
           "scheme": scheme.to_json(), **audit.to_json(), "bound": bound,
           "old_bound": old_gk_bound(args.k, args.s, args.ell)}
    return Outcome(res, EXIT_OK if audit.a_strong <= bound else EXIT_VIOLATION)


def cmd_design_f3(args):
    design = f3_counterexample()
    F = _field(args.field)
    if F != design.field:
        design = lift_design(design, F)
    audit = audit_design(design, args.ell, args.guard_subspaces, args.threads)
    res = {"params": {"field": F.spec, "k": 4, "s": 2, "n": 4, "ell": args.ell}, **audit.to_json(),
           "meets_all": audit.a_weak == design.n,
           "closed_field_floor": closed_field_floor(4, 2, args.ell)}
    return Outcome(res)


# -- wronskian ------------------------------------------------------------------

def cmd_wronskian_check(args):
    F = _field(args.field)
    if F.q is None:
        raise InputError("--field: the Wronskian suite needs a finite field")
    rep = wronskian_suite(F, args.instances, args.seed, args.max_ell)
    return Outcome(rep, EXIT_VIOLATION if rep["failures"] else EXIT_OK)


# -- profiles -------------------------------------------------------------------

def cmd_profile_threshold(args):
    profile = load(args.profile, "profile")
    th = threshold_rate(profile, args.guard_subspaces)
    return Outcome({"params": {"field": profile.field.spec, "b": profile.b, "n": profile.n}, **th.to_json()})


def cmd_profile_contains(args):
    profile = load(args.profile, "profile")
    code = load(args.code, "code")
    w = contains_profile(code, profile, args.guard_containment, args.exclude_trivial)
    th = threshold_rate(profile, args.guard_subspaces)
    res = {"params": {"field": code.field.spec, "k": code.k, "n": code.n, "s": code.s, "b": profile.b},
           "rate": str(code.rate), "R_V": str(th.rate), "contained": w is not None,
           "witness": w.to_json(code.field) if w else None}
    if w is not None:
        res["witness_verified"] = validate_witness(code, profile, w)
        if not res["witness_verified"]:
            return Outcome(res, EXIT_VIOLATION)
    return Outcome(res)


def cmd_profile_montecarlo(args):
    profile = load(args.profile, "profile")
    try:
        R = Fraction(args.rate)
        eps = Fraction(args.eps)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--rate/--eps: {exc}") from exc
    th = threshold_rate(profile, args.guard_subspaces)
    rep = monte_carlo_threshold(profile, R, args.trials, args.seed, not args.include_trivial,
                                args.guard_containment)
    tail = theorem_tail(profile.field.q, eps, profile.n, profile.b)
    side = "above" if R >= th.rate + eps else "below" if R <= th.rate - eps else "window"
    res = {**rep, "R_V": str(th.rate), "eps": str(eps), "side": side, "theorem_tail": tail}
    code = EXIT_OK
    if tail < 0.1 and ((side == "above" and rep["frequency"] < 0.9) or (side == "below" and rep["frequency"] > 0.1)):
        code = EXIT_VIOLATION
    return Outcome(res, code)


# -- codes ----------------------------------------------------------------------

def cmd_code_mds(args):
    if args.code:
        code = load(args.code, "code")
    else:
        if args.points is None or args.k is None:
            raise InputError("code mds: give --code FILE or --field/--points/--k")
        F = _field(args.field)
        try:
            code = rs_code(F, _ints(args.points, "--points"), args.k)
        except CodeError as exc:
            raise InputError(f"code mds: {exc}") from exc
    ok = is_mds(code, args.guard_minors)
    res = {"params": {"field": code.field.spec, "k": code.k, "n": code.length}, "mds": ok,
           "singleton_distance": code.length - code.k + 1}
    return Outcome(res, EXIT_OK if ok else EXIT_VIOLATION)


# -- matroids -------------------------------------------------------------------

def _potential(args):
    C = load(args.code, "code")
    if C.field.q is None and C.k > 1:
        C = stand_in_code(C)
    return C, PotentialMatroid(C, args.n, args.b, args.guard_subspaces)


def cmd_matroid_audit(args):
    C, pm = _potential(args)
    m, n, b = C.n, args.n, args.b
    a = m - C.k
    rep = {"params": {"field": C.field.spec, "m": m, "n": n, "a": a, "b": b},
           "axioms": matroid_axiom_audit(pm.rank, m, n, args.guard_patterns),
           "birigidity_potential": abstract_birigidity_audit(potential_oracle(pm), m, n, a, b),
           "expected_rank": b * m + a * n - a * b}
    ok = rep["axioms"].get("passed", False) and rep["birigidity_potential"]["passed"]
    if args.row_code:
        R = load(args.row_code, "code")
        if R.field != C.field or R.n != n:
            raise InputError(f"{args.row_code}: row code must be over {C.field.spec} with length {n}")
        rep["monotonicity"] = monotonicity_check(C, R, b, args.guard_patterns)
        rep["birigidity_tensor"] = abstract_birigidity_audit(correctability_oracle(C, R), m, n, a, n - R.k)
        ok = ok and rep["monotonicity"]["passed"] and rep["birigidity_tensor"]["passed"]
    return Outcome(rep, EXIT_OK if ok else EXIT_VIOLATION)


def cmd_matroid_phi(args):
    C, pm = _potential(args)
    E = _pattern_arg(args, C.n, args.n) or full_pattern(C.n, args.n)
    phi, U = pm.phi(E)
    F = C.field
    res = {"params": {"field": F.spec, "m": C.n, "n": args.n, "b": args.b}, "E": E.to_json(),
           "phi": phi, "rank": len(E) - phi, "independent": phi == 0,
           "maximiser": [[F.to_json(x) for x in w] for w in U]}
    if len(E) == C.n * args.n:
        res["bound_full_grid"] = (args.n - args.b) * C.k
    return Outcome(res)


def cmd_matroid_scale_check(args):
    C = load(args.code, "code")
    try:
        check_scaling_margins(C.n, args.n, args.b, args.t, args.d)
    except PatternError as exc:
        raise MarginError(str(exc)) from exc
    E = _pattern_arg(args, C.n, args.n)
    pats = [E] if E else list(all_patterns(C.n, args.n, args.guard_patterns))
    src = C if C.field.q is not None or C.k <= 1 else stand_in_code(C)
    pm = PotentialMatroid(src, args.n, args.b, args.guard_subspaces)
    rows = [scaling_lemma_check(C, args.b, P, args.t, args.d, pm) for P in pats]
    ok = all(r["agree"] and r["certificate_verified"] is not False for r in rows)
    res = {"params": {"field": C.field.spec, "m": C.n, "n": args.n, "b": args.b, "t": args.t, "d": args.d},
           "margins": {"d_below_t_over_m": args.d * C.n < args.t, "d_above": args.d > (C.n - 1) * (args.n - args.b)},
           "patterns": len(rows), "agree": sum(r["agree"] for r in rows), "rows": rows}
    return Outcome(res, EXIT_OK if ok else EXIT_VIOLATION)


# -- MR oracle ------------------------------------------------------------------

def _params(args):
    primes = _ints(args.primes, "--primes") if args.primes else None
    try:
        return algorithm1_params(args.m, args.n, args.a, args.b, args.mode, args.t, args.d,
                                 args.s, args.dprime, primes)
    except MarginError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _verdict_code(decision):
    return {INDEPENDENT: EXIT_OK, DEPENDENT: EXIT_VIOLATION, UNDECIDED: EXIT_GUARD}[decision]


def cmd_mr_independent(args):
    P = _params(args)
    E = _pattern_arg(args, args.m, args.n)
    if E is None:
        raise InputError("mr independent: give --pattern FILE or --cells 'i,j;i,j'")
    v = mr_independent(E, P)
    res = {"params": P.to_json(), "E": E.to_json(), **v.to_json(),
           "rank_bound": P.b * P.m + P.a * P.n - P.a * P.b}
    return Outcome(res, _verdict_code(v.decision))


def cmd_mr_rank(args):
    P = _params(args)
    E = _pattern_arg(args, args.m, args.n) or full_pattern(args.m, args.n)
    r = mr_rank(E, P)
    expected = P.b * P.m + P.a * P.n - P.a * P.b
    res = {"params": P.to_json(), "E": E.to_json(), "rank": r, "rank_full_expected": expected,
           "conditional": P.a >= 2 and P.m - P.a >= 4}
    code = EXIT_OK
    if len(E) == P.m * P.n and r != expected:
        code = EXIT_VIOLATION
    return Outcome(res, code)


def cmd_mr_crosscheck(args):
    P = _params(args)
    pair = P.pair()
    mismatches, undecided, bad_certs = [], 0, []
    counts = {INDEPENDENT: 0, DEPENDENT: 0, UNDECIDED: 0}
    seeds = [args.seed + i for i in range(args.seeds)]
    for E in all_patterns(args.m, args.n, args.guard_patterns):
        v = mr_independent(E, P)
        counts[v.decision] += 1
        if v.decision == UNDECIDED:
            undecided += 1
            continue
        if not verify_verdict_certificate(pair, E, {"decision": v.decision, "certificate": v.certificate}):
            bad_certs.append(E.to_json())
        ref = {generic_reference_oracle(args.m, args.n, args.a, args.b, E, trials=args.trials, seed=s)["decision"]
               for s in seeds}
        if ref != {v.decision}:
            mismatches.append({"E": E.to_json(), "algorithm1": v.decision, "generic": sorted(ref)})
    res = {"params": P.to_json(), "patterns": sum(counts.values()), "counts": counts,
           "reference": {"trials": args.trials, "seeds": seeds, "prime": str(2 ** 61 - 1)},
           "mismatches": mismatches, "certificate_failures": bad_certs}
    if mismatches or bad_certs:
        return Outcome(res, EXIT_VIOLATION)
    return Outcome(res, EXIT_GUARD if undecided else EXIT_OK)


# -- parser ---------------------------------------------------------------------

def _common(p):
    p.add_argument("--seed", type=int, default=0, help="master seed for randomized subcommands")
    p.add_argument("--guard-subspaces", type=int, default=DEFAULT_SUBSPACE_GUARD,
                   help="maximum number of subspaces an exhaustive search may visit")
    p.add_argument("--guard-patterns", type=int, default=DEFAULT_PATTERN_GUARD,
                   help="maximum number of erasure patterns an exhaustive audit may visit")
    p.add_argument("--guard-containment", type=int, default=10 ** 6,
                   help="maximum size of a containment search space")
    p.add_argument("--guard-minors", type=int, default=10 ** 6, help="maximum number of minors for MDS checks")
    p.add_argument("--threads", type=int, default=1, help="cap on worker processes")
    p.add_argument("--output", choices=("json", "table"), default="json")
    p.add_argument("--manifest", help="write a RunManifest JSON to this path")


def _pattern_opts(p):
    p.add_argument("--pattern", help="pattern file {m, n, cells}")
    p.add_argument("--cells", help="inline cells, e.g. '1,1;2,2' (1-indexed)")


def _mr_opts(p):
    for name in ("m", "n", "a", "b"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--mode", choices=("paper", "reduced", "modular"), default="reduced")
    for name in ("t", "d", "s", "dprime"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--primes", help="comma-separated ladder (modular mode only)")


def build_parser():
    top = argparse.ArgumentParser(prog="subdesign", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=__version__)
    groups = top.add_subparsers(dest="group", required=True)

    def sub(group, name, fn, help_):
        p = group.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(fn=fn, command=f"{group.group_name} {name}")
        return p

    def add_group(name, help_):
        g = groups.add_parser(name, help=help_).add_subparsers(dest="cmd", required=True)
        g.group_name = name
        return g

    g = add_group("design", "subspace design constructions and audits")
    p = sub(g, "audit", cmd_design_audit, "exhaustive audit of a design or of a code's position kernels")
    p.add_argument("--design")
    p.add_argument("--code")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--expect-strong", action="store_true", help="exit 1 if A_strong exceeds the bound")
    p = sub(g, "gk", cmd_design_gk, "Guruswami-Kopparty design audited against the improved bound")
    p.add_argument("--field", required=True)
    for name in ("k", "s", "n", "ell"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--gamma", type=int)
    p = sub(g, "f3", cmd_design_f3, "the four-plane F_3 example, optionally lifted to F_9")
    p.add_argument("--field", default="3")
    p.add_argument("--ell", type=int, default=2)

    g = add_group("wronskian", "folded Wronskian checks")
    p = sub(g, "check", cmd_wronskian_check, "randomized criterion, degree and root-multiplicity suite")
    p.add_argument("--field", required=True)
    p.add_argument("--instances", type=int, default=300)
    p.add_argument("--max-ell", type=int, default=3)

    g = add_group("profile", "local profiles and threshold rates")
    p = sub(g, "threshold", cmd_profile_threshold, "exact threshold rate R_V")
    p.add_argument("--profile", required=True)
    p = sub(g, "contains", cmd_profile_contains, "search a code for a profile witness")
    p.add_argument("--profile", required=True)
    p.add_argument("--code", required=True)
    p.add_argument("--exclude-trivial", action="store_true", help="skip the b=1 zero-column witness")
    p = sub(g, "montecarlo", cmd_profile_montecarlo, "containment frequency of random codes at rate R")
    p.add_argument("--profile", required=True)
    p.add_argument("--rate", required=True)
    p.add_argument("--eps", default="1/4")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--include-trivial", action="store_true", help="count the b=1 zero-column witness")

    g = add_group("code", "code utilities")
    p = sub(g, "mds", cmd_code_mds, "all k x k minors nonsingular?")
    p.add_argument("--code")
    p.add_argument("--field", default="7")
    p.add_argument("--points")
    p.add_argument("--k", type=int)

    g = add_group("matroid", "potential and correctability matroids")
    p = sub(g, "audit", cmd_matroid_audit, "rank axioms, birigidity and monotonicity")
    p.add_argument("--code", required=True, help="column code C_col")
    p.add_argument("--row-code", help="row code for the monotonicity check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p = sub(g, "phi", cmd_matroid_phi, "Φ(E) and r(E) with the maximising subcode")
    p.add_argument("--code", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    _pattern_opts(p)
    p = sub(g, "scale-check", cmd_matroid_scale_check, "potential independence vs the scaled RS tensor")
    p.add_argument("--code", required=True, help="column code over Q")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    _pattern_opts(p)

    g = add_group("mr", "scaling oracle for MR(m, n, a, b)")
    p = sub(g, "independent", cmd_mr_independent, "verdict with certificate for one pattern")
    _mr_opts(p)
    _pattern_opts(p)
    p = sub(g, "rank", cmd_mr_rank, "greedy rank (full grid by default)")
    _mr_opts(p)
    _pattern_opts(p)
    p = sub(g, "crosscheck", cmd_mr_crosscheck, "all patterns against the generic reference oracle")
    _mr_opts(p)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seeds", type=int, default=3)

    p = groups.add_parser("rerun", help="replay a manifest and compare result digests")
    p.add_argument("manifest")
    p.set_defaults(fn=None, command="rerun")
    return top


def _params_of(args):
    skip = {"fn", "command", "group", "cmd", "output", "manifest"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def render_table(report: dict) -> str:
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        elif isinstance(v, list) and len(v) > 8:
            lines.append((prefix, f"[{len(v)} items]"))
        else:
            lines.append((prefix, canonical_json(v) if isinstance(v, (list, dict)) else str(v)))

    walk("", report)
    width = max((len(k) for k, _ in lines), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in lines)


def run(argv):
    """Execute one command; returns (report dict, exit code, manifest, parsed args)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.group == "rerun":
        return (*_rerun(args.manifest), args)
    t0 = time.perf_counter()
    try:
        out = args.fn(args)
        status = {EXIT_OK: "ok", EXIT_VIOLATION: "violation", EXIT_GUARD: "undecided"}[out.code]
        result, code = out.result, out.code
    except SearchTooLarge as exc:
        result = {"guard": {"what": exc.what, "estimate": exc.estimate, "guard": exc.guard}}
        status, code = "guard", EXIT_GUARD
    except (MarginError, PreconditionError, ProfileError) as exc:
        result = {"refused": str(exc)}
        status, code = "refused", EXIT_GUARD
    report = {"command": args.command, "status": status, "result": result, "params": _params_of(args)}
    manifest = RunManifest(args.command, list(argv), _params_of(args), args.seed,
                           {"subspaces": args.guard_subspaces, "patterns": args.guard_patterns,
                            "containment": args.guard_containment, "minors": args.guard_minors},
                           __version__, round(time.perf_counter() - t0, 6), digest(report))
    return report, code, manifest, args


def _rerun(path):
    d = load_json(path)
    for key in ("argv", "result_digest"):
        if key not in d:
            raise InputError(f"{path}: missing key {key!r}")
    report, code, manifest, _ = run(d["argv"])
    same = manifest.result_digest == d["result_digest"]
    rep = {"command": "rerun", "status": "ok" if same else "violation",
           "result": {"reproduced": same, "digest": manifest.result_digest, "expected": d["result_digest"],
                      "original_command": d.get("command")}, "params": {"manifest": str(path)}}
    return rep, EXIT_OK if same else EXIT_VIOLATION, None


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        report, code, manifest, args = run(argv)
    except (InputError, CodeError, FieldError, PatternError) as exc:
        print(f"subdesign: error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    fmt = getattr(args, "output", "json")
    print(render_table(report) if fmt == "table" else pretty_json(report))
    path = getattr(args, "manifest", None) if manifest is not None else None
    if path:
        body = asdict(manifest)
        body["rerun"] = manifest.rerun_command()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(pretty_json(body) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
