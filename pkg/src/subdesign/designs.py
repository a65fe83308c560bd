"""Folded Wronskians, the Guruswami-Kopparty design and exhaustive design audits.

A subspace design is a list H_1..H_n of subspaces of F^k.  For an ℓ-dimensional
U the strong sum is Σ dim(H_i ∩ U) and the weak sum counts the i with
H_i ∩ U ≠ 0.  Audits enumerate every U (or sample when the Grassmannian is
too large) and keep the first maximiser in canonical order as a witness.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import polys
from .codes import (EvaluationScheme, LinearCode, check_scheme_for_designs, default_scheme,
                    vandermonde_rows)
from .fields import GF, multiplicative_order, primitive_element
from .linalg import (DEFAULT_SUBSPACE_GUARD, SearchTooLarge, Subspace, enumerate_subspaces,
                     gaussian_binomial, mat_mul, nullspace_rows, pivot_patterns,
                     random_subspace, rank_rows)


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class SubspaceDesign:
    field: object
    k: int
    subspaces: tuple
    s: int
    provenance: str = "explicit-list"
    scheme: EvaluationScheme = None

    def __post_init__(self):
        for H in self.subspaces:
            if H.ambient != self.k or H.field != self.field:
                raise PreconditionError("design subspace lives in the wrong space")
        if self.provenance != "from-code":
            bad = [H.dim for H in self.subspaces if H.dim != self.k - self.s]
            if bad:
                raise PreconditionError(f"subspaces must have codimension {self.s}, found dims {bad}")

    @property
    def n(self):
        return len(self.subspaces)

    def sums(self, U: Subspace):
        dims = [U.meet_dim(H) for H in self.subspaces]
        return sum(dims), sum(1 for d in dims if d), dims

    def to_json(self):
        return {"field": self.field.spec, "k": self.k, "s": self.s, "provenance": self.provenance,
                "subspaces": [H.to_json() for H in self.subspaces]}


@dataclass(frozen=True)
class DesignAudit:
    ell: int
    a_strong: int
    a_weak: int
    witness_strong: Subspace
    witness_weak: Subspace
    exhaustive: bool
    subspaces_checked: int

    def to_json(self):
        return {"ell": self.ell, "A_strong": self.a_strong, "A_weak": self.a_weak,
                "witness": self.witness_strong.to_json() if self.witness_strong else None,
                "witness_weak": self.witness_weak.to_json() if self.witness_weak else None,
                "exhaustive": self.exhaustive, "subspaces_checked": self.subspaces_checked}


# -- bounds -----------------------------------------------------------------------

def _check_bound_args(k, s, ell):
    if not 1 <= ell <= s:
        raise PreconditionError(f"need 1 <= ℓ <= s, got ℓ={ell}, s={s}")
    if s > k:
        raise PreconditionError(f"need s <= k, got s={s}, k={k}")


def design_bound(k, s, ell) -> int:
    """Improved strong-design bound ⌊ℓ(k-ℓ)/(s-ℓ+1)⌋."""
    _check_bound_args(k, s, ell)
    return ell * (k - ell) // (s - ell + 1)


def old_gk_bound(k, s, ell) -> int:
    """The earlier Guruswami-Kopparty bound ⌊ℓ(k-1)/(s-ℓ+1)⌋."""
    _check_bound_args(k, s, ell)
    return ell * (k - 1) // (s - ell + 1)


def closed_field_floor(k, s, ell) -> int:
    """Below this value no weak design exists over an algebraically closed field."""
    _check_bound_args(k, s, ell)
    return ell * (k - ell) // (s - ell + 1)


# -- constructions ------------------------------------------------------------------

def gk_design(k, scheme: EvaluationScheme) -> SubspaceDesign:
    """H_i = polynomials of degree < k vanishing at γ^j α_i for all j < s."""
    try:
        check_scheme_for_designs(scheme, k)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc
    F = scheme.field
    subspaces = []
    for i in range(scheme.n):
        pts = scheme.position_points(i)
        constraints = [row for row in zip(*vandermonde_rows(F, pts, k))]  # one row (x^c)_c per point
        subspaces.append(Subspace.span(F, nullspace_rows(F, constraints, k), k))
    return SubspaceDesign(F, k, tuple(subspaces), scheme.s, "gk-construction", scheme)


def design_from_code(code: LinearCode) -> SubspaceDesign:
    """H_i = ker π_i for every position of a (folded) code."""
    subs = tuple(code.position_kernel(i) for i in range(code.n))
    return SubspaceDesign(code.field, code.k, subs, code.s, "from-code")


def explicit_design(F, vectors_per_subspace, k, s=None) -> SubspaceDesign:
    subs = tuple(Subspace.span(F, vs, k) for vs in vectors_per_subspace)
    if s is None:
        s = k - subs[0].dim if subs else 0
    return SubspaceDesign(F, k, subs, s, "explicit-list")


def f3_counterexample() -> SubspaceDesign:
    """Four planes in F_3^4 with no 2-dimensional U meeting all of them."""
    F = GF(3)
    e1, e2, e3, e4 = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
    H = [
        [e1, e2],
        [e3, e4],
        [(1, 0, 1, 0), (0, 1, 0, 1)],    # e1+e3, e2+e4
        [(1, 0, 0, 1), (0, 1, 2, 0)],    # e1+e4, e2-e3
    ]
    return explicit_design(F, H, 4, 2)


def lift_design(design: SubspaceDesign, F) -> SubspaceDesign:
    """Same spanning vectors read over an extension field of the same characteristic."""
    subs = []
    for H in design.subspaces:
        subs.append(Subspace.span(F, [[F.from_int(x) for x in r] for r in H.basis], design.k))
    return SubspaceDesign(F, design.k, tuple(subs), design.s, design.provenance)


# -- audits -------------------------------------------------------------------------

def _audit_patterns(design, ell, patterns):
    best_s = best_w = -1
    wit_s = wit_w = None
    count = 0
    hs = design.subspaces
    for U in enumerate_subspaces(design.field, design.k, ell, guard=float("inf"), patterns=patterns):
        count += 1
        strong = weak = 0
        for H in hs:
            d = U.meet_dim(H)
            if d:
                strong += d
                weak += 1
        if strong > best_s:
            best_s, wit_s = strong, U
        if weak > best_w:
            best_w, wit_w = weak, U
    return best_s, wit_s, best_w, wit_w, count


def audit_design(design: SubspaceDesign, ell: int, guard: int = DEFAULT_SUBSPACE_GUARD,
                 workers: int = 1) -> DesignAudit:
    """Exhaustive maxima of the strong and weak sums over all ℓ-dimensional U."""
    F = design.field
    total = gaussian_binomial(design.k, ell, F.q)
    if total > guard:
        raise SearchTooLarge(f"{ell}-subspaces of F_{F.q}^{design.k}", total, guard)
    patterns = pivot_patterns(design.k, ell)
    if workers > 1 and len(patterns) > 1:
        # one task per pivot pattern; merging in pattern order keeps the witness canonical
        chunks = [[p] for p in patterns]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_audit_patterns, [design] * len(chunks), [ell] * len(chunks), chunks))
    else:
        parts = [_audit_patterns(design, ell, patterns)]
    best_s = best_w = -1
    wit_s = wit_w = None
    count = 0
    for bs, ws, bw, ww, c in parts:
        count += c
        if bs > best_s:
            best_s, wit_s = bs, ws
        if bw > best_w:
            best_w, wit_w = bw, ww
    return DesignAudit(ell, max(best_s, 0), max(best_w, 0), wit_s, wit_w, True, count)


def sampled_audit(design: SubspaceDesign, ell: int, samples: int, seed) -> DesignAudit:
    """Seeded uniform ℓ-subspaces; can refute a design but never certify one."""
    rng = random.Random(seed)
    best_s = best_w = -1
    wit_s = wit_w = None
    for _ in range(samples):
        U = random_subspace(design.field, design.k, ell, rng)
        strong, weak, _ = design.sums(U)
        if strong > best_s:
            best_s, wit_s = strong, U
        if weak > best_w:
            best_w, wit_w = weak, U
    return DesignAudit(ell, max(best_s, 0), max(best_w, 0), wit_s, wit_w, False, samples)


def slack_check(code: LinearCode, b: int, mu, guard: int = DEFAULT_SUBSPACE_GUARD) -> dict:
    """Is the code μ-slacked b-designable?  A_strong(d') <= (R+μ)d'n for d' = 1..b."""
    mu = Fraction(mu)
    design = design_from_code(code)
    rows = []
    ok = True
    for d in range(1, b + 1):
        if d > code.k:
            rows.append({"d": d, "A_strong": 0, "allowed": str((code.rate + mu) * d * code.n), "ok": True})
            continue
        audit = audit_design(design, d, guard)
        allowed = (code.rate + mu) * d * code.n
        good = audit.a_strong <= allowed
        ok &= good
        rows.append({"d": d, "A_strong": audit.a_strong, "allowed": str(allowed), "ok": good})
    return {"designable": ok, "rate": str(code.rate), "mu": str(mu), "levels": rows}


# -- Wronskians ---------------------------------------------------------------------

def folded_wronskian(F, fs, gamma):
    """ℓ x ℓ matrix with entry (i, j) = f_j(γ^i X), i, j 0-indexed."""
    if gamma == 0:
        raise PreconditionError("γ must be nonzero")
    fs = [polys.trim(f) for f in fs]
    out = []
    g = F.one
    for _ in range(len(fs)):
        out.append([polys.substitute_scaled(F, f, g) for f in fs])
        g = F.mul(g, gamma)
    return out


def wronskian_det(F, fs, gamma):
    return polys.det(F, folded_wronskian(F, fs, gamma))


def check_wronskian_preconditions(F, gamma, k):
    if F.q is None:
        raise PreconditionError("the Wronskian criterion is checked over finite fields")
    if not k < F.q:
        raise PreconditionError(f"need k < q, got k={k}, q={F.q}")
    order = multiplicative_order(F, gamma)
    if order < k:
        raise PreconditionError(f"γ has multiplicative order {order} < k = {k}")


def independence_via_wronskian(F, fs, gamma, k=None) -> bool:
    """Linear independence of polynomials of degree < k via the folded Wronskian."""
    if k is None:
        k = max((len(polys.trim(f)) for f in fs), default=1)
    for f in fs:
        if len(polys.trim(f)) > k:
            raise PreconditionError("polynomial degree exceeds k - 1")
    check_wronskian_preconditions(F, gamma, k)
    return bool(wronskian_det(F, fs, gamma))


def wronskian_degree_report(F, fs, gamma, k) -> dict:
    """Degree and low-order-vanishing properties of the Wronskian determinant."""
    ell = len(fs)
    p = wronskian_det(F, fs, gamma)
    deg_bound = ell * k - comb(ell + 1, 2)
    low = comb(ell, 2)
    return {
        "nonzero": bool(p),
        "degree": polys.degree(p),
        "degree_bound": deg_bound,
        "degree_ok": polys.degree(p) <= deg_bound,
        "x_power": low,
        "x_power_ok": polys.lowest_degree(p) >= low,
    }


def root_multiplicity_report(design: SubspaceDesign, U: Subspace) -> list:
    """For a GK design: (X - γ^j α_i)^{dim(H_i ∩ U)} divides the Wronskian of U's
    basis for j = 0..s-ℓ.  Returns one entry per (i, j)."""
    scheme = design.scheme
    if scheme is None:
        raise PreconditionError("root multiplicities need a GK design with its scheme")
    F = design.field
    ell = U.dim
    p = wronskian_det(F, [polys.trim(r) for r in U.basis], scheme.gamma)
    out = []
    for i, H in enumerate(design.subspaces):
        d = U.meet_dim(H)
        for j in range(0, scheme.s - ell + 1):
            root = scheme.points[i * scheme.s + j]
            ok = polys.divides(F, polys.power(F, polys.linear(F, root), d), p) if d else True
            out.append({"position": i, "shift": j, "multiplicity": d, "ok": ok})
    return out


# -- subcode puncturing bound ------------------------------------------------------------

def puncture_sum_bound_check(code: LinearCode, message_basis) -> dict:
    """Σ_i dim(V|_{I_i}) against n·v - v(k-v)/(s-v+1) for V = image of the messages."""
    F = code.field
    msgs = [tuple(F.coerce(x) for x in r) for r in message_basis]
    v = rank_rows(F, msgs, code.k) if msgs else 0
    if v > code.s:
        raise PreconditionError(f"dim V = {v} exceeds s = {code.s}")
    lhs = 0
    if v:
        for i in range(code.n):
            lhs += rank_rows(F, mat_mul(F, msgs, code.encoder(i), code.s), code.s)
    bound = Fraction(code.n * v) - Fraction(v * (code.k - v), code.s - v + 1)
    return {"dim_V": v, "lhs": lhs, "bound": str(bound), "holds": lhs >= bound}


# -- randomized Wronskian suite ------------------------------------------------------------

def wronskian_suite(F, instances: int, seed, max_ell: int = 3) -> dict:
    """Random checks of the Wronskian facts over one finite field.

    Each instance draws ℓ polynomials of degree < k (sometimes made dependent on
    purpose) and checks: Wronskian criterion ⟺ rank ℓ, the degree bound, the
    X^{C(ℓ,2)} factor, and root multiplicities on a GK design for a sampled U."""
    rng = random.Random(seed)
    g = primitive_element(F)
    failures = []
    counts = {"instances": 0, "independent": 0, "dependent": 0, "multiplicity_checks": 0,
              "positive_multiplicities": 0}
    for t in range(instances):
        ell = rng.randint(1, max_ell)
        k = rng.randint(ell, min(F.q - 1, ell + 4))
        fs = [[F.random(rng) for _ in range(k)] for _ in range(ell)]
        if ell > 1 and rng.random() < 0.25:
            # force a dependency: last = combination of the others
            cs = [F.random(rng) for _ in range(ell - 1)]
            fs[-1] = [F.zero] * k
            for c, f in zip(cs, fs[:-1]):
                fs[-1] = [F.add(x, F.mul(c, y)) for x, y in zip(fs[-1], f)]
        counts["instances"] += 1
        indep_rank = rank_rows(F, fs, k) == ell
        crit = independence_via_wronskian(F, fs, g, k)
        counts["independent" if indep_rank else "dependent"] += 1
        rep = wronskian_degree_report(F, fs, g, k)
        if crit != indep_rank:
            failures.append({"instance": t, "check": "criterion", "ell": ell, "k": k})
        if rep["nonzero"] and not (rep["degree_ok"] and rep["x_power_ok"]):
            failures.append({"instance": t, "check": "degree/x-power", "ell": ell, "k": k, **rep})
        # root multiplicities on a GK design
        s = rng.randint(ell, ell + 2)
        n_max = (F.q - 1) // s
        if n_max >= 1 and s + 1 < F.q:
            n = rng.randint(1, min(3, n_max))
            kk = rng.randint(s, min(F.q - 1, s + 3))
            design = gk_design(kk, default_scheme(F, n, s))
            vecs = []
            H = design.subspaces[rng.randrange(n)]
            if H.dim and rng.random() < 0.5:
                vecs.append(combine_random(F, H.basis, kk, rng))
            while len(vecs) < ell:
                vecs.append([F.random(rng) for _ in range(kk)])
            U = Subspace.span(F, vecs, kk)
            if U.dim == ell:
                for row in root_multiplicity_report(design, U):
                    counts["multiplicity_checks"] += 1
                    counts["positive_multiplicities"] += row["multiplicity"] > 0
                    if not row["ok"]:
                        failures.append({"instance": t, "check": "root-multiplicity", **row})
    return {"field": F.spec, "gamma": F.to_json(g), "seed": seed, **counts, "failures": failures}


def combine_random(F, basis, k, rng):
    out = [F.zero] * k
    for r in basis:
        c = F.random(rng)
        out = [F.add(x, F.mul(c, y)) for x, y in zip(out, r)]
    return out
