"""Local profiles, the potential function, threshold rates and profile containment.

A b-local profile is a list V_1..V_n of subspaces of F_q^b.  A code contains the
profile when b pairwise-distinct codewords c_1..c_b exist whose rows
(c_1[i], ..., c_b[i]) lie in V_i for every coordinate i.  The threshold rate R_V
is computed exactly as a min over distinct-row subspaces U of a max over proper
W ⊊ U of the crossing rate 1 - S/(nΔd).
"""
from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .codes import LinearCode, random_linear_code, unfold
from .linalg import (DEFAULT_SUBSPACE_GUARD, SearchTooLarge, Subspace, combine,
                     enumerate_all_subspaces, gaussian_binomial, nullspace_rows,
                     random_subspace, rank_rows)

DEFAULT_CONTAINMENT_GUARD = 10 ** 6


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class LocalProfile:
    field: object
    b: int
    subspaces: tuple

    def __post_init__(self):
        for V in self.subspaces:
            if V.ambient != self.b or V.field != self.field:
                raise ProfileError(f"profile subspace must live in F^{self.b}")

    @property
    def n(self):
        return len(self.subspaces)

    def to_json(self):
        return {"q": self.field.q, "field": self.field.spec, "b": self.b, "n": self.n,
                "subspaces": [V.to_json() for V in self.subspaces]}


@dataclass(frozen=True)
class ContainmentWitness:
    messages: tuple        # f_1..f_b
    matrix: tuple          # n x b (unfolded coordinates)
    U: Subspace
    trivial: bool = False  # b = 1 and the witness is the zero column (U = 0)

    def to_json(self, F):
        return {"messages": [[F.to_json(x) for x in f] for f in self.messages],
                "matrix": [[F.to_json(x) for x in r] for r in self.matrix],
                "U": self.U.to_json(), "trivial": self.trivial}


def make_profile(F, b, bases) -> LocalProfile:
    return LocalProfile(F, b, tuple(Subspace.span(F, B, b) for B in bases))


def zero_profile(F, b, n):
    return LocalProfile(F, b, tuple(Subspace.zero(F, b) for _ in range(n)))


def full_profile(F, b, n):
    return LocalProfile(F, b, tuple(Subspace.full(F, b) for _ in range(n)))


def weight_profile(F, n, w):
    """b = 1 profile: V_i = F for the first w coordinates and 0 elsewhere."""
    return LocalProfile(F, 1, tuple(Subspace.full(F, 1) if i < w else Subspace.zero(F, 1) for i in range(n)))


def random_profile(F, b, n, rng: random.Random) -> LocalProfile:
    subs = []
    for _ in range(n):
        d = rng.randint(0, b)
        subs.append(random_subspace(F, b, d, rng))
    return LocalProfile(F, b, tuple(subs))


def is_distinct_rows(U: Subspace) -> bool:
    """Every pair of coordinates is separated by some vector of U."""
    cols = [tuple(r[j] for r in U.basis) for j in range(U.ambient)]
    return len(set(cols)) == len(cols)


def potential(profile: LocalProfile, U: Subspace, R) -> Fraction:
    """Φ(V, U, R) = -n dim U + Σ dim(V_i ∩ U) + R n dim U."""
    if U.ambient != profile.b:
        raise ProfileError("U must live in F^b")
    R = Fraction(R)
    n, d = profile.n, U.dim
    return -n * d + sum(U.meet_dim(V) for V in profile.subspaces) + R * n * d


def crossing_rate(profile: LocalProfile, U: Subspace, W: Subspace) -> Fraction:
    """ρ(U, W) = 1 - S/(n Δd): Φ(U) <= Φ(W) exactly when R <= ρ."""
    S = sum(U.meet_dim(V) - W.meet_dim(V) for V in profile.subspaces)
    dd = U.dim - W.dim
    return 1 - Fraction(S, profile.n * dd)


@dataclass(frozen=True)
class ThresholdResult:
    rate: Fraction
    U: Subspace
    W: Subspace
    vacuous: bool           # no distinct-row U of positive dimension exists
    pairs_checked: int

    def to_json(self):
        return {"R_V": str(self.rate), "U": self.U.to_json() if self.U else None,
                "W": self.W.to_json() if self.W else None, "vacuous": self.vacuous,
                "pairs_checked": self.pairs_checked}


def threshold_rate(profile: LocalProfile, guard: int = DEFAULT_SUBSPACE_GUARD) -> ThresholdResult:
    """Exact R_V with the minimising U and its best proper W."""
    F, b, n = profile.field, profile.b, profile.n
    subs = list(enumerate_all_subspaces(F, b, guard))
    if len(subs) ** 2 > guard:
        raise SearchTooLarge(f"pairs of subspaces of F_{F.q}^{b}", len(subs) ** 2, guard)
    # Σ_i dim(V_i ∩ X) for every subspace X, computed once
    weight = {X: sum(X.meet_dim(V) for V in profile.subspaces) for X in subs}
    best = None
    pairs = 0
    for U in subs:
        if U.dim == 0 or not is_distinct_rows(U):
            continue
        inner = None
        for W in subs:
            if W.dim >= U.dim or not W.is_subspace_of(U):
                continue
            pairs += 1
            S = weight[U] - weight[W]
            rho = 1 - Fraction(S, n * (U.dim - W.dim))
            if not 0 <= rho <= 1:
                raise AssertionError(f"crossing rate {rho} outside [0, 1]")
            if inner is None or rho > inner[0]:
                inner = (rho, W)
        if best is None or inner[0] < best[0]:
            best = (inner[0], U, inner[1])
    if best is None:
        return ThresholdResult(Fraction(1), None, None, True, pairs)
    return ThresholdResult(best[0], best[1], best[2], False, pairs)


def duplicate_profile(profile: LocalProfile, s: int) -> LocalProfile:
    """V^(s): every V_i repeated s times in place."""
    if s < 1:
        raise ProfileError("s must be >= 1")
    return LocalProfile(profile.field, profile.b, tuple(V for V in profile.subspaces for _ in range(s)))


# -- containment ------------------------------------------------------------------

def _row_constraints(F, profile, code):
    """Linear constraints on (f_1, ..., f_b) ∈ F^{kb} saying row i of M lies in V_i."""
    k, b = code.k, profile.b
    G = code.generator
    cons = []
    for i, V in enumerate(profile.subspaces):
        if V.dim == b:
            continue
        for h in nullspace_rows(F, V.basis, b):
            # Σ_j h_j c_j[i] = Σ_j h_j Σ_a f_j[a] G[a][i]
            row = [F.zero] * (k * b)
            for j in range(b):
                if h[j] == 0:
                    continue
                for a in range(k):
                    row[j * k + a] = F.mul(h[j], G[a][i])
            cons.append(row)
    return cons


def _witness_from_messages(F, code, msgs, b):
    words = [code.encode(f) for f in msgs]
    M = tuple(tuple(words[j][i] for j in range(b)) for i in range(code.length))
    U = Subspace.span(F, M, b)
    return ContainmentWitness(tuple(tuple(f) for f in msgs), M, U, trivial=(U.dim == 0))


def contains_profile(code: LinearCode, profile: LocalProfile, guard: int = DEFAULT_CONTAINMENT_GUARD,
                     exclude_trivial: bool = False):
    """First witness (lexicographic in (f_1, ..., f_b)) or None.

    A folded code is handled through its unfolding and the duplicated profile.
    The set of message tuples with every row in V_i is a linear space S; it is
    enumerated in lexicographic order (RREF coefficients in pivot order give
    exactly that order) until the columns are pairwise distinct."""
    F = code.field
    if code.s > 1:
        code, profile = unfold(code), duplicate_profile(profile, code.s)
    if profile.n != code.length:
        raise ProfileError(f"profile length {profile.n} does not match code length {code.length}")
    k, b = code.k, profile.b
    cons = _row_constraints(F, profile, code)
    basis = nullspace_rows(F, cons, k * b) if cons else [[F.one if i == j else F.zero for j in range(k * b)] for i in range(k * b)]
    S = Subspace.span(F, basis, k * b)
    size = F.q ** S.dim
    if size > guard:
        raise SearchTooLarge("solution space of the containment system", size, guard)
    for coeffs in itertools.product(F.elements(), repeat=S.dim):
        x = combine(F, coeffs, S.basis, k * b) if S.dim else tuple([F.zero] * (k * b))
        msgs = [x[j * k:(j + 1) * k] for j in range(b)]
        if len(set(msgs)) != b:
            continue
        if exclude_trivial and b == 1 and not any(msgs[0]):
            continue
        return _witness_from_messages(F, code, msgs, b)
    return None


def contains_profile_bruteforce(code: LinearCode, profile: LocalProfile, guard: int = DEFAULT_CONTAINMENT_GUARD,
                                exclude_trivial: bool = False):
    """Reference search over every b-tuple of distinct messages (tiny codes only)."""
    F = code.field
    if code.s > 1:
        code, profile = unfold(code), duplicate_profile(profile, code.s)
    k, b = code.k, profile.b
    total = F.q ** (k * b)
    if total > guard:
        raise SearchTooLarge("message tuples", total, guard)
    msgs = list(code.messages())
    words = {f: code.encode(f) for f in msgs}
    for tup in itertools.product(msgs, repeat=b):
        if len(set(tup)) != b:
            continue
        if exclude_trivial and b == 1 and not any(tup[0]):
            continue
        if all(V.contains([words[f][i] for f in tup]) for i, V in enumerate(profile.subspaces)):
            return _witness_from_messages(F, code, list(tup), b)
    return None


def validate_witness(code: LinearCode, profile: LocalProfile, w: ContainmentWitness) -> bool:
    """Independent check of the three witness conditions plus codeword membership."""
    F = code.field
    if code.s > 1:
        code, profile = unfold(code), duplicate_profile(profile, code.s)
    b = profile.b
    M = w.matrix
    cols = [tuple(M[i][j] for i in range(len(M))) for j in range(b)]
    if len(set(cols)) != b:
        return False
    for j, f in enumerate(w.messages):
        if code.encode(f) != cols[j]:
            return False
    U = Subspace.span(F, M, b)
    if U != w.U:
        return False
    return all(V.contains(row) and U.contains(row) for V, row in zip(profile.subspaces, M))


# -- list recovery ------------------------------------------------------------------

def is_list_recoverable(code: LinearCode, rho, ell: int, L: int, guard: int = DEFAULT_CONTAINMENT_GUARD):
    """Brute-force (ρ, ℓ, L) list-recoverability.  Returns (ok, violating tuple or None)."""
    rho = Fraction(rho)
    words = list(dict.fromkeys(code.codewords()))
    N = code.length
    from math import comb
    total = comb(len(words), L + 1)
    if total > guard:
        raise SearchTooLarge("codeword (L+1)-subsets", total, guard)
    budget = rho * N
    for tup in itertools.combinations(words, L + 1):
        if _lists_exist(tup, N, ell, budget):
            return False, tup
    return True, None


def _lists_exist(tup, N, ell, budget):
    """Is there a choice of lists S_i (|S_i| <= ℓ) leaving every word with <= budget misses?"""
    m = len(tup)
    options = []
    for i in range(N):
        groups = {}
        for idx, w in enumerate(tup):
            groups.setdefault(w[i], []).append(idx)
        if len(groups) <= ell:
            continue
        # every maximal choice of ℓ symbols; the uncovered words get one miss
        opts = []
        for chosen in itertools.combinations(groups, ell):
            opts.append(tuple(idx for sym, g in groups.items() if sym not in chosen for idx in g))
        options.append(opts)
    misses = [0] * m

    def search(pos):
        if pos == len(options):
            return True
        for miss in options[pos]:
            if all(misses[j] + 1 <= budget for j in miss):
                for j in miss:
                    misses[j] += 1
                if search(pos + 1):
                    return True
                for j in miss:
                    misses[j] -= 1
        return False

    return search(0)


# -- Monte Carlo ------------------------------------------------------------------

def trial_seed(seed, index) -> int:
    """Per-trial seed derived as a hash of (seed, index)."""
    h = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def monte_carlo_threshold(profile: LocalProfile, R, trials: int, seed, exclude_trivial: bool = True,
                          guard: int = DEFAULT_CONTAINMENT_GUARD) -> dict:
    """Containment frequency over seeded random linear codes of rate R = k/n."""
    R = Fraction(R)
    n = profile.n
    k = R * n
    if k.denominator != 1 or not 0 < k <= n:
        raise ProfileError(f"rate {R} does not give an integer dimension in 1..{n}")
    k = int(k)
    hits = 0
    resamples = 0
    for t in range(trials):
        code = random_linear_code(n, k, profile.field, trial_seed(seed, t))
        resamples += code.resamples
        if contains_profile(code, profile, guard, exclude_trivial) is not None:
            hits += 1
    return {"rate": str(R), "k": k, "n": n, "trials": trials, "seed": seed, "contained": hits,
            "frequency": hits / trials, "resamples": resamples}


def theorem_tail(q, eps, n, b) -> float:
    """q^(-εn + b²), the failure bound on either side of the threshold."""
    return float(q) ** (-float(eps) * n + b * b)


def random_design_rate(n, k, s, F, d, eps, trials, seed, guard: int = DEFAULT_SUBSPACE_GUARD) -> dict:
    """Frequency with which a random s-folded code is (d, (R+ε)dn) designable."""
    from .designs import audit_design, design_from_code
    if d < 1:
        raise ProfileError("d >= 1 required")
    if not d < s:
        raise ProfileError(f"need d < s, got d={d}, s={s}")
    eps = Fraction(eps)
    if gaussian_binomial(k, d, F.q) > guard:
        raise SearchTooLarge(f"{d}-subspaces of F_{F.q}^{k}", gaussian_binomial(k, d, F.q), guard)
    R = Fraction(k, s * n)
    allowed = (R + eps) * d * n
    good = 0
    for t in range(trials):
        code = random_linear_code(n, k, F, trial_seed(seed, t), s=s)
        if audit_design(design_from_code(code), d, guard).a_strong <= allowed:
            good += 1
    exponent = -eps * s * d * n + 3 * d * d * n + 3 * n
    bound = 1 - float(F.q) ** float(exponent)
    return {"n": n, "k": k, "s": s, "q": F.q, "d": d, "eps": str(eps), "trials": trials, "seed": seed,
            "successes": good, "frequency": good / trials, "theorem_bound": bound,
            "bound_nontrivial": bound > 0}
