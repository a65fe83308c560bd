"""Deterministic independence oracle for MR(m, n, a, b) via scaled Reed-Solomon tensors.

Given a pattern E in [m] x [n], the scaling oracle scales it to E^{s,t} and asks
whether E^{s,t} is correctable for C_col ⊗ C_row, where both factors are
rational RS codes on points α γ^x (α odd, γ = 2):

* C_col: [sm, K = sm - a'] with row block I on the points α_I γ^x, x < s
* C_row: [tn, L = tn - b'] with column block J on the points β_J γ^y, y < t

Deciding the scaled instance
----------------------------
A tensor codeword is F(x, y) = Σ X_{uv} x^u y^v = <f(x), ρ(y)> with
f ∈ Q[x]_{<K}^L and ρ(y) = (1, y, ..., y^{L-1}).  It vanishes on block (I, J)
for every J outside row I of E exactly when f(x0) ⊥ W_I for the s points x0 of
block I, W_I being spanned by ρ(y) over the erased-complement column blocks.
Rows with the same complement set S share a constraint; dim W_S is the rank of
a Vandermonde matrix, certified modulo the primes of the ladder.  This block
reduction gives the dimension of the kernel exactly when at most two distinct
partial constraint subspaces occur, and two-sided bounds otherwise.  DEPENDENT
verdicts carry an explicit codeword A(x)B(y) whose root sets cover the
complement of E^{s,t} (checked exactly), or an exact dimension count.  The
dense constraint system (modular rank, CRT kernel lifting, Bareiss) remains
available as the reference path for small instances.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

from .codes import random_linear_code
from .fields import GF, PRIME_LADDER, is_prime
from .linalg import (_rref_prime, bareiss_rank, nullspace_rows, rank_mod_p, rational_rank)
from .matroids import ErasurePattern, full_pattern, is_correctable
from .profiles import trial_seed

INDEPENDENT = "INDEPENDENT"
DEPENDENT = "DEPENDENT"
UNDECIDED = "UNDECIDED"

DEFAULT_DENSE_GUARD = 250_000     # entries of the dense constraint system
GENERIC_PRIME_FLOOR = 2 ** 61 - 1


class MarginError(ValueError):
    pass


# -- parameters ---------------------------------------------------------------------

@dataclass(frozen=True)
class Algorithm1Params:
    m: int
    n: int
    a: int
    b: int
    s: int
    t: int
    a_prime: int
    b_prime: int
    d: int            # b' = bt + d
    d_prime: int      # a' = as + d'
    mode: str
    gamma: int = 2
    primes: tuple = PRIME_LADDER

    @property
    def alphas(self):
        return tuple(2 * i + 1 for i in range(self.m))

    @property
    def betas(self):
        return tuple(2 * j + 1 for j in range(self.n))

    @property
    def K(self):
        return self.s * self.m - self.a_prime

    @property
    def L(self):
        return self.t * self.n - self.b_prime

    def margins(self) -> dict:
        m, n, a, b, t, s, d, dp = self.m, self.n, self.a, self.b, self.t, self.s, self.d, self.d_prime
        tn = t * n
        return {
            "row_upper": d * m < t,                       # d < t/m
            "row_lower": d > (m - 1) * (n - b),           # d > (m-1)(n-b)
            "col_upper": dp * tn < s,                     # d' < s/(tn)
            "col_lower": dp > (tn - 1) * (m - a),         # d' > (tn-1)(m-a)
        }

    def pair(self) -> "BlockRSPair":
        return _pair_for(self)

    def to_json(self):
        return {"m": self.m, "n": self.n, "a": self.a, "b": self.b, "s": self.s, "t": self.t,
                "a_prime": self.a_prime, "b_prime": self.b_prime, "d": self.d, "d_prime": self.d_prime,
                "gamma": self.gamma, "mode": self.mode, "K": self.K, "L": self.L,
                "primes": [str(p) for p in self.primes]}


def algorithm1_params(m, n, a, b, mode="paper", t=None, d=None, s=None, dprime=None, primes=None):
    """Parameter block for the scaling oracle.

    paper / modular: s = 8m^5n^4, t = 2m^2n, a' = sa + 2m^3n^2, b' = tb + mn.
    reduced: caller-supplied or minimal (t, d, s, d') satisfying both margin pairs;
    any violation is refused."""
    if not (0 <= a <= m and 0 <= b <= n and m >= 1 and n >= 1):
        raise ValueError(f"need 0 <= a <= m and 0 <= b <= n, got {(m, n, a, b)}")
    ladder = tuple(primes) if primes else PRIME_LADDER
    for p in ladder:
        if not is_prime(p):
            raise ValueError(f"ladder entry {p} is not prime")
    if mode in ("paper", "modular"):
        if mode == "paper" and primes:
            raise ValueError("paper mode uses the fixed ladder; pass mode='modular' to change primes")
        s_, t_ = 8 * m ** 5 * n ** 4, 2 * m ** 2 * n
        d_, dp_ = m * n, 2 * m ** 3 * n ** 2
        return Algorithm1Params(m, n, a, b, s_, t_, s_ * a + dp_, t_ * b + d_, d_, dp_, mode, 2, ladder)
    if mode != "reduced":
        raise ValueError(f"unknown mode {mode!r}")
    if d is None:
        d = (m - 1) * (n - b) + 1
    if t is None:
        t = m * d + 1
    if dprime is None:
        dprime = (t * n - 1) * (m - a) + 1
    if s is None:
        s = t * n * dprime + 1
    P = Algorithm1Params(m, n, a, b, s, t, s * a + dprime, t * b + d, d, dprime, "reduced", 2, ladder)
    bad = [k for k, ok in P.margins().items() if not ok]
    if bad:
        raise MarginError(f"reduced parameters violate margins {bad}: "
                          f"need {(m - 1) * (n - b)} < d={d} < t/m={Fraction(t, m)} and "
                          f"{(t * n - 1) * (m - a)} < d'={dprime} < s/(tn)={Fraction(s, t * n)}")
    return P


@lru_cache(maxsize=64)
def _pair_for(params: Algorithm1Params) -> "BlockRSPair":
    return BlockRSPair(params.m, params.n, params.s, params.t, params.K, params.L,
                       params.alphas, params.betas, params.gamma, params.primes)


def is_conditional(m, n, a, b) -> bool:
    """Proven regime: a = 1 or m - a <= 3; otherwise the verdict rests on the conjecture."""
    return a >= 2 and m - a >= 4


# -- verdicts -----------------------------------------------------------------------

@dataclass
class OracleVerdict:
    decision: str
    certificate: dict
    conditional: bool
    method: str
    reason: str = None

    def to_json(self):
        out = {"decision": self.decision, "certificate": self.certificate,
               "conditional": self.conditional, "method": self.method}
        if self.reason:
            out["reason"] = self.reason
        return out


# -- block structure of RS ⊗ RS ------------------------------------------------------

@dataclass(frozen=True)
class BlockRSPair:
    """Two rational RS codes whose points are grouped into equal-size blocks."""

    m: int
    n: int
    s: int
    t: int
    K: int
    L: int
    alphas: tuple
    betas: tuple
    gamma: int = 2
    primes: tuple = PRIME_LADDER
    _cache: dict = dc_field(default_factory=dict, compare=False, hash=False, repr=False)

    def _geometric(self, key, start, count):
        if key not in self._cache:
            pts, x = [], start
            for _ in range(count):
                pts.append(x)
                x *= self.gamma
            self._cache[key] = pts
        return self._cache[key]

    def col_points(self, I):
        """Points α_I γ^x of row block I (1-indexed), x < s."""
        return self._geometric(("col", I), self.alphas[I - 1], self.s)

    def row_points(self, J):
        return self._geometric(("row", J), self.betas[J - 1], self.t)

    def check_appropriate(self):
        if self._cache.get("appropriate"):
            return
        cols = [x for I in range(1, self.m + 1) for x in self.col_points(I)]
        rows = [y for J in range(1, self.n + 1) for y in self.row_points(J)]
        if len(set(cols)) != len(cols) or len(set(rows)) != len(rows):
            raise ValueError("evaluation points repeat")
        if 0 in cols or 0 in rows:
            raise ValueError("evaluation points must be nonzero")
        self._cache["appropriate"] = True

    def span_dim(self, blocks):
        """dim span{ρ(y) : y in the given column blocks} with its certificate."""
        blocks = frozenset(blocks)
        if blocks in self._cache:
            return self._cache[blocks]
        pts = [y for J in sorted(blocks) for y in self.row_points(J)]
        expected = min(self.L, len(pts))
        if not pts or self.L <= 0:
            res = (0, {"blocks": sorted(blocks), "rank": 0, "by": "empty"})
        else:
            rows = [[y ** e for y in pts] for e in range(self.L)]
            res = None
            for p in self.primes:
                r = rank_mod_p(rows, p)
                if r == expected:
                    res = (r, {"blocks": sorted(blocks), "rank": r, "by": "mod-p", "prime": str(p)})
                    break
            if res is None:
                r = rational_rank(rows)
                res = (r, {"blocks": sorted(blocks), "rank": r, "by": "exact"})
        self._cache[blocks] = res
        return res


def _complement_sets(E: ErasurePattern):
    """For every row block I, the set of column blocks J with (I, J) ∉ E."""
    cells = set(E.cells)
    return {I: frozenset(J for J in range(1, E.n + 1) if (I, J) not in cells) for I in range(1, E.m + 1)}


def rank_one_cover(pair: BlockRSPair, E: ErasurePattern):
    """Find row blocks Z_A and column blocks Z_B with s|Z_A| < K, t|Z_B| < L and
    every non-erased block (I, J) having I ∈ Z_A or J ∈ Z_B.  Then A(x)B(y), A and B
    the products of (x - x0) and (y - y0) over those blocks, is a nonzero tensor
    codeword supported on E^{s,t}."""
    comp = _complement_sets(E)
    max_b = (pair.L - 1) // pair.t if pair.L > 0 else -1
    for size in range(0, min(max_b, pair.n) + 1):
        for ZB in itertools.combinations(range(1, pair.n + 1), size):
            zb = set(ZB)
            ZA = [I for I in range(1, pair.m + 1) if not comp[I] <= zb]
            if pair.s * len(ZA) <= pair.K - 1:
                return {"kind": "rank-one-cover", "row_blocks": ZA, "column_blocks": list(ZB),
                        "deg_A": pair.s * len(ZA), "deg_B": pair.t * len(ZB)}
    return None


def verify_rank_one_cover(pair: BlockRSPair, E: ErasurePattern, cert, explicit: bool = False) -> bool:
    """Exact check of a rank-one certificate.

    A(x) = Π (x - x0) over the points of the row blocks in Z_A, B likewise.
    Membership: deg A < K and deg B < L, so every column is in C_col and every
    row in C_row.  Support: on a non-erased block, the cell value is a product
    with a zero factor (its point is one of the listed roots).  Nonzero: a row
    point outside the root set of A and a column point outside the root set of
    B exist, and the points are pairwise distinct, so A(x)B(y) ≠ 0 there.
    With explicit=True the codeword is also evaluated on every cell."""
    if cert.get("kind") != "rank-one-cover":
        return False
    ZA, ZB = set(cert["row_blocks"]), set(cert["column_blocks"])
    roots_A = [x for I in sorted(ZA) for x in pair.col_points(I)]
    roots_B = [y for J in sorted(ZB) for y in pair.row_points(J)]
    if len(roots_A) >= pair.K or len(roots_B) >= pair.L:
        return False
    allx = [x for I in range(1, pair.m + 1) for x in pair.col_points(I)]
    ally = [y for J in range(1, pair.n + 1) for y in pair.row_points(J)]
    if len(set(allx)) != len(allx) or len(set(ally)) != len(ally):
        return False
    rootset_A, rootset_B = set(roots_A), set(roots_B)
    cells = set(E.cells)
    for I in range(1, pair.m + 1):
        for J in range(1, pair.n + 1):
            if (I, J) in cells:
                continue
            # every cell of the block must vanish: all its row points are roots of A
            # or all its column points are roots of B
            if not (all(x in rootset_A for x in pair.col_points(I)) or
                    all(y in rootset_B for y in pair.row_points(J))):
                return False
    if not (any(x not in rootset_A for x in allx) and any(y not in rootset_B for y in ally)):
        return False
    if explicit:
        def A(x):
            v = 1
            for r in roots_A:
                v *= x - r
            return v

        def B(y):
            v = 1
            for r in roots_B:
                v *= y - r
            return v
        ax = {I: [A(x) for x in pair.col_points(I)] for I in range(1, pair.m + 1)}
        by = {J: [B(y) for y in pair.row_points(J)] for J in range(1, pair.n + 1)}
        nonzero = False
        for I in range(1, pair.m + 1):
            for J in range(1, pair.n + 1):
                vals = [u * v for u in ax[I] for v in by[J]]
                if any(vals):
                    nonzero = True
                    if (I, J) not in cells:
                        return False
        if not nonzero:
            return False
    return True


def _pair_closed_form(Kp, L, groups, pair):
    """Exact kernel dimension with at most two partial constraint subspaces."""
    if not groups:
        return Kp * L
    if len(groups) == 1:
        (S, w, deg), = groups
        return w * max(0, Kp - deg) + (L - w) * Kp
    (S1, w1, d1), (S2, w2, d2) = groups
    union = pair.span_dim(S1 | S2)[0]
    cap = w1 + w2 - union
    return (cap * max(0, Kp - d1 - d2) + (w1 - cap) * max(0, Kp - d1)
            + (w2 - cap) * max(0, Kp - d2) + (L - w1 - w2 + cap) * Kp)


def structured_dimension(pair: BlockRSPair, E: ErasurePattern) -> dict:
    """Kernel dimension (exact or bounded) of the RS ⊗ RS system on E^{s,t}."""
    comp = _complement_sets(E)
    counts = {}
    for I, S in comp.items():
        counts[S] = counts.get(S, 0) + 1
    facts = []
    full_deg = 0
    partial = []
    for S in sorted(counts, key=lambda x: (len(x), sorted(x))):
        if not S:
            continue
        w, fact = pair.span_dim(S)
        facts.append(fact)
        deg = pair.s * counts[S]
        if w >= pair.L:
            full_deg += deg
        elif w > 0:
            partial.append((S, w, deg))
    Kp = pair.K - full_deg
    info = {"K": pair.K, "L": pair.L, "K_reduced": max(Kp, 0), "full_degree": full_deg,
            "partial_groups": [{"blocks": sorted(S), "dim": w, "degree": deg} for S, w, deg in partial],
            "rank_facts": facts}
    if Kp <= 0 or pair.L <= 0:
        info.update(lower=0, upper=0)
        return info
    if len(partial) <= 2:
        dim = _pair_closed_form(Kp, pair.L, partial, pair)
        info.update(lower=dim, upper=dim)
        return info
    lower = max(0, Kp * pair.L - sum(w * deg for _, w, deg in partial))
    upper = min(_pair_closed_form(Kp, pair.L, list(g), pair)
                for r in (1, 2) for g in itertools.combinations(partial, r))
    info.update(lower=lower, upper=upper)
    return info


# -- dense reference path ----------------------------------------------------------------

def dense_constraint_rows(pair: BlockRSPair, E: ErasurePattern):
    """Integer rows of the X-parametrised system: one per cell outside E^{s,t}."""
    cells = set(E.cells)
    rows = []
    for I in range(1, pair.m + 1):
        for J in range(1, pair.n + 1):
            if (I, J) in cells:
                continue
            for x in pair.col_points(I):
                xs = [x ** u for u in range(pair.K)]
                for y in pair.row_points(J):
                    ys = [y ** v for v in range(pair.L)]
                    rows.append([xu * yv for xu in xs for yv in ys])
    return rows


def _rational_reconstruct(r, M):
    """a/b ≡ r (mod M) with |a|, |b| <= sqrt(M/2), or None."""
    r %= M
    bound = int((M // 2) ** 0.5)
    r0, r1 = M, r
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _kernel_vector_mod(rows, ncols, p):
    red, piv = _rref_prime(rows, ncols, p)
    pivset = set(piv)
    free = [c for c in range(ncols) if c not in pivset]
    if not free:
        return None, tuple(piv)
    f = free[0]
    v = [0] * ncols
    v[f] = 1
    for r, c in enumerate(piv):
        v[c] = (-red[r][f]) % p
    return v, tuple(piv)


def verify_kernel_vector(rows, v) -> bool:
    """Exact integer check that v ≠ 0 and every constraint row annihilates it."""
    if not any(v):
        return False
    return all(sum(a * b for a, b in zip(r, v) if a and b) == 0 for r in rows)


def dense_verdict(pair: BlockRSPair, E: ErasurePattern, guard: int = DEFAULT_DENSE_GUARD) -> dict:
    """Modular rank, then CRT kernel lifting, then Bareiss rank as the final arbiter."""
    N = pair.K * pair.L
    if N <= 0:
        return {"decision": INDEPENDENT, "certificate": {"kind": "zero-code"}}
    cells_out = pair.m * pair.n - len(E)
    size = cells_out * pair.s * pair.t * N
    if size > guard:
        return {"decision": UNDECIDED, "reason": f"dense system has {size} entries (guard {guard})"}
    rows = dense_constraint_rows(pair, E)
    if not rows:
        return _dense_dependent_from_identity(N, pair)
    p0 = pair.primes[0]
    if rank_mod_p(rows, p0) == N:
        return {"decision": INDEPENDENT, "certificate": {"kind": "modular-full-rank", "prime": str(p0), "rank": N}}
    # (ii) kernel lifting across the ladder
    acc, mod, pivots = None, 1, None
    for p in pair.primes:
        v, piv = _kernel_vector_mod([[x % p for x in r] for r in rows], N, p)
        if v is None:
            continue
        if pivots is None:
            pivots = piv
        elif piv != pivots:
            continue
        if acc is None:
            acc, mod = v, p
        else:
            inv = pow(mod, -1, p)
            acc = [a + mod * (((b - a) * inv) % p) for a, b in zip(acc, v)]
            mod *= p
        cand = [_rational_reconstruct(a, mod) for a in acc]
        if all(c is not None for c in cand):
            den = 1
            for c in cand:
                den = den * c.denominator // _gcd(den, c.denominator)
            vec = [int(c * den) for c in cand]
            if verify_kernel_vector(rows, vec):
                return {"decision": DEPENDENT, "certificate": {
                    "kind": "kernel-codeword", "X": [[str(x) for x in vec[u * pair.L:(u + 1) * pair.L]]
                                                     for u in range(pair.K)], "primes_used": mod.bit_length()}}
    # (iii) exact arbiter
    r = bareiss_rank(rows, N)
    if r == N:
        return {"decision": INDEPENDENT, "certificate": {"kind": "exact-rank", "rank": r}}
    null = nullspace_rows(_QQ(), [[Fraction(x) for x in row] for row in rows], N)
    vec = [Fraction(x) for x in null[0]]
    den = 1
    for c in vec:
        den = den * c.denominator // _gcd(den, c.denominator)
    vec = [int(c * den) for c in vec]
    return {"decision": DEPENDENT, "certificate": {"kind": "kernel-codeword", "exact": True,
                                                   "X": [[str(x) for x in vec[u * pair.L:(u + 1) * pair.L]]
                                                         for u in range(pair.K)]}}


def _dense_dependent_from_identity(N, pair):
    X = [["1" if (u == 0 and v == 0) else "0" for v in range(pair.L)] for u in range(pair.K)]
    return {"decision": DEPENDENT, "certificate": {"kind": "kernel-codeword", "X": X}}


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _QQ():
    from .fields import QQ
    return QQ


def verify_dense_certificate(pair: BlockRSPair, E: ErasurePattern, cert) -> bool:
    vec = [int(x) for row in cert["X"] for x in row]
    return verify_kernel_vector(dense_constraint_rows(pair, E), vec)


# -- the oracle ------------------------------------------------------------------------

def decide_block_pattern(pair: BlockRSPair, E: ErasurePattern, dense_guard: int = DEFAULT_DENSE_GUARD) -> dict:
    """Independence of E^{s,t} in the block RS tensor code (verdict dict)."""
    if pair.K <= 0 or pair.L <= 0:
        return {"decision": INDEPENDENT, "certificate": {"kind": "zero-code", "K": pair.K, "L": pair.L},
                "method": "structure"}
    cover = rank_one_cover(pair, E)
    if cover is not None:
        return {"decision": DEPENDENT, "certificate": cover, "method": "structure"}
    info = structured_dimension(pair, E)
    if info["upper"] == 0:
        return {"decision": INDEPENDENT, "method": "structure",
                "certificate": {"kind": "block-rank", "kernel_dim": 0, **info}}
    if info["lower"] > 0:
        kind = "block-rank" if info["lower"] == info["upper"] else "dimension-count"
        return {"decision": DEPENDENT, "method": "structure",
                "certificate": {"kind": kind, "kernel_dim_at_least": info["lower"], **info}}
    res = dense_verdict(pair, E, dense_guard)
    res["method"] = "dense"
    if res["decision"] == UNDECIDED:
        res["bounds"] = {"lower": info["lower"], "upper": info["upper"]}
    return res


def verify_verdict_certificate(pair: BlockRSPair, E: ErasurePattern, res: dict) -> bool:
    cert = res.get("certificate") or {}
    kind = cert.get("kind")
    if kind == "rank-one-cover":
        return verify_rank_one_cover(pair, E, cert)
    if kind == "kernel-codeword":
        return verify_dense_certificate(pair, E, cert)
    if kind in ("block-rank", "dimension-count"):
        again = structured_dimension(pair, E)
        if res["decision"] == DEPENDENT:
            return again["lower"] > 0 and again["lower"] == cert["kernel_dim_at_least"]
        return again["upper"] == 0
    if kind == "zero-code":
        return pair.K <= 0 or pair.L <= 0
    if kind in ("modular-full-rank", "exact-rank"):
        rows = dense_constraint_rows(pair, E)
        return bareiss_rank(rows, pair.K * pair.L) == pair.K * pair.L
    return False


def mr_independent(E: ErasurePattern, params: Algorithm1Params, dense_guard: int = DEFAULT_DENSE_GUARD) -> OracleVerdict:
    if (E.m, E.n) != (params.m, params.n):
        raise ValueError(f"pattern is {E.m}x{E.n}, parameters are for {params.m}x{params.n}")
    pair = params.pair()
    pair.check_appropriate()
    res = decide_block_pattern(pair, E, dense_guard)
    cert = dict(res.get("certificate") or {})
    cert["scaled_pattern"] = {"rows": params.s * params.m, "cols": params.t * params.n,
                              "cells": params.s * params.t * len(E)}
    return OracleVerdict(res["decision"], cert, is_conditional(params.m, params.n, params.a, params.b),
                         res.get("method", "structure"), res.get("reason"))


def mr_rank(E: ErasurePattern, params: Algorithm1Params) -> int:
    """Greedy augmentation over mr_independent calls; UNDECIDED propagates as an error."""
    basis = ErasurePattern(E.m, E.n, ())
    for c in E.cells:
        cand = basis.with_cell(c)
        v = mr_independent(cand, params)
        if v.decision == UNDECIDED:
            raise RuntimeError(f"undecided query while computing rank: {v.reason}")
        if v.decision == INDEPENDENT:
            basis = cand
    return len(basis)


def mr_rank_full(params: Algorithm1Params) -> int:
    return mr_rank(full_pattern(params.m, params.n), params)


# -- randomized reference ------------------------------------------------------------------

def generic_reference_oracle(m, n, a, b, E: ErasurePattern, prime: int = GENERIC_PRIME_FLOOR,
                             trials: int = 3, seed=0, floor: int = GENERIC_PRIME_FLOOR) -> dict:
    """Random [m, m-a] and [n, n-b] codes over F_prime; INDEPENDENT if any trial corrects E."""
    if prime < floor:
        raise ValueError(f"prime {prime} below the floor {floor}")
    F = GF(prime)
    seeds = []
    for t in range(trials):
        ts = trial_seed(seed, t)
        seeds.append(ts)
        rng = random.Random(ts)
        C_col = random_linear_code(m, m - a, F, rng)
        C_row = random_linear_code(n, n - b, F, rng)
        if is_correctable(C_col, C_row, E).correctable:
            return {"decision": INDEPENDENT, "trial": t, "seeds": seeds}
    return {"decision": DEPENDENT, "seeds": seeds}
