"""Linear codes by generator matrix: Reed-Solomon, folded RS, random and tensor codes.

A code encodes a message row vector f ∈ F^k as f·G.  A folded code groups the
s·n columns of G into n consecutive blocks of s symbols; block i is the
position encoder π_i.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

from .fields import QQ, FieldError, multiplicative_order, primitive_element
from .linalg import (DimensionMismatch, Matrix, SearchTooLarge, Subspace, combine,
                     left_kernel_rows, mat_mul, rank_rows, rref_rows)

DEFAULT_MINOR_GUARD = 10 ** 6


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class LinearCode:
    field: object
    k: int
    n: int
    s: int
    generator: tuple          # k rows of length s*n
    points: tuple = None      # evaluation points (flattened) when the code is an evaluation code
    provenance: str = "explicit"
    resamples: int = 0

    def __post_init__(self):
        if any(len(r) != self.s * self.n for r in self.generator) or len(self.generator) != self.k:
            raise DimensionMismatch("generator shape does not match (k, s*n)")
        if self.s < 1:
            raise CodeError("fold parameter must be >= 1")

    @property
    def length(self) -> int:
        return self.s * self.n

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.s * self.n)

    def block(self, i):
        """Columns of position i (0-indexed)."""
        return range(i * self.s, (i + 1) * self.s)

    def encoder(self, i):
        """π_i as a k x s matrix (rows indexed by message coordinates)."""
        cols = list(self.block(i))
        return tuple(tuple(r[c] for c in cols) for r in self.generator)

    def encode(self, f):
        return tuple(mat_mul(self.field, [tuple(f)], self.generator, self.length)[0])

    def position_kernel(self, i) -> Subspace:
        """H_i = {f : π_i(f) = 0}."""
        return Subspace.span(self.field, left_kernel_rows(self.field, self.encoder(i), self.s), self.k)

    def messages(self):
        return itertools.product(self.field.elements(), repeat=self.k)

    def codewords(self):
        for f in self.messages():
            yield self.encode(f)

    def as_matrix(self) -> Matrix:
        return Matrix(self.field, self.k, self.length, self.generator)

    def to_json(self):
        F = self.field
        out = {"field": F.spec, "k": self.k, "n": self.n, "s": self.s,
               "generator": [[F.to_json(x) for x in r] for r in self.generator]}
        if self.points is not None:
            out["points"] = [F.to_json(x) for x in self.points]
        return out


def _make(F, generator, n, s, points=None, provenance="explicit", resamples=0):
    generator = tuple(tuple(r) for r in generator)
    k = len(generator)
    if k and rank_rows(F, generator, s * n) != k:
        raise CodeError("generator matrix is not full rank")
    return LinearCode(F, k, n, s, generator, tuple(points) if points is not None else None, provenance, resamples)


def code_from_generator(F, generator, s=1, provenance="explicit"):
    generator = [[F.coerce(x) for x in r] for r in generator]
    if not generator:
        raise CodeError("empty generator")
    ncols = len(generator[0])
    if ncols % s:
        raise CodeError(f"generator width {ncols} is not a multiple of s={s}")
    return _make(F, generator, ncols // s, s, provenance=provenance)


def vandermonde_rows(F, points, k):
    """k x N matrix with row i equal to (x^i for x in points)."""
    rows = []
    cur = [F.one] * len(points)
    for _ in range(k):
        rows.append(tuple(cur))
        cur = [F.mul(c, x) for c, x in zip(cur, points)]
    return rows


def rs_code(F, points, k) -> LinearCode:
    points = [F.coerce(x) for x in points]
    if len(set(points)) != len(points):
        raise CodeError("evaluation points must be pairwise distinct")
    if not 0 < k <= len(points):
        raise CodeError(f"dimension {k} not in 1..{len(points)}")
    return _make(F, vandermonde_rows(F, points, k), len(points), 1, points, "reed-solomon")


@dataclass(frozen=True)
class EvaluationScheme:
    """Points γ^j α_i (j < s) laid out position by position."""

    field: object
    gamma: object
    alphas: tuple
    s: int
    points: tuple = dc_field(init=False)

    def __post_init__(self):
        F = self.field
        if self.gamma == 0 or any(a == 0 for a in self.alphas):
            raise CodeError("γ and every α_i must be nonzero")
        pts = []
        for a in self.alphas:
            x = a
            for _ in range(self.s):
                pts.append(x)
                x = F.mul(x, self.gamma)
        if len(set(pts)) != len(pts):
            raise CodeError("evaluation scheme is not appropriate: points γ^j α_i repeat")
        object.__setattr__(self, "points", tuple(pts))

    @property
    def n(self):
        return len(self.alphas)

    def position_points(self, i):
        return self.points[i * self.s:(i + 1) * self.s]

    def gamma_order(self):
        return multiplicative_order(self.field, self.gamma)

    def to_json(self):
        F = self.field
        return {"field": F.spec, "gamma": F.to_json(self.gamma), "alphas": [F.to_json(a) for a in self.alphas],
                "s": self.s, "points": [F.to_json(x) for x in self.points]}


def default_scheme(F, n, s, gamma=None) -> EvaluationScheme:
    """Over Q: γ = 2 and α_i = 2i - 1.  Over F_q: γ primitive, α_i = γ^{s(i-1)}."""
    if F == QQ:
        g = Fraction(2) if gamma is None else Fraction(gamma)
        return EvaluationScheme(F, g, tuple(Fraction(2 * i + 1) for i in range(n)), s)
    g = primitive_element(F) if gamma is None else F.coerce(gamma)
    return EvaluationScheme(F, g, tuple(F.pow(g, s * i) for i in range(n)), s)


def folded_rs_code(scheme: EvaluationScheme, k) -> LinearCode:
    if not 0 < k <= scheme.s * scheme.n:
        raise CodeError(f"dimension {k} not in 1..{scheme.s * scheme.n}")
    F = scheme.field
    return _make(F, vandermonde_rows(F, scheme.points, k), scheme.n, scheme.s, scheme.points, "folded-reed-solomon")


def unfold(code: LinearCode) -> LinearCode:
    return LinearCode(code.field, code.k, code.s * code.n, 1, code.generator, code.points,
                      code.provenance, code.resamples)


def fold(code: LinearCode, s: int) -> LinearCode:
    if code.length % s:
        raise CodeError("length not divisible by s")
    return LinearCode(code.field, code.k, code.length // s, s, code.generator, code.points,
                      code.provenance, code.resamples)


def kron_rows(F, A, B):
    out = []
    for ra in A:
        for rb in B:
            out.append(tuple(F.mul(x, y) for x in ra for y in rb))
    return out


def tensor_code(C_col: LinearCode, C_row: LinearCode) -> LinearCode:
    """Generator = G_col ⊗ G_row; coordinate (i, j) sits at index i*n_row + j."""
    if C_col.field != C_row.field:
        raise CodeError("factor codes live over different fields")
    if C_col.s != 1 or C_row.s != 1:
        raise CodeError("tensor_code expects unfolded factors")
    F = C_col.field
    G = kron_rows(F, C_col.generator, C_row.generator)
    return LinearCode(F, C_col.k * C_row.k, C_col.n * C_row.n, 1, tuple(G), None, "tensor")


def reshape(word, ncols):
    return [list(word[i:i + ncols]) for i in range(0, len(word), ncols)]


def puncture(code: LinearCode, kept) -> LinearCode:
    """Restriction to the kept (unfolded, 0-indexed) coordinates; dimension may drop."""
    kept = list(kept)
    if not kept:
        raise CodeError("kept coordinate set is empty")
    F = code.field
    G = [tuple(r[c] for c in kept) for r in code.generator]
    red, _ = rref_rows(F, G, len(kept))
    return LinearCode(F, len(red), len(kept), 1, tuple(tuple(r) for r in red), None, "punctured")


def random_linear_code(n, k, F, seed, s=1) -> LinearCode:
    """Uniform k x (s n) generator from a seeded RNG, resampled until full rank."""
    if k > s * n:
        raise CodeError("k exceeds s*n")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    resamples = 0
    while True:
        G = [tuple(F.random(rng) for _ in range(s * n)) for _ in range(k)]
        if rank_rows(F, G, s * n) == k:
            return LinearCode(F, k, n, s, tuple(G), None, "random", resamples)
        resamples += 1


def random_folded_linear_code(n, k, s, F, seed) -> LinearCode:
    return random_linear_code(n, k, F, seed, s=s)


def is_mds(code: LinearCode, guard: int = DEFAULT_MINOR_GUARD) -> bool:
    """All k x k minors of the (unfolded) generator are nonsingular."""
    N = code.length
    total = comb(N, code.k)
    if total > guard:
        raise SearchTooLarge(f"{code.k}x{code.k} minors of a length-{N} code", total, guard)
    F = code.field
    for cols in itertools.combinations(range(N), code.k):
        sub = [[r[c] for c in cols] for r in code.generator]
        if rank_rows(F, sub, code.k) < code.k:
            return False
    return True


def minimum_distance(code: LinearCode) -> int:
    """Brute force over all nonzero codewords (finite fields only)."""
    best = code.length
    for f in code.messages():
        if any(f):
            w = sum(1 for x in code.encode(f) if x != 0)
            best = min(best, w)
    return best


def in_code(code: LinearCode, word) -> bool:
    F = code.field
    return rank_rows(F, list(code.generator) + [tuple(word)], code.length) == code.k


def codeword_combination(code: LinearCode, coeffs):
    return combine(code.field, coeffs, code.generator, code.length)


def code_from_json(d) -> LinearCode:
    from .fields import field_from_spec
    try:
        F = field_from_spec(d["field"])
        G = [[F.from_json(x) for x in r] for r in d["generator"]]
        s = int(d.get("s", 1))
        code = _make(F, G, len(G[0]) // s, s, provenance="file")
    except KeyError as exc:
        raise CodeError(f"code file missing key {exc}") from exc
    if "k" in d and int(d["k"]) != code.k:
        raise CodeError(f"declared k={d['k']} but generator has rank {code.k}")
    if "n" in d and int(d["n"]) != code.n:
        raise CodeError(f"declared n={d['n']} but generator gives n={code.n}")
    return code


def check_scheme_for_designs(scheme: EvaluationScheme, k):
    """Preconditions of the design construction: |F| > ns, ord(γ) >= k, s <= k."""
    F = scheme.field
    if F.q is None:
        raise FieldError("design constructions need a finite field")
    if F.q <= scheme.n * scheme.s:
        raise CodeError(f"field of size {F.q} is not larger than n*s = {scheme.n * scheme.s}")
    if scheme.gamma_order() < k:
        raise CodeError(f"γ has multiplicative order {scheme.gamma_order()} < k = {k}")
    if scheme.s > k:
        raise CodeError(f"s = {scheme.s} exceeds k = {k}")
