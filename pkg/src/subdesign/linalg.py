"""Exact linear algebra: RREF, kernels, canonical subspaces and their enumeration.

Matrices are lists of rows over one of the fields in :mod:`subdesign.fields`.
Prime fields get a tight integer elimination loop; extension fields and Q go
through the generic field interface.  Rational rank uses fraction-free
(Bareiss) elimination and rank_mod_p gives the certified one-sided lower bound.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .fields import FieldError, PrimeField, QQ, is_prime

DEFAULT_SUBSPACE_GUARD = 10 ** 7


class SearchTooLarge(RuntimeError):
    """An exhaustive search would exceed its guard; carries the estimate."""

    def __init__(self, what: str, estimate: int, guard: int):
        super().__init__(f"search too large: {what} needs ~{estimate} steps (guard {guard})")
        self.what, self.estimate, self.guard = what, estimate, guard


class DimensionMismatch(ValueError):
    pass


# -- matrices -----------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    field: object
    nrows: int
    ncols: int
    rows: tuple

    @classmethod
    def from_rows(cls, field, rows, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise DimensionMismatch("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch(f"ragged row of length {len(r)}, expected {ncols}")
        rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        return cls(field, len(rows), ncols, rows)

    def transpose(self):
        cols = tuple(tuple(self.rows[i][j] for i in range(self.nrows)) for j in range(self.ncols))
        return Matrix(self.field, self.ncols, self.nrows, cols)

    def column_block(self, cols):
        cols = list(cols)
        return Matrix(self.field, self.nrows, len(cols), tuple(tuple(r[c] for c in cols) for r in self.rows))

    def __matmul__(self, other):
        return Matrix(self.field, self.nrows, other.ncols, tuple(mat_mul(self.field, self.rows, other.rows, other.ncols)))


def mat_mul(F, A, B, ncols=None):
    """Row-major product over F."""
    if ncols is None:
        ncols = len(B[0]) if B else 0
    if isinstance(F, PrimeField):
        p = F.p
        return [tuple(sum(a * B[k][j] for k, a in enumerate(row) if a) % p for j in range(ncols)) for row in A]
    out = []
    for row in A:
        acc = [F.zero] * ncols
        for k, a in enumerate(row):
            if a == 0:
                continue
            Bk = B[k]
            for j in range(ncols):
                if Bk[j] != 0:
                    acc[j] = F.add(acc[j], F.mul(a, Bk[j]))
        out.append(tuple(acc))
    return out


def vec_mat(F, v, B, ncols):
    return mat_mul(F, [v], B, ncols)[0]


def _check_field(F, rows):
    if isinstance(F, PrimeField):
        for r in rows:
            for x in r:
                if not isinstance(x, int):
                    raise FieldError(f"entry {x!r} is not an element of {F!r}")


def _rref_prime(rows, ncols, p):
    """In-place RREF mod p of a list of lists; returns (nonzero rows, pivots)."""
    rows = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    nr = len(rows)
    for c in range(ncols):
        if r == nr:
            break
        piv = None
        for i in range(r, nr):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = pow(pr[c], p - 2, p)
        if inv != 1:
            for j in range(c, ncols):
                pr[j] = pr[j] * inv % p
        for i in range(nr):
            if i != r:
                ri = rows[i]
                f = ri[c]
                if f:
                    for j in range(c, ncols):
                        if pr[j]:
                            ri[j] = (ri[j] - f * pr[j]) % p
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _rref_generic(F, rows, ncols):
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    nr = len(rows)
    zero = F.zero
    for c in range(ncols):
        if r == nr:
            break
        piv = None
        for i in range(r, nr):
            if rows[i][c] != zero:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = F.inv(pr[c])
        for j in range(c, ncols):
            if pr[j] != zero:
                pr[j] = F.mul(pr[j], inv)
        for i in range(nr):
            if i != r:
                ri = rows[i]
                f = ri[c]
                if f != zero:
                    for j in range(c, ncols):
                        if pr[j] != zero:
                            ri[j] = F.sub(ri[j], F.mul(f, pr[j]))
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref_rows(F, rows, ncols):
    """RREF of raw rows; returns (list of nonzero RREF rows, pivot columns)."""
    if isinstance(F, PrimeField):
        return _rref_prime(rows, ncols, F.p)
    return _rref_generic(F, rows, ncols)


def rref(M: Matrix):
    """Unique reduced row-echelon form, rank and pivot list."""
    _check_field(M.field, M.rows)
    red, pivots = rref_rows(M.field, M.rows, M.ncols)
    zero_row = tuple([M.field.zero] * M.ncols)
    rows = tuple(tuple(r) for r in red) + (zero_row,) * (M.nrows - len(red))
    return Matrix(M.field, M.nrows, M.ncols, rows), len(red), pivots


def rank(M: Matrix) -> int:
    return len(rref_rows(M.field, M.rows, M.ncols)[1])


def rank_rows(F, rows, ncols) -> int:
    return len(rref_rows(F, rows, ncols)[1])


def nullspace_rows(F, rows, ncols):
    """Basis (not yet canonical) of {x : A x = 0}."""
    red, pivots = rref_rows(F, rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [F.zero] * ncols
        v[f] = F.one
        for r, c in enumerate(pivots):
            if red[r][f] != 0:
                v[c] = F.neg(red[r][f])
        basis.append(v)
    return basis


def kernel(M: Matrix) -> "Subspace":
    """{x : M x = 0} in canonical form."""
    _check_field(M.field, M.rows)
    return Subspace.span(M.field, nullspace_rows(M.field, M.rows, M.ncols), M.ncols)


def left_kernel_rows(F, rows, ncols):
    """Basis of {y : y A = 0} for A given by rows (nrows x ncols)."""
    nr = len(rows)
    cols = [[rows[i][j] for i in range(nr)] for j in range(ncols)]
    return nullspace_rows(F, cols, nr)


# -- rational and modular rank -----------------------------------------------

def _integer_rows(rows):
    out = []
    for r in rows:
        r = [Fraction(x) for x in r]
        den = lcm(*[x.denominator for x in r]) if r else 1
        out.append([int(x * den) for x in r])
    return out


def bareiss_rank(rows, ncols=None) -> int:
    """Fraction-free elimination over Z; every division is exact."""
    A = [list(r) for r in rows]
    if not A:
        return 0
    if ncols is None:
        ncols = len(A[0])
    nr = len(A)
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nr:
            break
        piv = None
        for i in range(r, nr):
            if A[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pr = A[r]
        pv = pr[c]
        for i in range(r + 1, nr):
            ri = A[i]
            f = ri[c]
            for j in range(c + 1, ncols):
                ri[j] = (pv * ri[j] - f * pr[j]) // prev
            ri[c] = 0
        # rows above the pivot are untouched, so later pivots only see rows r+1.. ;
        # the exact-division invariant holds on that trailing block
        prev = pv
        r += 1
    return r


def rational_rank(M) -> int:
    """Exact rank over Q of a Matrix or list of rows (ints / Fractions)."""
    rows = M.rows if isinstance(M, Matrix) else M
    ncols = M.ncols if isinstance(M, Matrix) else (len(rows[0]) if rows else 0)
    return bareiss_rank(_integer_rows(rows), ncols)


def rank_mod_p(M, p: int) -> int:
    """Rank of the integer matrix reduced mod p; never exceeds the rational rank.

    Rows with rational entries are first cleared of denominators (a row scaling,
    which leaves the rational rank unchanged)."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    rows = M.rows if isinstance(M, Matrix) else M
    ncols = M.ncols if isinstance(M, Matrix) else (len(rows[0]) if rows else 0)
    if any(isinstance(x, Fraction) for r in rows for x in r):
        rows = _integer_rows(rows)
    return len(_rref_prime(rows, ncols, p)[1])


# -- subspaces ------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Canonical subspace of F^k: the RREF basis with its pivot columns."""

    field: object
    ambient: int
    basis: tuple
    pivots: tuple

    @classmethod
    def span(cls, F, vectors, ambient):
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient}")
        red, piv = rref_rows(F, vectors, ambient)
        return cls(F, ambient, tuple(tuple(r) for r in red), tuple(piv))

    @classmethod
    def zero(cls, F, ambient):
        return cls(F, ambient, (), ())

    @classmethod
    def full(cls, F, ambient):
        rows = tuple(tuple(F.one if i == j else F.zero for j in range(ambient)) for i in range(ambient))
        return cls(F, ambient, rows, tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, basis={list(map(list, self.basis))})"

    def reduce(self, v):
        """Residual of v after clearing the pivot coordinates; zero iff v in self."""
        F = self.field
        v = list(v)
        if isinstance(F, PrimeField):
            p = F.p
            for row, c in zip(self.basis, self.pivots):
                f = v[c] % p
                if f:
                    for j in range(c, self.ambient):
                        if row[j]:
                            v[j] = (v[j] - f * row[j]) % p
            return [x % p for x in v]
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f != 0:
                for j in range(c, self.ambient):
                    if row[j] != 0:
                        v[j] = F.sub(v[j], F.mul(f, row[j]))
        return v

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def is_subspace_of(self, other: "Subspace") -> bool:
        _same_ambient(self, other)
        return all(other.contains(r) for r in self.basis)

    def join(self, other: "Subspace") -> "Subspace":
        _same_ambient(self, other)
        return Subspace.span(self.field, list(self.basis) + list(other.basis), self.ambient)

    def annihilator(self) -> "Subspace":
        """{x : <b, x> = 0 for every basis vector b}."""
        return Subspace.span(self.field, nullspace_rows(self.field, self.basis, self.ambient), self.ambient)

    def meet(self, other: "Subspace") -> "Subspace":
        _same_ambient(self, other)
        return self.annihilator().join(other.annihilator()).annihilator()

    def meet_dim(self, other: "Subspace") -> int:
        """dim(self ∩ other) = dim other - rank of other's basis reduced mod self."""
        _same_ambient(self, other)
        if not self.basis or not other.basis:
            return 0
        residuals = [self.reduce(r) for r in other.basis]
        return other.dim - rank_rows(self.field, residuals, self.ambient)

    def elements(self):
        """All vectors of a subspace over a finite field (lexicographic in coordinates)."""
        F = self.field
        for coeffs in itertools.product(F.elements(), repeat=self.dim):
            yield combine(F, coeffs, self.basis, self.ambient)

    def to_json(self):
        return [[self.field.to_json(x) for x in r] for r in self.basis]


def combine(F, coeffs, rows, ncols):
    """Σ coeffs[i] * rows[i]."""
    if isinstance(F, PrimeField):
        p = F.p
        out = [0] * ncols
        for c, r in zip(coeffs, rows):
            if c:
                for j in range(ncols):
                    out[j] += c * r[j]
        return tuple(x % p for x in out)
    out = [F.zero] * ncols
    for c, r in zip(coeffs, rows):
        if c != 0:
            for j in range(ncols):
                if r[j] != 0:
                    out[j] = F.add(out[j], F.mul(c, r[j]))
    return tuple(out)


def _same_ambient(A, B):
    if A.ambient != B.ambient or A.field != B.field:
        raise DimensionMismatch(f"subspaces live in different spaces: {A.field}^{A.ambient} vs {B.field}^{B.ambient}")


def subspace_meet(A: Subspace, B: Subspace) -> Subspace:
    return A.meet(B)


def subspace_join(A: Subspace, B: Subspace) -> Subspace:
    return A.join(B)


# -- enumeration ------------------------------------------------------------------

def gaussian_binomial(k: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^k."""
    if d < 0 or d > k:
        return 0
    num = den = 1
    for i in range(d):
        num *= q ** (k - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(F, k: int, d: int) -> int:
    return gaussian_binomial(k, d, F.q)


def pivot_patterns(k: int, d: int):
    return list(itertools.combinations(range(k), d))


def enumerate_subspaces(F, k: int, d: int, guard: int = DEFAULT_SUBSPACE_GUARD, patterns=None):
    """Yield every d-dimensional subspace of F^k once, in canonical order.

    Order: pivot sets lexicographically, then free entries as a product over the
    field elements.  ``patterns`` restricts to a subset of pivot sets, which is
    how callers partition the enumeration across workers."""
    if F.q is None:
        raise FieldError("enumeration needs a finite field")
    if not 0 <= d <= k:
        raise DimensionMismatch(f"cannot enumerate {d}-dimensional subspaces of F^{k}")
    total = gaussian_binomial(k, d, F.q)
    if total > guard:
        raise SearchTooLarge(f"{d}-subspaces of F_{F.q}^{k}", total, guard)
    elems = list(F.elements())
    one, zero = F.one, F.zero
    for piv in (patterns if patterns is not None else pivot_patterns(k, d)):
        pivset = set(piv)
        free = [[c for c in range(piv[r] + 1, k) if c not in pivset] for r in range(d)]
        nfree = sum(len(f) for f in free)
        for vals in itertools.product(elems, repeat=nfree):
            rows = []
            pos = 0
            for r in range(d):
                row = [zero] * k
                row[piv[r]] = one
                for c in free[r]:
                    row[c] = vals[pos]
                    pos += 1
                rows.append(tuple(row))
            yield Subspace(F, k, tuple(rows), tuple(piv))


def enumerate_all_subspaces(F, k: int, guard: int = DEFAULT_SUBSPACE_GUARD):
    total = sum(gaussian_binomial(k, d, F.q) for d in range(k + 1))
    if total > guard:
        raise SearchTooLarge(f"all subspaces of F_{F.q}^{k}", total, guard)
    for d in range(k + 1):
        yield from enumerate_subspaces(F, k, d, guard)


def random_subspace(F, k: int, d: int, rng: random.Random) -> Subspace:
    """Uniform d-dimensional subspace (rejection-sample a full-rank d x k matrix)."""
    while True:
        rows = [[F.random(rng) for _ in range(k)] for _ in range(d)]
        S = Subspace.span(F, rows, k)
        if S.dim == d:
            return S


def subspace_from_basis(F, rows, ambient=None) -> Subspace:
    rows = [[F.coerce(x) if not isinstance(x, list) else F.from_json(x) for x in r] for r in rows]
    if ambient is None:
        if not rows:
            raise DimensionMismatch("ambient dimension needed for an empty basis")
        ambient = len(rows[0])
    return Subspace.span(F, rows, ambient)


__all__ = [
    "Matrix", "Subspace", "SearchTooLarge", "DimensionMismatch", "rref", "rank", "kernel",
    "rational_rank", "rank_mod_p", "bareiss_rank", "subspace_meet", "subspace_join",
    "enumerate_subspaces", "gaussian_binomial", "random_subspace", "QQ",
]
