"""Correctability of erasure patterns in tensor codes and the potential matroid.

Patterns are sets of 1-indexed cells (i, j) in an m x n grid.  A pattern E is
correctable (independent) for C_col ⊗ C_row when no nonzero tensor codeword is
supported inside E.  Tensor codewords are parametrised as G_colᵀ X G_row, so the
unknown is the k_col x k_row matrix X.

The potential matroid M(C_col, n, b) has rank r(E) = |E| - Φ(E) with
Φ(E) = max over subcodes U of [-b dim U + Σ_j dim(U ∩ F^{E_j})].
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

from .codes import LinearCode, rs_code
from .fields import PRIME_LADDER, QQ
from .linalg import (DEFAULT_SUBSPACE_GUARD, SearchTooLarge, Subspace, enumerate_all_subspaces,
                     mat_mul, nullspace_rows, rank_mod_p, rank_rows, rational_rank)

DEFAULT_PATTERN_GUARD = 1 << 16


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class ErasurePattern:
    m: int
    n: int
    cells: tuple  # sorted (i, j), 1-indexed

    def __post_init__(self):
        cells = tuple(sorted(set(tuple(c) for c in self.cells)))
        for i, j in cells:
            if not (1 <= i <= self.m and 1 <= j <= self.n):
                raise PatternError(f"cell {(i, j)} outside the {self.m}x{self.n} grid")
        object.__setattr__(self, "cells", cells)

    def __len__(self):
        return len(self.cells)

    def __contains__(self, cell):
        return tuple(cell) in set(self.cells)

    def column_set(self, j):
        """E_j = {i : (i, j) ∈ E}."""
        return frozenset(i for i, jj in self.cells if jj == j)

    def row_set(self, i):
        return frozenset(j for ii, j in self.cells if ii == i)

    def complement(self):
        cells = set(self.cells)
        return ErasurePattern(self.m, self.n, tuple((i, j) for i in range(1, self.m + 1)
                                                    for j in range(1, self.n + 1) if (i, j) not in cells))

    def with_cell(self, cell):
        return ErasurePattern(self.m, self.n, self.cells + (tuple(cell),))

    def without_cell(self, cell):
        return ErasurePattern(self.m, self.n, tuple(c for c in self.cells if c != tuple(cell)))

    def to_json(self):
        return {"m": self.m, "n": self.n, "cells": [list(c) for c in self.cells]}

    @classmethod
    def from_json(cls, d):
        try:
            return cls(int(d["m"]), int(d["n"]), tuple(tuple(map(int, c)) for c in d["cells"]))
        except KeyError as exc:
            raise PatternError(f"pattern file missing key {exc}") from exc


def grid_cells(m, n):
    return [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]


def full_pattern(m, n):
    return ErasurePattern(m, n, tuple(grid_cells(m, n)))


def all_patterns(m, n, guard: int = DEFAULT_PATTERN_GUARD):
    """Every subset of the grid, ordered by bitmask over row-major cells."""
    cells = grid_cells(m, n)
    if 2 ** len(cells) > guard:
        raise SearchTooLarge(f"patterns of a {m}x{n} grid", 2 ** len(cells), guard)
    for mask in range(2 ** len(cells)):
        yield ErasurePattern(m, n, tuple(c for t, c in enumerate(cells) if mask >> t & 1))


def scale_pattern(E: ErasurePattern, s: int, t: int) -> ErasurePattern:
    """E^{s,t}: cell (i, j) becomes the block (s(i-1)+x, t(j-1)+y), x ≤ s, y ≤ t."""
    if s < 1 or t < 1:
        raise PatternError("scaling factors must be >= 1")
    cells = tuple((s * (i - 1) + x, t * (j - 1) + y) for i, j in E.cells
                  for x in range(1, s + 1) for y in range(1, t + 1))
    return ErasurePattern(s * E.m, t * E.n, cells)


# -- correctability ---------------------------------------------------------------

@dataclass(frozen=True)
class Correctability:
    correctable: bool
    certificate: tuple = None   # m x n codeword supported on E when not correctable
    X: tuple = None


def _constraint_rows(F, C_col, C_row, cells):
    """One row per (i, j): the coefficients of X in (G_colᵀ X G_row)[i][j]."""
    Gc, Gr = C_col.generator, C_row.generator
    rows = []
    for i, j in cells:
        rows.append([F.mul(Gc[a][i], Gr[b][j]) for a in range(C_col.k) for b in range(C_row.k)])
    return rows


def tensor_word(F, C_col, C_row, X):
    """G_colᵀ X G_row as an m x n matrix."""
    Gc_T = [tuple(C_col.generator[a][i] for a in range(C_col.k)) for i in range(C_col.n)]
    XG = mat_mul(F, X, C_row.generator, C_row.n)
    return tuple(tuple(r) for r in mat_mul(F, Gc_T, XG, C_row.n))


def is_correctable(C_col: LinearCode, C_row: LinearCode, E: ErasurePattern) -> Correctability:
    if C_col.s != 1 or C_row.s != 1:
        raise PatternError("correctability is defined for unfolded factor codes")
    if (C_col.n, C_row.n) != (E.m, E.n):
        raise PatternError(f"pattern is {E.m}x{E.n} but the codes have lengths {C_col.n}, {C_row.n}")
    if C_col.field != C_row.field:
        raise PatternError("factor codes over different fields")
    F = C_col.field
    kc, kr = C_col.k, C_row.k
    unknowns = kc * kr
    if unknowns == 0:
        return Correctability(True)
    erased = set(E.cells)
    kept = [(i - 1, j - 1) for i, j in grid_cells(E.m, E.n) if (i, j) not in erased]
    rows = _constraint_rows(F, C_col, C_row, kept)
    if F == QQ and rows:
        # fast path: full rank modulo a prime certifies full rational rank
        if rank_mod_p(rows, PRIME_LADDER[0]) == unknowns:
            return Correctability(True)
    null = nullspace_rows(F, rows, unknowns) if rows else [
        [F.one if a == b else F.zero for b in range(unknowns)] for a in range(unknowns)]
    if not null:
        return Correctability(True)
    x = null[0]
    X = tuple(tuple(x[a * kr:(a + 1) * kr]) for a in range(kc))
    return Correctability(False, tensor_word(F, C_col, C_row, X), X)


def verify_tensor_certificate(C_col, C_row, E: ErasurePattern, word) -> bool:
    """Nonzero, supported on E, every row in C_row and every column in C_col."""
    F = C_col.field
    erased = set(E.cells)
    nonzero = False
    for i, row in enumerate(word):
        for j, x in enumerate(row):
            if x != 0:
                nonzero = True
                if (i + 1, j + 1) not in erased:
                    return False
    if not nonzero:
        return False
    for row in word:
        if rank_rows(F, list(C_row.generator) + [row], C_row.n) != C_row.k:
            return False
    for j in range(C_row.n):
        col = tuple(word[i][j] for i in range(C_col.n))
        if rank_rows(F, list(C_col.generator) + [col], C_col.n) != C_col.k:
            return False
    return True


# -- potential matroid -------------------------------------------------------------

@dataclass
class PotentialMatroid:
    """Φ and r for M(C_col, n, b); subcodes enumerated through the message space."""

    C_col: LinearCode
    n: int
    b: int
    guard: int = DEFAULT_SUBSPACE_GUARD
    provenance: str = "exact"
    _subcodes: list = dc_field(default=None, repr=False)
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        F = self.C_col.field
        if F == QQ:
            if self.C_col.k > 1:
                raise PatternError("Φ over Q is only enumerable for codes of dimension <= 1; "
                                   "use a prime-field stand-in (see stand_in_code)")
            # the only subcodes are 0 and C itself
            G = self.C_col.generator
            self._subcodes = [(0, ())] + ([(1, (tuple(G[0]),))] if self.C_col.k else [])
        else:
            subs = enumerate_all_subspaces(F, self.C_col.k, self.guard)
            self._subcodes = []
            for U in subs:
                words = tuple(tuple(r) for r in mat_mul(F, U.basis, self.C_col.generator, self.C_col.n))
                self._subcodes.append((U.dim, words))

    @property
    def m(self):
        return self.C_col.n

    def _supported_dim(self, dim, words, support):
        """dim{u ∈ U : supp(u) ⊆ support} = dim U - rank(U restricted to the complement)."""
        if dim == 0:
            return 0
        outside = [i for i in range(self.m) if (i + 1) not in support]
        if not outside:
            return dim
        F = self.C_col.field
        return dim - rank_rows(F, [[w[i] for i in outside] for w in words], len(outside))

    def phi(self, E: ErasurePattern):
        """(Φ(E), maximising subcode basis as codewords)."""
        key = E.cells
        if key in self._cache:
            return self._cache[key]
        cols = [E.column_set(j) for j in range(1, self.n + 1)]
        best, arg = None, None
        for dim, words in self._subcodes:
            val = -self.b * dim + sum(self._supported_dim(dim, words, c) for c in cols)
            if best is None or val > best:
                best, arg = val, words
        self._cache[key] = (best, arg)
        return best, arg

    def rank(self, E: ErasurePattern) -> int:
        return len(E) - self.phi(E)[0]

    def independent(self, E: ErasurePattern) -> bool:
        return self.phi(E)[0] == 0


def potential_phi(C_col, b, E, guard: int = DEFAULT_SUBSPACE_GUARD):
    return PotentialMatroid(C_col, E.n, b, guard).phi(E)


def potential_rank(C_col, b, E, guard: int = DEFAULT_SUBSPACE_GUARD) -> int:
    return PotentialMatroid(C_col, E.n, b, guard).rank(E)


def stand_in_code(C_col: LinearCode, p: int = None) -> LinearCode:
    """Reduce an integer generator modulo a prime; same matroid with high probability."""
    from .fields import GF
    from .codes import code_from_generator
    if p is None:
        p = 10007
    F = GF(p)
    G = []
    for r in C_col.generator:
        den = 1
        for x in r:
            den = den * Fraction(x).denominator
        G.append([F.coerce(Fraction(x) * den) for x in r])
    code = code_from_generator(F, G, provenance="stand-in")
    if code.k != C_col.k:
        raise PatternError(f"generator loses rank modulo {p}")
    return code


# -- oracles and audits -------------------------------------------------------------

@dataclass
class MatroidOracle:
    m: int
    n: int
    independent: Callable
    provenance: str
    certificate_policy: str = "none"

    def rank(self, E: ErasurePattern) -> int:
        """Greedy augmentation in canonical cell order."""
        basis = ErasurePattern(self.m, self.n, ())
        for c in E.cells:
            cand = basis.with_cell(c)
            if self.independent(cand):
                basis = cand
        return len(basis)


def correctability_oracle(C_col, C_row) -> MatroidOracle:
    return MatroidOracle(C_col.n, C_row.n, lambda E: is_correctable(C_col, C_row, E).correctable,
                         "tensor-correctability", "kernel codeword")


def potential_oracle(pm: PotentialMatroid) -> MatroidOracle:
    return MatroidOracle(pm.m, pm.n, pm.independent, "potential", "maximising subcode")


def _masks(m, n):
    return grid_cells(m, n)


def matroid_axiom_audit(rank_fn, m, n, guard: int = DEFAULT_PATTERN_GUARD, all_pairs: bool = None) -> dict:
    """Exhaustively check 0 <= r(E) <= |E|, monotonicity and submodularity.

    Ranks are tabulated per bitmask.  Submodularity is checked over all pairs of
    subsets when 4^{mn} is small, otherwise via the equivalent local form
    r(E+x) + r(E+y) >= r(E+x+y) + r(E)."""
    cells = grid_cells(m, n)
    N = len(cells)
    if 2 ** N > guard:
        raise SearchTooLarge(f"subsets of a {m}x{n} grid", 2 ** N, guard)
    r = []
    for mask in range(2 ** N):
        E = ErasurePattern(m, n, tuple(c for t, c in enumerate(cells) if mask >> t & 1))
        r.append(rank_fn(E))
    if all_pairs is None:
        all_pairs = 4 ** N <= 1 << 20
    report = {"m": m, "n": n, "subsets": 2 ** N, "violation": None, "submodularity": "all-pairs" if all_pairs else "local"}

    def cells_of(mask):
        return [list(c) for t, c in enumerate(cells) if mask >> t & 1]

    for mask in range(2 ** N):
        size = bin(mask).count("1")
        if not 0 <= r[mask] <= size:
            report["violation"] = {"axiom": "0 <= r(E) <= |E|", "E": cells_of(mask), "rank": r[mask]}
            return report
        for t in range(N):
            if not mask >> t & 1 and r[mask | 1 << t] < r[mask]:
                report["violation"] = {"axiom": "monotone", "E": cells_of(mask), "added": list(cells[t])}
                return report
    if all_pairs:
        for A in range(2 ** N):
            for B in range(A, 2 ** N):
                if r[A] + r[B] < r[A | B] + r[A & B]:
                    report["violation"] = {"axiom": "submodular", "A": cells_of(A), "B": cells_of(B)}
                    return report
    else:
        for mask in range(2 ** N):
            free = [t for t in range(N) if not mask >> t & 1]
            for x, y in itertools.combinations(free, 2):
                if r[mask | 1 << x] + r[mask | 1 << y] < r[mask | 1 << x | 1 << y] + r[mask]:
                    report["violation"] = {"axiom": "submodular", "E": cells_of(mask),
                                           "x": list(cells[x]), "y": list(cells[y])}
                    return report
    report["passed"] = True
    report["rank_full"] = r[-1]
    return report


def rectangles(m, n, a, b):
    for A in itertools.combinations(range(1, m + 1), a + 1):
        for B in itertools.combinations(range(1, n + 1), b + 1):
            yield ErasurePattern(m, n, tuple((i, j) for i in A for j in B))


def is_circuit(oracle: MatroidOracle, E: ErasurePattern) -> bool:
    """Dependent, and every one-cell deletion independent."""
    if oracle.independent(E):
        return False
    return all(oracle.independent(E.without_cell(c)) for c in E.cells)


def abstract_birigidity_audit(oracle: MatroidOracle, m, n, a, b) -> dict:
    full = full_pattern(m, n)
    rank = oracle.rank(full)
    expected = b * m + a * n - a * b
    rects = list(rectangles(m, n, a, b)) if a < m and b < n else []
    bad = [list(map(list, R.cells)) for R in rects if not is_circuit(oracle, R)]
    return {"m": m, "n": n, "a": a, "b": b, "rank_full": rank, "expected_rank": expected,
            "rank_ok": rank == expected, "rectangles": len(rects), "non_circuits": bad,
            "vacuous_circuit_condition": not rects, "passed": rank == expected and not bad}


def exchange_check(oracle: MatroidOracle, patterns) -> dict:
    """Downward closure and augmentation on a list of patterns (searched exhaustively)."""
    indep = [E for E in patterns if oracle.independent(E)]
    for E in indep:
        for c in E.cells:
            if not oracle.independent(E.without_cell(c)):
                return {"passed": False, "axiom": "downward-closed", "E": E.to_json()}
    for A in indep:
        for B in indep:
            if len(B) > len(A):
                extra = [c for c in B.cells if c not in A]
                if not any(oracle.independent(A.with_cell(c)) for c in extra):
                    return {"passed": False, "axiom": "exchange", "A": A.to_json(), "B": B.to_json()}
    return {"passed": True, "independent_sets": len(indep)}


def monotonicity_check(C_col, C_row, b, guard: int = DEFAULT_PATTERN_GUARD) -> dict:
    """Correctable ⇒ independent in the potential matroid, over every pattern."""
    pm = PotentialMatroid(C_col, C_row.n, b)
    violations = []
    correctable = 0
    for E in all_patterns(C_col.n, C_row.n, guard):
        if is_correctable(C_col, C_row, E).correctable:
            correctable += 1
            if pm.rank(E) != len(E):
                violations.append(E.to_json())
    return {"patterns": 2 ** (C_col.n * C_row.n), "correctable": correctable,
            "violations": violations, "passed": not violations}


# -- scaling against a rational RS row code ----------------------------------------

def scaled_rs_row_code(n, t, b, d, gamma=2, betas=None) -> LinearCode:
    """[tn, tn - (bt + d)] RS over Q on points β_j γ^y (β_j odd, y < t)."""
    betas = betas or [2 * j + 1 for j in range(n)]
    pts = [Fraction(beta) * Fraction(gamma) ** y for beta in betas for y in range(t)]
    return rs_code(QQ, pts, t * n - (b * t + d))


def check_scaling_margins(m, n, b, t, d):
    """d < t/m and d > (m-1)(n-b); raises otherwise."""
    if not d * m < t:
        raise PatternError(f"margin violated: d = {d} must be < t/m = {Fraction(t, m)}")
    if not d > (m - 1) * (n - b):
        raise PatternError(f"margin violated: d = {d} must be > (m-1)(n-b) = {(m - 1) * (n - b)}")


def scaling_lemma_check(C_col: LinearCode, b: int, E: ErasurePattern, t: int, d: int,
                        potential: PotentialMatroid = None) -> dict:
    """E independent in M(C_col, n, b)  ⟺  E^{1,t} correctable against the scaled RS row code."""
    m, n = E.m, E.n
    check_scaling_margins(m, n, b, t, d)
    if potential is None:
        src = C_col if C_col.field != QQ or C_col.k <= 1 else stand_in_code(C_col)
        potential = PotentialMatroid(src, n, b)
    col_q = C_col if C_col.field == QQ else None
    if col_q is None:
        raise PatternError("the scaled row code is rational; C_col must be given over Q")
    row = scaled_rs_row_code(n, t, b, d)
    lhs = potential.independent(E)
    res = is_correctable(col_q, row, scale_pattern(E, 1, t))
    ok = lhs == res.correctable
    cert_ok = None
    if not res.correctable:
        cert_ok = verify_tensor_certificate(col_q, row, scale_pattern(E, 1, t), res.certificate)
    return {"E": E.to_json(), "potential_independent": lhs, "scaled_correctable": res.correctable,
            "agree": ok, "certificate_verified": cert_ok, "provenance": potential.provenance}
