"""Independent brute-force oracles used by the tests.

Nothing here calls the package's elimination routines: ranks come from minors,
subspaces are explicit element sets and codes are enumerated word by word.
"""
from __future__ import annotations

import itertools
import math


def det_mod(M, p):
    """Leibniz expansion of a small square matrix mod p."""
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = term * M[i][perm[i]] % p
            if not term:
                break
        total += -term if inv % 2 else term
    return total % p


def det_exact(M):
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term *= M[i][perm[i]]
        total += -term if inv % 2 else term
    return total


def rank_by_minors(M, p):
    """Largest r with a nonzero r x r minor, over F_p."""
    nr, nc = len(M), len(M[0]) if M else 0
    for r in range(min(nr, nc), 0, -1):
        for rows in itertools.combinations(range(nr), r):
            for cols in itertools.combinations(range(nc), r):
                if det_mod([[M[i][j] for j in cols] for i in rows], p):
                    return r
    return 0


def span_elements(vectors, q, k):
    """All F_q-combinations of the vectors (prime q) as a frozenset of tuples."""
    vectors = list(vectors)
    out = set()
    for coeffs in itertools.product(range(q), repeat=len(vectors)):
        out.add(tuple(sum(c * v[j] for c, v in zip(coeffs, vectors)) % q for j in range(k)))
    if not vectors:
        out.add(tuple([0] * k))
    return frozenset(out)


def dim_of(elements, q):
    return round(math.log(len(elements), q))


def all_subspace_sets(q, k, d):
    """Distinct row spaces of every d x k matrix over F_q, as element sets."""
    seen = set()
    vecs = list(itertools.product(range(q), repeat=k))
    for rows in itertools.combinations(vecs, d):
        S = span_elements(rows, q, k)
        if len(S) == q ** d:
            seen.add(S)
    return seen


def hyperplanes(q, k):
    """Kernels of nonzero functionals, by element filtering (every hyperplane arises)."""
    vecs = list(itertools.product(range(q), repeat=k))
    out = set()
    for h in vecs:
        if any(h):
            out.add(frozenset(v for v in vecs if sum(a * b for a, b in zip(h, v)) % q == 0))
    return out


def codewords(generator, q):
    k = len(generator)
    n = len(generator[0])
    return [tuple(sum(c * g[j] for c, g in zip(coeffs, generator)) % q for j in range(n))
            for coeffs in itertools.product(range(q), repeat=k)]


def min_weight(generator, q):
    return min(sum(1 for x in w if x) for w in codewords(generator, q) if any(w))
