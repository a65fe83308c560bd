"""Exact linear algebra against minor-expansion and element-enumeration oracles."""
import random
from fractions import Fraction

import flint
import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_subspace_sets, dim_of, hyperplanes, rank_by_minors, span_elements
from subdesign.fields import GF, QQ, FieldError
from subdesign.linalg import (Matrix, SearchTooLarge, Subspace, bareiss_rank, count_subspaces,
                              enumerate_all_subspaces, enumerate_subspaces, gaussian_binomial,
                              kernel, mat_mul, random_subspace, rank, rank_mod_p, rational_rank,
                              rref, subspace_join, subspace_meet)

F3, F5, F7 = GF(3), GF(5), GF(7)


def test_rref_identity_and_scalar_multiple():
    I = Matrix.from_rows(F5, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    R, r, piv = rref(I)
    assert R == I and r == 3 and tuple(piv) == (0, 1, 2)
    R, r, _ = rref(Matrix.from_rows(F5, [[1, 2], [2, 4]]))
    assert R.rows == ((1, 2), (0, 0)) and r == 1


def test_rank_matches_minor_oracle():
    rng = random.Random(7)
    for _ in range(20):
        rows = [[rng.randrange(7) for _ in range(9)] for _ in range(6)]
        if rng.random() < 0.5:     # plant a dependency
            rows[5] = [(a + 3 * b) % 7 for a, b in zip(rows[0], rows[1])]
        assert rank(Matrix.from_rows(F7, rows)) == rank_by_minors(rows, 7)


def test_rref_is_canonical():
    rng = random.Random(3)
    for _ in range(30):
        rows = [[rng.randrange(5) for _ in range(5)] for _ in range(3)]
        mix = [[(a + 2 * b) % 5 for a, b in zip(rows[0], rows[1])], rows[2], rows[1], rows[0]]
        assert Subspace.span(F5, rows, 5) == Subspace.span(F5, mix, 5)


def test_kernel_examples():
    I = Matrix.from_rows(F3, [[1, 0], [0, 1]])
    assert kernel(I).dim == 0
    Z = Matrix.from_rows(F3, [[0, 0, 0], [0, 0, 0]])
    assert kernel(Z) == Subspace.full(F3, 3)
    rng = random.Random(11)
    for _ in range(25):
        rows = [[rng.randrange(3) for _ in range(6)] for _ in range(4)]
        K = kernel(Matrix.from_rows(F3, rows))
        for v in K.basis:
            assert all(sum(a * b for a, b in zip(r, v)) % 3 == 0 for r in rows)
        assert K.dim + rank_by_minors(rows, 3) == 6


def test_meet_join_dimension_identity_by_elements():
    rng = random.Random(5)
    for _ in range(100):
        A = random_subspace(F3, 5, rng.randint(0, 5), rng)
        B = random_subspace(F3, 5, rng.randint(0, 5), rng)
        eA, eB = span_elements(A.basis, 3, 5), span_elements(B.basis, 3, 5)
        meet = subspace_meet(A, B)
        assert span_elements(meet.basis, 3, 5) == eA & eB
        assert A.meet_dim(B) == dim_of(eA & eB, 3)
        join = subspace_join(A, B)
        assert join.dim + meet.dim == A.dim + B.dim
        assert span_elements(join.basis, 3, 5) >= eA | eB


def test_trivial_meets():
    A = Subspace.span(F3, [[1, 0], [0, 1]], 2)
    assert A.meet(A) == A and A.join(A) == A
    e1, e2 = Subspace.span(F3, [[1, 0]], 2), Subspace.span(F3, [[0, 1]], 2)
    assert e1.meet(e2).dim == 0


def test_enumeration_counts_against_element_oracle():
    subs = list(enumerate_subspaces(F3, 4, 2))
    assert len(subs) == 130 == len(all_subspace_sets(3, 4, 2))
    assert {span_elements(U.basis, 3, 4) for U in subs} == all_subspace_sets(3, 4, 2)
    F11 = GF(11)
    subs = list(enumerate_subspaces(F11, 3, 2))
    assert len(subs) == 133 == len(hyperplanes(11, 3))
    assert {span_elements(U.basis, 11, 3) for U in subs} == hyperplanes(11, 3)
    for q, k in ((2, 5), (3, 3), (5, 2)):
        for d in range(k + 1):
            assert len(set(enumerate_subspaces(GF(q), k, d))) == gaussian_binomial(k, d, q)
    assert [U.dim for U in enumerate_subspaces(F5, 4, 0)] == [0]


def test_enumeration_over_extension_field():
    F9 = GF(3, 2)
    assert len(set(enumerate_subspaces(F9, 4, 2))) == 7462 == count_subspaces(F9, 4, 2)


def test_enumeration_guard():
    with pytest.raises(SearchTooLarge) as exc:
        list(enumerate_subspaces(GF(101), 6, 3, guard=1000))
    assert exc.value.estimate == gaussian_binomial(6, 3, 101)
    with pytest.raises(SearchTooLarge):
        list(enumerate_all_subspaces(F3, 6, guard=10))


def test_rational_and_modular_rank_examples():
    for n in (1, 4, 7):
        I = [[int(i == j) for j in range(n)] for i in range(n)]
        assert rational_rank(I) == n
        for p in (2, 3, 2 ** 61 - 1):
            assert rank_mod_p(I, p) == n
    assert rational_rank([[2], [4]]) == 1
    assert rank_mod_p([[2], [4]], 2) == 0
    with pytest.raises(FieldError):
        rank_mod_p([[1]], 15)


def test_rank_mod_p_equals_rational_rank_random_integer_matrices():
    rng = random.Random(2024)
    p = 2 ** 61 - 1
    for _ in range(50):
        rows = [[rng.randint(-100, 100) for _ in range(12)] for _ in range(8)]
        if rng.random() < 0.4:
            rows[7] = [a - 5 * b for a, b in zip(rows[2], rows[3])]
        r = rational_rank(rows)
        assert r == rank_mod_p(rows, p) == flint.fmpz_mat(rows).rank()


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-10 ** 30, 10 ** 30), min_size=5, max_size=5), min_size=1, max_size=6),
       st.sampled_from([2, 3, 7, 2 ** 31 - 1, 2305843009213693907]))
def test_bareiss_and_modular_rank_against_flint(rows, p):
    assert bareiss_rank(rows, 5) == flint.fmpz_mat(rows).rank()
    assert rank_mod_p(rows, p) == flint.nmod_mat([[x % p for x in r] for r in rows], p).rank()
    assert rank_mod_p(rows, p) <= bareiss_rank(rows, 5)


def test_rational_rank_with_fractions():
    rows = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]
    assert rational_rank(rows) == 1
    assert rank_mod_p(rows, 5) == 1
    assert rank(Matrix.from_rows(QQ, rows)) == 1


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_subspace_membership_and_reduce(data):
    q, k = data.draw(st.sampled_from([(2, 4), (3, 3), (5, 3)]))
    F = GF(q)
    vecs = data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=k, max_size=k), max_size=3))
    S = Subspace.span(F, vecs, k)
    elems = span_elements(vecs, q, k)
    assert len(elems) == q ** S.dim
    w = data.draw(st.lists(st.integers(0, q - 1), min_size=k, max_size=k))
    assert S.contains(w) == (tuple(w) in elems)
    assert set(S.elements()) == elems
    assert S.annihilator().dim == k - S.dim


def test_mat_mul_small():
    A = [[1, 2], [3, 4]]
    B = [[0, 1], [1, 0]]
    assert [list(r) for r in mat_mul(F5, A, B, 2)] == [[2, 1], [4, 3]]
