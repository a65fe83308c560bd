"""Erasure patterns, tensor correctability and the potential matroid."""
import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import codewords, span_elements
from subdesign.codes import code_from_generator, random_linear_code, rs_code, tensor_code
from subdesign.fields import GF, QQ
from subdesign.linalg import SearchTooLarge
from subdesign.matroids import (ErasurePattern, MatroidOracle, PatternError, PotentialMatroid,
                                abstract_birigidity_audit, all_patterns, check_scaling_margins,
                                correctability_oracle, exchange_check, full_pattern, grid_cells,
                                is_circuit, is_correctable, matroid_axiom_audit, monotonicity_check,
                                potential_oracle, potential_phi, potential_rank, rectangles,
                                scale_pattern, scaling_lemma_check, verify_tensor_certificate)

F7 = GF(7)
RS32 = rs_code(F7, [1, 2, 3], 2)


def tensor_supports(C_col, C_row, q):
    """Supports (as cell sets) of every nonzero tensor codeword, by enumeration."""
    T = tensor_code(C_col, C_row)
    n = C_row.n
    out = set()
    for w in codewords(T.generator, q):
        if any(w):
            out.add(frozenset((i // n + 1, i % n + 1) for i, x in enumerate(w) if x))
    return out


def subcodes(C_col, q):
    """Every subcode as (dim, codeword set), by spanning tuples of codewords."""
    words = codewords(C_col.generator, q)
    out = []
    for d in range(C_col.k + 1):
        seen = set()
        for gens in itertools.combinations(words, d):
            U = span_elements(gens, q, C_col.n)
            if len(U) == q ** d and U not in seen:
                seen.add(U)
                out.append((d, U))
    return out


def phi_oracle(subs, m, b, E, q):
    """Φ(E) = max over subcodes of -b dim U + Σ_j log_q |{u ∈ U : supp u ⊆ E_j}|."""
    best = None
    for d, U in subs:
        val = -b * d
        for j in range(1, E.n + 1):
            Ej = E.column_set(j)
            inside = [u for u in U if all(u[i] == 0 or (i + 1) in Ej for i in range(m))]
            val += round(math.log(len(inside), q))
        best = val if best is None else max(best, val)
    return best


def test_pattern_basics():
    E = ErasurePattern(2, 3, ((2, 1), (1, 1), (1, 1)))
    assert E.cells == ((1, 1), (2, 1)) and len(E) == 2
    assert E.column_set(1) == {1, 2} and E.row_set(1) == {1}
    assert len(E.complement()) == 4
    with pytest.raises(PatternError):
        ErasurePattern(2, 2, ((3, 1),))
    assert ErasurePattern.from_json(E.to_json()) == E


def test_scale_pattern():
    E = ErasurePattern(1, 1, ((1, 1),))
    assert scale_pattern(E, 2, 2).cells == ((1, 1), (1, 2), (2, 1), (2, 2))
    for P in all_patterns(3, 3):
        assert scale_pattern(P, 1, 1) == P
        S = scale_pattern(P, 2, 3)
        assert len(S) == 6 * len(P)
        assert scale_pattern(P.complement(), 2, 3) == S.complement()


def test_correctability_against_codeword_enumeration():
    C_col = rs_code(F7, [1, 2, 3], 2)
    C_row = rs_code(F7, [1, 2, 3], 2)
    supports = tensor_supports(C_col, C_row, 7)
    for E in all_patterns(3, 3):
        res = is_correctable(C_col, C_row, E)
        expected = not any(S <= set(E.cells) for S in supports)
        assert res.correctable == expected
        if not res.correctable:
            assert verify_tensor_certificate(C_col, C_row, E, res.certificate)


def test_correctability_examples():
    assert is_correctable(RS32, RS32, ErasurePattern(3, 3, ())).correctable
    assert not is_correctable(RS32, RS32, full_pattern(3, 3)).correctable
    R = [(i, j) for i in (1, 2) for j in (1, 2)]
    assert is_correctable(RS32, RS32, ErasurePattern(3, 3, tuple(R[:-1]))).correctable


def test_phi_examples_and_oracle():
    assert potential_phi(RS32, 1, ErasurePattern(3, 3, ()))[0] == 0
    assert potential_phi(RS32, 1, full_pattern(3, 3))[0] == (3 - 1) * 2
    for R in rectangles(3, 3, 1, 1):
        assert potential_phi(RS32, 1, R)[0] == 1
    rng = random.Random(2)
    pats = list(all_patterns(3, 3))
    subs = subcodes(RS32, 7)
    for E in rng.sample(pats, 60):
        assert potential_phi(RS32, 1, E)[0] == phi_oracle(subs, 3, 1, E, 7)
    C = random_linear_code(3, 2, GF(3), 5)
    subs = subcodes(C, 3)
    for E in all_patterns(3, 2):
        for b in (0, 1, 2):
            assert potential_phi(C, b, E)[0] == phi_oracle(subs, 3, b, E, 3)


def test_rank_examples():
    assert potential_rank(RS32, 1, ErasurePattern(3, 3, ())) == 0
    m, n, a, b = 3, 3, 1, 1
    assert potential_rank(RS32, 1, full_pattern(3, 3)) == m * n - (m - a) * (n - b) == b * m + a * n - a * b
    pm = PotentialMatroid(RS32, 3, 1)
    rng = random.Random(8)
    for _ in range(20):
        chain = rng.sample(grid_cells(3, 3), 9)
        ranks = [pm.rank(ErasurePattern(3, 3, tuple(chain[:i]))) for i in range(10)]
        assert ranks == sorted(ranks)


def test_axiom_audit_examples():
    assert matroid_axiom_audit(len, 2, 3)["passed"]
    assert matroid_axiom_audit(lambda E: min(len(E), 3), 2, 3)["passed"]
    bad = matroid_axiom_audit(lambda E: len(E) % 2, 2, 2)
    assert bad["violation"]["axiom"] == "monotone"
    pm = PotentialMatroid(RS32, 3, 1)
    rep = matroid_axiom_audit(pm.rank, 3, 3)
    assert rep["passed"] and rep["submodularity"] == "all-pairs"
    local = matroid_axiom_audit(pm.rank, 3, 3, all_pairs=False)
    assert local["passed"]
    with pytest.raises(SearchTooLarge):
        matroid_axiom_audit(len, 5, 5)


def test_potential_axioms_on_3x4_grid():
    C = random_linear_code(3, 2, GF(5), 3)
    pm = PotentialMatroid(C, 4, 2)
    assert matroid_axiom_audit(pm.rank, 3, 4)["passed"]


def test_birigidity_audits():
    rep = abstract_birigidity_audit(correctability_oracle(RS32, RS32), 3, 3, 1, 1)
    assert rep["passed"] and rep["rank_full"] == 5 and rep["rectangles"] == 9
    pm = PotentialMatroid(RS32, 3, 1)
    assert abstract_birigidity_audit(potential_oracle(pm), 3, 3, 1, 1)["passed"]
    free = MatroidOracle(2, 2, lambda E: True, "free")
    rep = abstract_birigidity_audit(free, 2, 2, 2, 0)
    assert rep["vacuous_circuit_condition"] and rep["rank_full"] == 4 == rep["expected_rank"]


def test_circuits_of_mds_tensors():
    C = rs_code(GF(11), [1, 2, 3, 4], 2)
    D = rs_code(GF(11), [1, 2, 3], 2)
    oracle = correctability_oracle(C, D)
    for R in rectangles(4, 3, 2, 1):
        assert is_circuit(oracle, R)


def test_monotonicity_and_exchange():
    rep = monotonicity_check(RS32, RS32, 1)
    assert rep["passed"] and rep["patterns"] == 512
    pm = PotentialMatroid(RS32, 3, 1)
    small = [E for E in all_patterns(3, 3) if len(E) <= 4]
    assert exchange_check(potential_oracle(pm), small)["passed"]


def test_q_potential_and_scaling():
    C = code_from_generator(QQ, [[1, 1]])
    pm = PotentialMatroid(C, 2, 1)
    assert pm.rank(full_pattern(2, 2)) == 3
    for E in all_patterns(2, 2):
        rep = scaling_lemma_check(C, 1, E, 10, 4, pm)
        assert rep["agree"] and rep["certificate_verified"] is not False
    with pytest.raises(PatternError):
        PotentialMatroid(code_from_generator(QQ, [[1, 0, 1], [0, 1, 1]]), 2, 1)


def test_scaling_margins():
    check_scaling_margins(2, 2, 1, 16, 4)
    check_scaling_margins(2, 2, 1, 10, 4)
    with pytest.raises(PatternError):
        check_scaling_margins(2, 2, 1, 6, 4)
    with pytest.raises(PatternError):
        check_scaling_margins(2, 2, 1, 10, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_correctable_implies_potential_independent_random(seed):
    rng = random.Random(seed)
    F = GF(5)
    C = random_linear_code(3, 2, F, rng)
    D = random_linear_code(3, rng.randint(1, 2), F, rng)
    pm = PotentialMatroid(C, 3, 3 - D.k)
    cells = [c for c in grid_cells(3, 3) if rng.random() < 0.5]
    E = ErasurePattern(3, 3, tuple(cells))
    if is_correctable(C, D, E).correctable:
        assert pm.rank(E) == len(E)
