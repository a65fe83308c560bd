"""Scaling oracle: parameters, verdicts, certificates and cross-validation."""
import itertools
import random

import flint
import pytest
from hypothesis import given, settings, strategies as st

from subdesign.fields import is_prime
from subdesign.matroids import ErasurePattern, all_patterns, full_pattern, grid_cells, rectangles
from subdesign.mr_oracle import (DEPENDENT, INDEPENDENT, UNDECIDED, BlockRSPair, MarginError,
                                 algorithm1_params, decide_block_pattern, dense_constraint_rows,
                                 dense_verdict, generic_reference_oracle, is_conditional,
                                 mr_independent, mr_rank, mr_rank_full, rank_one_cover,
                                 structured_dimension, verify_rank_one_cover,
                                 verify_verdict_certificate)

TEST_PRIMES = (1000000007, 998244353, 1000000009)


def test_paper_parameters():
    P = algorithm1_params(2, 2, 1, 1, "paper")
    assert (P.s, P.t, P.a_prime, P.b_prime) == (4096, 16, 4160, 20)
    assert all(P.margins().values())
    assert algorithm1_params(3, 3, 1, 1, "paper").t == 54
    with pytest.raises(ValueError):
        algorithm1_params(2, 2, 1, 1, "paper", primes=[1000000007])


def test_reduced_margins():
    P = algorithm1_params(2, 2, 1, 1, "reduced", t=10, d=4)
    assert P.t == 10 and P.d == 4 and all(P.margins().values())
    with pytest.raises(MarginError):
        algorithm1_params(2, 2, 1, 1, "reduced", t=6, d=4)
    with pytest.raises(MarginError):
        algorithm1_params(2, 2, 1, 1, "reduced", d=1)
    with pytest.raises(ValueError):
        algorithm1_params(2, 2, 3, 1, "reduced")


def test_conditionality_flag():
    assert not is_conditional(3, 3, 1, 1)
    assert not is_conditional(9, 9, 1, 1)      # a = 1 is proven
    assert not is_conditional(5, 5, 2, 2)      # m - a = 3 is proven
    assert is_conditional(6, 6, 2, 2)
    assert is_conditional(7, 3, 3, 1)
    P = algorithm1_params(6, 1, 2, 0, "reduced")
    assert mr_independent(ErasurePattern(6, 1, ()), P).conditional


def test_trivial_verdicts():
    for mode in ("paper", "reduced"):
        P = algorithm1_params(2, 2, 1, 1, mode)
        assert mr_independent(ErasurePattern(2, 2, ()), P).decision == INDEPENDENT
        assert mr_independent(ErasurePattern(2, 2, ((1, 1),)), P).decision == INDEPENDENT
        v = mr_independent(full_pattern(2, 2), P)
        assert v.decision == DEPENDENT and not v.conditional
        assert verify_verdict_certificate(P.pair(), full_pattern(2, 2), {"decision": v.decision,
                                                                           "certificate": v.certificate})


def test_rectangles_are_circuits_3x3():
    P = algorithm1_params(3, 3, 1, 1, "reduced")
    for R in rectangles(3, 3, 1, 1):
        assert mr_independent(R, P).decision == DEPENDENT
        for c in R.cells:
            assert mr_independent(R.without_cell(c), P).decision == INDEPENDENT


def test_rank_function():
    P = algorithm1_params(2, 2, 1, 1, "reduced")
    assert mr_rank(ErasurePattern(2, 2, ()), P) == 0
    assert mr_rank_full(P) == 3
    Q = algorithm1_params(3, 3, 1, 1, "reduced")
    rng = random.Random(5)
    for _ in range(20):
        order = rng.sample(grid_cells(3, 3), 9)
        ranks = [mr_rank(ErasurePattern(3, 3, tuple(order[:i])), Q) for i in range(10)]
        assert ranks == sorted(ranks) and ranks[-1] == 5


def test_generic_reference_oracle():
    assert generic_reference_oracle(3, 3, 1, 1, ErasurePattern(3, 3, ()))["decision"] == INDEPENDENT
    rng = random.Random(1)
    for _ in range(10):
        cells = rng.sample(grid_cells(3, 3), 6)          # 6 > bm + an - ab = 5
        E = ErasurePattern(3, 3, tuple(cells))
        assert generic_reference_oracle(3, 3, 1, 1, E, seed=rng.randrange(100))["decision"] == DEPENDENT
    with pytest.raises(ValueError):
        generic_reference_oracle(2, 2, 1, 1, ErasurePattern(2, 2, ()), prime=101)


def test_generic_verdicts_stable_across_seeds():
    for E in all_patterns(3, 3):
        if len(E) > 5:
            continue
        verdicts = {generic_reference_oracle(3, 3, 1, 1, E, seed=s)["decision"] for s in range(3)}
        assert len(verdicts) == 1


def _rows_mod(pair, E, p):
    """The scaled tensor system rebuilt independently, reduced mod p."""
    cells = set(E.cells)
    rows = []
    for I in range(1, pair.m + 1):
        for J in range(1, pair.n + 1):
            if (I, J) in cells:
                continue
            for x in range(pair.s):
                X = pair.alphas[I - 1] * pow(2, x, p) % p
                for y in range(pair.t):
                    Y = pair.betas[J - 1] * pow(2, y, p) % p
                    xs = [pow(X, u, p) for u in range(pair.K)]
                    ys = [pow(Y, v, p) for v in range(pair.L)]
                    rows.append([a * b % p for a in xs for b in ys])
    return rows


def test_independent_verdicts_confirmed_by_exact_rank_lower_bound():
    """Full rank modulo any prime forces full rational rank, so every INDEPENDENT
    verdict at reduced scale is confirmed exactly by an independent elimination."""
    P = algorithm1_params(2, 2, 1, 1, "reduced")
    pair = P.pair()
    N = pair.K * pair.L
    confirmed = 0
    for E in all_patterns(2, 2):
        v = mr_independent(E, P)
        if v.decision != INDEPENDENT:
            continue
        ok = any(flint.nmod_mat(_rows_mod(pair, E, p), p).rank() == N for p in TEST_PRIMES)
        assert ok, E
        confirmed += 1
    assert confirmed == 15


def _small_pairs(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        s, t = rng.randint(1, 3), rng.randint(1, 3)
        K, L = rng.randint(1, s * m), rng.randint(1, t * n)
        pair = BlockRSPair(m, n, s, t, K, L, tuple(2 * i + 1 for i in range(m)), tuple(2 * j + 1 for j in range(n)))
        cells = [c for c in grid_cells(m, n) if rng.random() < 0.5]
        yield pair, ErasurePattern(m, n, tuple(cells))


def test_structured_engine_against_flint_rank():
    for pair, E in _small_pairs(11, 200):
        res = decide_block_pattern(pair, E)
        N = pair.K * pair.L
        rows = dense_constraint_rows(pair, E)
        exact = flint.fmpz_mat(rows).rank() if rows else 0
        assert res["decision"] == (INDEPENDENT if exact == N else DEPENDENT)
        info = structured_dimension(pair, E)
        assert info["lower"] <= N - exact <= info["upper"]
        assert verify_verdict_certificate(pair, E, res)


def test_rank_one_cover_explicit_evaluation():
    n_checked = 0
    for pair, E in _small_pairs(3, 200):
        cert = rank_one_cover(pair, E)
        if cert is not None:
            assert verify_rank_one_cover(pair, E, cert, explicit=True)
            n_checked += 1
    assert n_checked > 20


def test_dense_kernel_certificate_checked_by_flint():
    seen = 0
    for pair, E in _small_pairs(21, 200):
        res = dense_verdict(pair, E)
        if res["decision"] == DEPENDENT and res["certificate"]["kind"] == "kernel-codeword":
            rows = dense_constraint_rows(pair, E)
            vec = [int(x) for r in res["certificate"]["X"] for x in r]
            assert any(vec)
            if rows:
                prod = flint.fmpz_mat(rows) * flint.fmpz_mat([[x] for x in vec])
                assert all(prod[i, 0] == 0 for i in range(prod.nrows()))
            seen += 1
    assert seen > 20


def test_undecided_is_surfaced():
    pair = BlockRSPair(3, 3, 2, 2, 4, 3, (1, 3, 5), (1, 3, 5))
    E = ErasurePattern(3, 3, ((1, 1), (1, 3), (2, 2), (2, 3), (3, 1), (3, 2)))
    info = structured_dimension(pair, E)
    assert info["lower"] == 0 < info["upper"]
    res = decide_block_pattern(pair, E, dense_guard=0)
    assert res["decision"] == UNDECIDED and "guard" in res["reason"]
    assert decide_block_pattern(pair, E)["decision"] == INDEPENDENT


def test_ladder_primes_are_prime():
    P = algorithm1_params(2, 2, 1, 1, "paper")
    assert len(P.primes) >= 3 and all(is_prime(p) and p > 2 ** 60 for p in P.primes)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_verdicts_deterministic(seed):
    rng = random.Random(seed)
    P = algorithm1_params(3, 3, 1, 1, "reduced")
    E = ErasurePattern(3, 3, tuple(c for c in grid_cells(3, 3) if rng.random() < 0.5))
    a, b = mr_independent(E, P), mr_independent(E, P)
    assert a.to_json() == b.to_json()
