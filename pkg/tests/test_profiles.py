"""Local profiles: potential, threshold rate, containment and Monte Carlo."""
import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_subspace_sets, dim_of, span_elements
from subdesign.codes import LinearCode, code_from_generator, random_linear_code, unfold
from subdesign.fields import GF
from subdesign.linalg import DimensionMismatch, SearchTooLarge, Subspace, random_subspace
from subdesign.profiles import (LocalProfile, ProfileError, contains_profile, contains_profile_bruteforce,
                                crossing_rate, duplicate_profile, full_profile, is_distinct_rows,
                                is_list_recoverable, make_profile, monte_carlo_threshold, potential,
                                random_design_rate, random_profile, theorem_tail, threshold_rate,
                                validate_witness, weight_profile, zero_profile)

F2, F3 = GF(2), GF(3)


def rv_oracle(profile, q):
    """Smallest R on the grid j/(n lcm(1..b)) at which some distinct-row U of positive
    dimension has Φ(U, R) >= Φ(W, R) for every proper W ⊊ U; element-set arithmetic."""
    b, n = profile.b, profile.n
    Vs = [span_elements(V.basis, q, b) for V in profile.subspaces]
    subs = [frozenset([tuple([0] * b)])]
    for d in range(1, b + 1):
        subs += list(all_subspace_sets(q, b, d))

    def dist(U):
        return all(any(u[i] != u[j] for u in U) for i, j in itertools.combinations(range(b), 2))

    def phi(U, R):
        d = dim_of(U, q)
        return -n * d + sum(dim_of(U & V, q) for V in Vs) + R * n * d

    L = math.lcm(*range(1, b + 1))
    cands = [U for U in subs if len(U) > 1 and dist(U)]
    if not cands:
        return Fraction(1)
    for j in range(n * L + 1):
        R = Fraction(j, n * L)
        for U in cands:
            if all(phi(U, R) >= phi(W, R) for W in subs if W < U):
                return R
    raise AssertionError("no threshold found on the grid")


def test_distinct_rows_examples():
    assert is_distinct_rows(Subspace.full(F3, 3))
    assert not is_distinct_rows(Subspace.zero(F3, 2))
    assert not is_distinct_rows(Subspace.span(F3, [[1, 1, 0], [0, 0, 1]], 3))


def test_potential_examples():
    rng = random.Random(1)
    P = random_profile(F3, 2, 4, rng)
    assert potential(P, Subspace.zero(F3, 2), Fraction(1, 3)) == 0
    U = Subspace.span(F3, [[1, 2]], 2)
    R = Fraction(2, 5)
    assert potential(full_profile(F3, 2, 4), U, R) == R * 4 * 1
    assert potential(zero_profile(F3, 2, 4), U, R) == (R - 1) * 4


def test_threshold_examples():
    assert threshold_rate(full_profile(F3, 2, 4)).rate == 0
    assert threshold_rate(zero_profile(F3, 2, 4)).rate == 1
    for n in range(1, 7):
        for w in range(n + 1):
            assert threshold_rate(weight_profile(F2, n, w)).rate == 1 - Fraction(w, n)


def test_threshold_against_grid_oracle():
    rng = random.Random(17)
    for _ in range(40):
        q, b = rng.choice([(2, 2), (3, 2), (2, 3)])
        P = random_profile(GF(q), b, rng.randint(1, 5), rng)
        th = threshold_rate(P)
        assert th.rate == rv_oracle(P, q)
        assert 0 <= th.rate <= 1
        if not th.vacuous:
            assert crossing_rate(P, th.U, th.W) == th.rate


def test_monotone_crossing():
    rng = random.Random(4)
    P = random_profile(F3, 2, 5, rng)
    U = Subspace.full(F3, 2)
    W = Subspace.span(F3, [[1, 1]], 2)
    diffs = [potential(P, U, Fraction(j, 10)) - potential(P, W, Fraction(j, 10)) for j in range(11)]
    assert diffs == sorted(diffs)


def test_duplication_invariance():
    rng = random.Random(23)
    for _ in range(50):
        P = random_profile(F3, 2, rng.randint(1, 6), rng)
        for s in (2, 3, 5):
            D = duplicate_profile(P, s)
            assert threshold_rate(D).rate == threshold_rate(P).rate
            U = random_subspace(F3, 2, rng.randint(0, 2), rng)
            R = Fraction(rng.randint(0, 10), 10)
            assert potential(D, U, R) == s * potential(P, U, R)
    assert duplicate_profile(P, 1) == P


def test_containment_examples():
    F = F3
    zero_code = LinearCode(F, 0, 3, 1, ())
    assert contains_profile(zero_code, full_profile(F, 2, 3)) is None
    C = random_linear_code(4, 2, F, 0)
    w = contains_profile(C, full_profile(F, 1, 4))
    assert w.trivial and w.U.dim == 0 and all(x == 0 for r in w.matrix for x in r)
    assert validate_witness(C, full_profile(F, 1, 4), w)
    full = code_from_generator(F, [[int(i == j) for j in range(3)] for i in range(3)])
    w = contains_profile(full, full_profile(F, 2, 3))
    assert w is not None and validate_witness(full, full_profile(F, 2, 3), w)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_linear_space_search_equals_bruteforce(seed):
    rng = random.Random(seed)
    q = rng.choice([2, 3])
    F = GF(q)
    n, b = rng.randint(2, 5), rng.randint(1, 2)
    k = rng.randint(1, min(n, 3))
    C = random_linear_code(n, k, F, rng)
    P = random_profile(F, b, n, rng)
    excl = rng.random() < 0.5
    fast = contains_profile(C, P, exclude_trivial=excl)
    slow = contains_profile_bruteforce(C, P, exclude_trivial=excl)
    assert (fast is None) == (slow is None)
    if fast is not None:
        assert fast.messages == slow.messages
        assert validate_witness(C, P, fast)


def folded_contains_bruteforce(C, P):
    """Definition on the folded alphabet: block symbol x of position i lies in V_i."""
    F = C.field
    msgs = list(C.messages())
    for tup in itertools.product(msgs, repeat=P.b):
        if len(set(tup)) != P.b:
            continue
        words = [C.encode(f) for f in tup]
        if all(P.subspaces[i].contains([w[c] for w in words]) for i in range(C.n) for c in C.block(i)):
            return tup
    return None


def test_folded_containment_matches_definition():
    rng = random.Random(6)
    for _ in range(30):
        C = random_linear_code(2, 2, F2, rng, s=2)
        P = random_profile(F2, 2, 2, rng)
        w = contains_profile(C, P)
        ref = folded_contains_bruteforce(C, P)
        assert (w is None) == (ref is None)
        if w is not None:
            assert w.messages == tuple(tuple(f) for f in ref)
            assert validate_witness(C, P, w)
        assert (w is None) == (contains_profile(unfold(C), duplicate_profile(P, 2)) is None)


def test_containment_guard():
    C = random_linear_code(12, 10, GF(5), 1)
    with pytest.raises(SearchTooLarge):
        contains_profile(C, full_profile(GF(5), 2, 12), guard=1000)


def test_list_recovery_examples():
    C = code_from_generator(F3, [[1, 1, 1, 1]])
    assert is_list_recoverable(C, Fraction(1, 2), 1, 2)[0]         # L >= |C| - 1
    ok, tup = is_list_recoverable(C, 1, 1, 1)
    assert not ok and len(tup) == 2
    assert is_list_recoverable(C, 0, 1, 1)[0]                        # distance 4 > 0
    C2 = code_from_generator(F3, [[1, 0, 0], [0, 1, 0]])
    ok, _ = is_list_recoverable(C2, Fraction(1, 3), 1, 1)
    assert not ok                                                    # distance 1: one miss allowed


def test_phase_transition_small():
    P = weight_profile(F2, 20, 10)
    assert threshold_rate(P).rate == Fraction(1, 2)
    above = monte_carlo_threshold(P, Fraction(3, 4), 100, seed=1)
    below = monte_carlo_threshold(P, Fraction(1, 4), 100, seed=1)
    assert above["frequency"] >= 0.9 and below["frequency"] <= 0.1
    assert theorem_tail(2, Fraction(1, 4), 20, 1) == 2.0 ** -4
    again = monte_carlo_threshold(P, Fraction(3, 4), 100, seed=1)
    assert again == above


def test_zero_profile_frequency_excluding_trivial():
    rep = monte_carlo_threshold(zero_profile(F2, 1, 8), Fraction(1, 2), 50, seed=3)
    assert rep["frequency"] == 0
    rep = monte_carlo_threshold(zero_profile(F2, 1, 8), Fraction(1, 2), 10, seed=3, exclude_trivial=False)
    assert rep["frequency"] == 1


def test_monte_carlo_rejects_fractional_dimension():
    with pytest.raises(ProfileError):
        monte_carlo_threshold(zero_profile(F2, 1, 5), Fraction(1, 3), 5, seed=0)


def test_random_design_rate():
    rep = random_design_rate(2, 2, 3, F3, 1, Fraction(1, 2), 30, seed=0)
    if rep["bound_nontrivial"]:
        assert rep["frequency"] >= rep["theorem_bound"]
    assert 0 <= rep["frequency"] <= 1
    with pytest.raises(ProfileError):
        random_design_rate(2, 2, 1, F3, 1, Fraction(1, 2), 3, seed=0)
    with pytest.raises(ProfileError):
        random_design_rate(2, 2, 3, F3, 0, Fraction(1, 2), 3, seed=0)


def test_profile_ambient_mismatch():
    with pytest.raises(ProfileError):
        LocalProfile(F3, 2, (Subspace.full(F3, 3),))
    with pytest.raises(DimensionMismatch):
        make_profile(F3, 2, [[[1, 0, 0]]])
