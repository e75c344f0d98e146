import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from qperm.cyclotomic import (
    Cycle,
    CyclotomicInt,
    ExponentMultiset,
    cycle_decompose,
    cycle_decompose_approx,
    cyclotomic_polynomial,
    lam_leung_member,
    prime_factors,
    sum_roots,
)
from qperm.errors import InvalidOrderError, NotVanishingSumError


def brute_value(exponents, order):
    return sum(cmath.exp(2j * cmath.pi * e / order) for e in exponents)


def test_cyclotomic_polynomials_small():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_root_arithmetic_basics():
    z = CyclotomicInt.root(6, 1)
    assert z * z == CyclotomicInt.root(6, 2)
    assert z * z.conjugate() == CyclotomicInt.one(6)
    assert (z + (-z)).is_zero
    assert CyclotomicInt.root(6, 3) == CyclotomicInt.integer(6, -1)


def test_opposite_pair_vanishes():
    s = ExponentMultiset.of([0, 3], 6)
    assert sum_roots(s).is_zero


def test_sporadic_vanishing_sum_level_30():
    s = ExponentMultiset.of([5, 6, 12, 18, 24, 25], 30)
    assert sum_roots(s).is_zero
    assert abs(brute_value(s.exponents, 30)) < 1e-12
    assert cycle_decompose(s) is None


def test_one_plus_zeta_nonzero():
    s = ExponentMultiset.of([0, 1], 6)
    assert not sum_roots(s).is_zero


def test_invalid_order():
    with pytest.raises(InvalidOrderError):
        ExponentMultiset.of([0], 0)


def test_decompose_single_two_cycle():
    s = ExponentMultiset.of([0, 15], 30)
    dec = cycle_decompose(s)
    assert dec.cycles == (Cycle(2, 0),)


def test_decompose_two_three_cycles():
    s = ExponentMultiset.of([0, 10, 20, 5, 15, 25], 30)
    dec = cycle_decompose(s)
    assert dec.profile == (3, 3)
    assert {c.rotation for c in dec.cycles} == {0, 5}
    assert dec.exponents() == s.exponents


def test_decompose_rejects_nonvanishing():
    with pytest.raises(NotVanishingSumError):
        cycle_decompose(ExponentMultiset.of([0, 1], 6))


def test_empty_multiset_decomposes_trivially():
    dec = cycle_decompose(ExponentMultiset.of([], 1))
    assert dec is not None and dec.cycles == ()


@given(
    st.integers(min_value=2, max_value=30),
    st.data(),
)
@settings(max_examples=60, deadline=None)
def test_random_cycle_unions_decompose(order, data):
    primes = prime_factors(order)
    count = data.draw(st.integers(min_value=1, max_value=4))
    exps = []
    for _ in range(count):
        p = data.draw(st.sampled_from(primes))
        rot = data.draw(st.integers(min_value=0, max_value=order - 1))
        exps.extend(Cycle(p, rot).exponents(order))
    s = ExponentMultiset.of(exps, order)
    assert sum_roots(s).is_zero
    dec = cycle_decompose(s)
    assert dec is not None
    assert dec.exponents() == s.exponents
    for c in dec.cycles:
        assert order % c.prime == 0
        assert sum_roots(ExponentMultiset.of(c.exponents(order), order)).is_zero


@pytest.mark.parametrize("order", [2, 3, 4, 6, 8, 9, 12])
def test_two_prime_levels_always_decompose(order):
    # at most two distinct prime factors: every vanishing sum splits into cycles
    assert len(prime_factors(order)) <= 2
    import itertools

    for size in range(1, 7):
        for combo in itertools.combinations_with_replacement(range(order), size):
            s = ExponentMultiset.of(combo, order)
            if sum_roots(s).is_zero:
                assert cycle_decompose(s) is not None, combo


@given(st.integers(min_value=2, max_value=40), st.integers(min_value=1, max_value=60))
@settings(max_examples=120, deadline=None)
def test_lam_leung_matches_brute_force(l, n):
    primes = prime_factors(l)
    reachable = {0}
    for _ in range(n):
        reachable |= {r + p for r in reachable for p in primes if r + p <= n}
    assert lam_leung_member(n, l) == (n in reachable)


def test_lam_leung_examples():
    assert not lam_leung_member(3, 2)
    assert lam_leung_member(5, 6)
    assert lam_leung_member(7, 7)
    assert not lam_leung_member(6, 7)


def test_lam_leung_monotone_after_membership():
    for l in (6, 10, 12, 14, 15):
        primes = prime_factors(l)
        for n in range(1, 40):
            if lam_leung_member(n, l):
                for p in primes:
                    assert lam_leung_member(n + p, l)


def test_approx_three_opposite_pairs():
    import numpy as np

    rng = np.random.default_rng(0)
    x, y, z = np.exp(2j * np.pi * rng.random(3))
    vals = [x, -x, y, -y, z, -z]
    dec = cycle_decompose_approx(vals, tol=1e-9)
    assert dec is not None and dec.profile == (2, 2, 2)


def test_approx_rejects_nonvanishing():
    with pytest.raises(NotVanishingSumError):
        cycle_decompose_approx([1.0, 1.0], tol=1e-9)


def test_approx_agrees_with_exact_on_root_inputs():
    import numpy as np

    cases = [
        ([0, 10, 20, 5, 15, 25], 30),
        ([0, 15], 30),
        ([5, 6, 12, 18, 24, 25], 30),
        ([0, 2, 4, 1, 3, 5], 6),
    ]
    for exps, order in cases:
        s = ExponentMultiset.of(exps, order)
        vals = [np.exp(2j * np.pi * e / order) for e in s.exponents]
        exact = cycle_decompose(s)
        approx = cycle_decompose_approx(vals, tol=1e-9)
        if exact is None:
            assert approx is None
        else:
            assert approx is not None and approx.profile == exact.profile


def test_conjugation_and_promotion():
    z = CyclotomicInt.root(5, 2) + CyclotomicInt.root(5, 3)
    assert z.conjugate() == z  # zeta^2 + zeta^3 is real
    w = CyclotomicInt.root(3, 1)
    w6 = w.to_order(6)
    assert w6 == CyclotomicInt.root(6, 2)
    assert abs(w6.to_complex() - w.to_complex()) < 1e-12


@given(st.integers(min_value=1, max_value=20), st.data())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(order, data):
    def element():
        return CyclotomicInt(
            order,
            data.draw(
                st.lists(
                    st.integers(min_value=-4, max_value=4),
                    min_size=order,
                    max_size=order,
                )
            ),
        )

    a, b, c = element(), element(), element()
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a.conjugate().conjugate() == a
    za, zb = a.to_complex(), b.to_complex()
    assert abs((a * b).to_complex() - za * zb) < 1e-7
    assert abs((a + b).to_complex() - (za + zb)) < 1e-9
