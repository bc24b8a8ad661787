from fractions import Fraction
from threading import Thread

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablemaps.qpoly import (
    ONE,
    ZERO,
    GFTable,
    NonIntegralError,
    QPoly,
    format_qpoly,
    gaussian_binomial,
    multichoose,
    q_int,
    star,
    sym_power,
)

from oracles import multisets_poly

small_ints = st.integers(min_value=-20, max_value=20)
polys = st.lists(small_ints, max_size=6).map(QPoly)
counting = st.lists(st.integers(min_value=0, max_value=3), max_size=4).map(QPoly)


def test_trailing_zeros_stripped():
    assert QPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert QPoly([0, 0]).is_zero()
    assert ZERO.degree == -1


def test_fraction_normalization():
    p = QPoly([Fraction(4, 2), Fraction(1, 3)])
    assert type(p.coeffs[0]) is int
    assert not p.is_integral()
    with pytest.raises(NonIntegralError):
        p.int_coeffs()


def test_immutable():
    with pytest.raises(AttributeError):
        ONE.coeffs = (2,)


def test_format():
    assert format_qpoly(QPoly([1, 3, 1])) == "1 + 3q + q^2"
    assert format_qpoly(QPoly([0, -1, 0, 2])) == "-q + 2q^3"
    assert format_qpoly(ZERO) == "0"


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(polys, st.integers(min_value=-3, max_value=3))
def test_evaluation_is_a_homomorphism(a, x):
    b = a * a + ONE
    assert (a * b)(x) == a(x) * b(x)
    assert (a + b)(x) == a(x) + b(x)


@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_divmod_roundtrip(a, b):
    quot, rem = divmod(a, b)
    assert quot * b + rem == a
    assert rem.degree < b.degree


@given(polys, st.integers(min_value=1, max_value=4))
def test_substitute_power(a, j):
    assert a.substitute_power(j)(2) == a(2**j)


def test_q_int():
    assert q_int(0) == ZERO
    assert q_int(-3) == ZERO
    assert q_int(3) == QPoly([1, 1, 1])


@given(st.integers(min_value=0, max_value=8), st.integers(min_value=0, max_value=8))
def test_gaussian_binomial_at_one_is_binomial(a, b):
    from math import comb

    top = a + b
    g = gaussian_binomial(top, b)
    assert g(1) == comb(top, b)
    # symmetry and the q-Pascal rule
    assert g == gaussian_binomial(top, a)
    if top >= 1 and b >= 1:
        pascal = gaussian_binomial(top - 1, b - 1) + gaussian_binomial(top - 1, b).shift(b)
        assert g == pascal


def test_gaussian_binomial_not_polynomial():
    with pytest.raises(ValueError):
        gaussian_binomial(-3, 2)


@given(counting, st.integers(min_value=0, max_value=4))
@settings(max_examples=60)
def test_sym_power_matches_multiset_listing(f, i):
    assert sym_power(f, i) == multisets_poly(f, i)


@given(counting, st.integers(min_value=0, max_value=5))
def test_sym_power_count(f, i):
    assert sym_power(f, i)(1) == multichoose(int(f(1)), i)


def test_sym_power_of_q_int_is_gaussian():
    # multisets of size i from {0..k-1} weighted by sum
    for k in range(1, 6):
        for i in range(5):
            assert sym_power(q_int(k), i) == gaussian_binomial(k + i - 1, i)


def test_sym_power_rejects_bad_input():
    with pytest.raises(ValueError):
        sym_power(QPoly([1, -1]), 2)
    with pytest.raises(ValueError):
        sym_power(QPoly([Fraction(1, 2)]), 2)
    with pytest.raises(ValueError):
        sym_power(ONE, -1)


def test_star():
    P = {0: ONE, 1: QPoly([0, 1]), 2: QPoly([1, 1])}
    Qt = {0: QPoly([2]), 1: ONE, 2: ZERO}
    assert star(P, Qt, 2) == P[0] * Qt[2] + P[1] * Qt[1] + P[2] * Qt[0]


def test_gftable_fills_once():
    calls = []

    def compute(d):
        calls.append(d)
        return q_int(d)

    table = GFTable(compute, "t")
    assert table[3] == q_int(3)
    assert table[3] == q_int(3)
    assert calls == [3]
    with pytest.raises(KeyError):
        table[-1]


def test_gftable_concurrent_fill():
    table = GFTable(lambda d: q_int(d + 1) ** 3, "cube")
    results = []

    def worker():
        results.append([table[d] for d in range(30)])

    threads = [Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)
    assert len(table.items()) == 30


def test_gftable_rejects_inconsistent_put():
    table = GFTable(q_int, "q")
    table[2]
    with pytest.raises(RuntimeError):
        table.put(2, ONE)
