from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcawigner.adic import (
    NAdicNumber,
    SolenoidPoint,
    doubling_constant,
    nadic_add,
    nadic_congruent,
    nadic_double,
    nadic_halve,
    nadic_neg,
    nadic_sub,
    random_nadic,
    random_solenoid,
    solenoid_add,
    solenoid_double,
    solenoid_doubling_kernel,
    solenoid_equal,
    solenoid_halve,
)
from lcawigner.errors import GroupMismatch, LCAError, NotTwoRegular

BASES = [2, 3, 4, 5, 6, 9, 10]


def nadic(n, start, *digits):
    return NAdicNumber(n, start, digits)


def test_examples():
    assert nadic_add(nadic(3, 0, 1, 0, 0), nadic(3, 0, 2, 0, 0)).digits == (0, 1, 0)
    assert nadic_neg(nadic(3, 0, 1, 0, 0, 0)).digits == (2, 2, 2, 2)
    assert nadic_halve(nadic(3, 0, 1, 0, 0, 0, 0)).digits == (2, 1, 1, 1, 1)
    h = nadic_halve(nadic(2, 0, 1, 0, 0))
    assert h.start == -1 and h.digits == (1, 0, 0)


def test_validation():
    with pytest.raises(LCAError):
        NAdicNumber(1, 0, (0,))
    with pytest.raises(LCAError):
        NAdicNumber(3, 0, ())
    with pytest.raises(GroupMismatch):
        nadic_add(nadic(3, 0, 1), nadic(5, 0, 1))


def test_digits_reduced_and_json_roundtrip():
    x = NAdicNumber(4, -2, (5, 9, 3))
    assert x.digits == (1, 1, 3)
    assert NAdicNumber.from_json(x.to_json()) == x


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(BASES), st.integers(-3, 3), st.lists(st.integers(0, 99), min_size=1, max_size=8))
def test_add_neg_roundtrip(n, start, digits):
    x = NAdicNumber(n, start, tuple(digits))
    zero = nadic_add(x, nadic_neg(x))
    assert not any(zero.digits)
    assert nadic_congruent(nadic_sub(nadic_add(x, x), x), x)


@pytest.mark.parametrize("n", BASES)
def test_halving_roundtrip_500_seeds(n):
    rng = np.random.default_rng(n)
    for _ in range(500):
        y = random_nadic(n, rng, int(rng.integers(-3, 4)), int(rng.integers(2, 10)))
        x = nadic_halve(y)
        if n % 2:
            assert (x.start, x.precision_end) == (y.start, y.precision_end)
            assert nadic_congruent(nadic_double(x), y)
        else:
            assert (x.start, x.precision_end) == (y.start - 1, y.precision_end - 1)
            assert nadic_congruent(nadic_double(x), y, y.precision_end - 1)
        assert nadic_congruent(nadic_halve(nadic_double(y)), y, y.precision_end - 1)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(BASES), st.integers(-3, 3), st.lists(st.integers(0, 99), min_size=1, max_size=8))
def test_halving_matches_modular_inverse(n, start, digits):
    """Second route: solve 2x = y in the integers modulo a power of n."""
    y = NAdicNumber(n, start, tuple(digits))
    x = nadic_halve(y)
    width = len(digits)
    if n % 2:
        mod = n**width
        expect = (y.scaled_value * pow(2, -1, mod)) % mod
        assert x.scaled_value == expect
    else:
        # x at scale n^(start-1): 2X = Y n, so X = Y n / 2, read modulo n^width
        assert x.scaled_value == (y.scaled_value * (n // 2)) % n**width


@pytest.mark.parametrize("n, want", [(2, Fraction(1, 2)), (3, Fraction(1)), (10, Fraction(1, 2)),
                                     (4, Fraction(1, 2)), (9, Fraction(1)), (6, Fraction(1, 2))])
def test_doubling_constant(n, want):
    assert doubling_constant(n, 1) == want
    assert doubling_constant(n, 3) == want


# -- solenoid ------------------------------------------------------------------------

def sol(n, a, *digits):
    return SolenoidPoint(n, Fraction(a), NAdicNumber(n, 0, digits))


def test_solenoid_examples():
    d = solenoid_double(sol(2, Fraction(1, 2), 1, 0, 0, 0))
    assert d.a == 0 and d.x.digits == (1, 0, 0, 0)
    assert solenoid_equal(solenoid_add(sol(3, 0, 0, 0), sol(3, 0, 0, 0)), sol(3, 0, 0, 0))
    d = solenoid_double(sol(5, 0, 3, 1, 0))
    assert d.a == 0 and d.x.digits == (1, 3, 0)
    h = solenoid_halve(sol(2, 0, 1, 0, 0, 0))
    assert h.a == Fraction(1, 2) and h.x.digits == (1, 0, 0)
    z = solenoid_halve(sol(2, 0, 0, 0, 0))
    assert z.a == 0 and not any(z.x.digits)


def test_solenoid_validation():
    with pytest.raises(LCAError):
        sol(2, 1, 0)
    with pytest.raises(LCAError):
        SolenoidPoint(2, Fraction(0), NAdicNumber(2, -1, (1, 0)))
    with pytest.raises(NotTwoRegular):
        solenoid_halve(sol(3, 0, 1, 0))
    with pytest.raises(LCAError):
        solenoid_doubling_kernel(2)


@pytest.mark.parametrize("n", [3, 5, 9])
def test_kernel_for_odd_n(n):
    k = solenoid_doubling_kernel(n)
    assert k.a == Fraction(1, 2)
    d = solenoid_double(k)
    assert d.a == 0 and not any(d.x.digits)
    if n == 3:
        assert k.x.digits[:4] == (2, 1, 1, 1)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_solenoid_halving_roundtrip(n):
    rng = np.random.default_rng(n)
    for _ in range(200):
        q = random_solenoid(n, rng)
        p = solenoid_halve(q)
        d = solenoid_double(p)
        assert d.a == q.a and nadic_congruent(d.x, q.x)
        back = solenoid_halve(solenoid_double(q))
        assert back.a == q.a and nadic_congruent(back.x, q.x)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.integers(0, 2**32 - 1))
def test_solenoid_addition_is_a_group_law(n, seed):
    rng = np.random.default_rng(seed)
    p, q, r = (random_solenoid(n, rng) for _ in range(3))
    assert solenoid_equal(solenoid_add(p, q), solenoid_add(q, p))
    assert solenoid_equal(solenoid_add(solenoid_add(p, q), r), solenoid_add(p, solenoid_add(q, r)))
    neg = SolenoidPoint(n, (1 - p.a) % 1, NAdicNumber.from_int(n, -p.x.scaled_value + (1 if p.a else 0), 0,
                                                               p.x.precision_end))
    zero = solenoid_add(p, neg)
    assert zero.a == 0 and not any(zero.x.digits)
