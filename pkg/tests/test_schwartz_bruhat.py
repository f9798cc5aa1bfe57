import itertools

import numpy as np
import pytest

from lcawigner.adic import NAdicNumber, nadic_add, nadic_halve, nadic_sub
from lcawigner.errors import LCAError
from lcawigner.groups import Group
from lcawigner.phase_space import StateVector, wigner
from lcawigner.schwartz_bruhat import (
    SchwartzBruhatFn,
    indicator_of_integers,
    random_sb,
    sb_min,
    sb_wigner,
)


def riemann_wigner(f: SchwartzBruhatFn, extra: int = 2) -> np.ndarray:
    """Second route: sum over y in U_m / U_{M+extra} with digit-by-digit halving."""
    table = sb_wigner(f)
    grid = table.grid
    n, m, M = f.base, f.m, grid.M
    K = grid.char_order
    fine = M + extra
    out = np.zeros_like(table.values, dtype=complex)
    for Y in range(n ** (fine - m)):
        y = NAdicNumber.from_int(n, Y, m, fine)
        h = nadic_halve(y)
        phase = np.exp(-2j * np.pi * np.arange(K) * (Y % K) / K)
        for i in range(len(grid.x_values)):
            x = grid.x_point(i)
            val = f(nadic_add(x, h)) * np.conj(f(nadic_sub(x, h)))
            out[i] += val * phase
    return out * float(n) ** (-fine)


def test_indicator_of_2adic_integers():
    t = sb_wigner(indicator_of_integers(2))
    assert np.allclose(t.values, [[0.5, 0.5], [0.5, -0.5]])
    m, (x, b) = sb_min(indicator_of_integers(2))
    assert abs(m + 0.5) < 1e-12
    assert x.start == -1 and x.digits == (1,) and b == 1
    assert t.total_mass() == pytest.approx(1)


def test_indicator_of_3adic_integers():
    t = sb_wigner(indicator_of_integers(3))
    expect = np.zeros_like(t.values)
    expect[:, 0] = 1
    assert np.allclose(t.values, expect)
    assert sb_min(indicator_of_integers(3))[0] == pytest.approx(0)
    assert t.total_mass() == pytest.approx(1)


@pytest.mark.parametrize("n, m, M", [(3, -1, 1), (3, 0, 2), (9, 0, 1), (9, -1, 0), (5, 1, 2)])
def test_quotient_oracle_for_odd_n(n, m, M):
    rng = np.random.default_rng(n * 100 + M)
    g = Group((n ** (M - m),))
    for _ in range(50):
        f = random_sb(n, m, M, rng)
        oracle = wigner(StateVector(g, f.coeffs)).values.real * float(n) ** (-M)
        assert np.abs(sb_wigner(f).values - oracle).max() < 1e-9


@pytest.mark.parametrize("n, m, M", [(2, -1, 1), (2, 0, 1), (4, 0, 1), (6, 0, 0), (3, 0, 1), (2, -1, 2)])
def test_riemann_sum_oracle(n, m, M):
    rng = np.random.default_rng(7)
    for _ in range(3):
        f = random_sb(n, m, M, rng)
        assert np.abs(sb_wigner(f).values - riemann_wigner(f)).max() < 1e-9


@pytest.mark.parametrize("n, m, M", [(2, -1, 2), (2, -2, 3), (4, 0, 2), (6, -1, 1), (3, -1, 2), (9, 0, 1)])
def test_mass_equals_norm_squared(n, m, M):
    rng = np.random.default_rng(1)
    for _ in range(10):
        f = random_sb(n, m, M, rng)
        t = sb_wigner(f)
        assert abs(t.total_mass() - f.norm_sq()) < 1e-9
        assert np.abs(t.values.imag if np.iscomplexobj(t.values) else 0).max() < 1e-9


@pytest.mark.parametrize("m, M", [(-1, 2), (-2, 3)])
def test_random_2adic_functions_have_negative_values(m, M):
    rng = np.random.default_rng(2024 + M)
    for _ in range(100):
        value, _ = sb_min(random_sb(2, m, M, rng))
        assert value < -1e-6


def test_refinement_does_not_change_the_function():
    rng = np.random.default_rng(3)
    for n in (2, 3, 4):
        f = random_sb(n, 0, 1, rng)
        r = f.refine(-1, 2)
        assert abs(r.norm_sq() - f.norm_sq()) < 1e-12
        assert abs(sb_min(r)[0] - sb_min(f)[0]) < 1e-9
        for digits in itertools.product(range(n), repeat=3):
            x = NAdicNumber(n, -1, digits)
            assert f(x) == r(x)


def test_validation_and_json():
    with pytest.raises(LCAError):
        SchwartzBruhatFn(2, 1, 0, np.ones(1))
    with pytest.raises(LCAError):
        SchwartzBruhatFn(2, 0, 2, np.ones(3))
    f = random_sb(3, -1, 1, np.random.default_rng(0))
    g = SchwartzBruhatFn.from_json(f.to_json())
    assert np.allclose(g.coeffs, f.coeffs) and (g.m, g.M) == (f.m, f.M)
