import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcawigner.errors import CapExceeded, GroupMismatch, NotTwoRegular, ZeroVector
from lcawigner.groups import Group, enumerate_subgroups, generated_subgroup, subgroup_from_indices
from lcawigner.phase_space import (
    PhaseSubgroup,
    constant,
    delta,
    fourier,
    modulate,
    random_state,
    reflect,
    smooth_with_subgroup,
    state,
    stft,
    tensor,
    translate,
    wigner,
)
from lcawigner.second_degree import (
    SStateSpec,
    SymmetricHom,
    canonical_key,
    cyclic_decompose,
    detect_sstate,
    enumerate_max_isotropic,
    enumerate_sstates,
    enumerate_sym_homs,
    hudson_classify,
    isotropic_group,
    iter_sstate_specs,
    make_sstate,
    partial_fourier_second,
    second_degree_char,
    support_measure,
    verify_direct_product_form,
    verify_direct_sum_form,
    wehrl_l1,
)

import oracles

Z3 = Group((3,))
FULL3 = subgroup_from_indices(Z3, [0, 1, 2])
CHIRP = state(Z3, np.exp(4j * np.pi * np.arange(3) ** 2 / 3) / np.sqrt(3))


def hom(H, *rows):
    return SymmetricHom(cyclic_decompose(H), tuple(tuple(r) for r in rows))


# -- cyclic decomposition ------------------------------------------------------

def test_decompose_examples():
    g9 = Group((9,))
    b = cyclic_decompose(generated_subgroup(g9, [(3,)]))
    assert b.invariant_factors == (3,) and b.basis == [(3,)]
    g33 = Group((3, 3))
    assert cyclic_decompose(subgroup_from_indices(g33, range(9))).invariant_factors == (3, 3)
    triv = cyclic_decompose(subgroup_from_indices(Z3, [0]))
    assert triv.invariant_factors == () and triv.basis == []


@pytest.mark.parametrize("orders", [(9,), (3, 3), (3, 5), (27,), (3, 9), (5, 5), (15, 3)])
def test_decompose_gives_coordinates(orders):
    g = Group(orders)
    for H in enumerate_subgroups(g):
        b = cyclic_decompose(H)
        e = b.invariant_factors
        assert all(e[i + 1] % e[i] == 0 for i in range(len(e) - 1))
        assert int(np.prod(e, dtype=int)) == H.order
        for x in H.elements:
            c = b.coordinates(x)
            y = g.zero
            for ci, bi in zip(c, b.basis):
                y = g.add(y, g.mul(ci, bi))
            assert y == x


# -- symmetric homomorphisms and second-degree characters ------------------------

def test_sym_hom_counts():
    assert len(enumerate_sym_homs(FULL3)) == 3
    assert len(enumerate_sym_homs(subgroup_from_indices(Z3, [0]))) == 1
    g = Group((3, 3))
    assert len(enumerate_sym_homs(subgroup_from_indices(g, range(9)))) == 27


def test_sym_hom_rejects_asymmetric():
    g = Group((3, 3))
    H = subgroup_from_indices(g, range(9))
    with pytest.raises(GroupMismatch):
        hom(H, (0, 1), (2, 0))


@pytest.mark.parametrize("orders", [(9,), (3, 3), (3, 5), (3, 9)])
def test_sym_homs_are_symmetric_bicharacters(orders):
    g = Group(orders)
    for H in enumerate_subgroups(g):
        for beta in enumerate_sym_homs(H):
            P = beta.phase_table
            assert (P == P.T).all()
            idx = list(H.indices)
            for i, j in itertools.product(range(H.order), repeat=2):
                k = idx.index(int(g.add_table[idx[i], idx[j]]))
                assert ((P[k] - P[i] - P[j]) % g.exponent == 0).all()


def test_second_degree_example():
    h = second_degree_char(FULL3, hom(FULL3, (1,)))
    for x in range(3):
        assert h((x,)) == pytest.approx(np.exp(2j * np.pi * 2 * x * x / 3))
    h0 = second_degree_char(FULL3, hom(FULL3, (0,)))
    assert all(h0((x,)) == pytest.approx(1) for x in range(3))


def test_second_degree_solutions_on_z3_exhaustive():
    """All h: Z3 -> mu_3 with h(0) = 1 and h(x+y) = h(x) h(y) beta(x)(y) for a symmetric beta."""
    solutions = set()
    for vals in itertools.product(range(3), repeat=2):
        h = [0, *vals]
        q = [[(h[(x + y) % 3] - h[x] - h[y]) % 3 for y in range(3)] for x in range(3)]
        bicharacter = all(
            (q[x][(y + z) % 3] - q[x][y] - q[x][z]) % 3 == 0 for x in range(3) for y in range(3) for z in range(3)
        )
        if bicharacter:
            solutions.add(tuple(h))
    ours = set()
    for beta in enumerate_sym_homs(FULL3):
        hb = second_degree_char(FULL3, beta)
        for a in range(3):
            v = [hb((x,)) * Z3.char_eval((a,), (x,)) for x in range(3)]
            ours.add(tuple(int(round(np.angle(z) * 3 / (2 * np.pi))) % 3 for z in v))
    assert ours == solutions
    assert len(solutions) == 9


@pytest.mark.parametrize("orders", [(9,), (3, 3), (3, 5)])
def test_functional_equation(orders):
    g = Group(orders)
    for H in enumerate_subgroups(g):
        for beta in enumerate_sym_homs(H):
            h = second_degree_char(H, beta)
            for x, y in itertools.product(H.elements, repeat=2):
                assert h(g.add(x, y)) == pytest.approx(h(x) * h(y) * beta(x, y))


def test_even_group_has_no_second_degree_chars():
    g = Group((4,))
    H = subgroup_from_indices(g, range(4))
    with pytest.raises(NotTwoRegular):
        second_degree_char(H, hom(H, (1,)))


# -- S-states -------------------------------------------------------------------

def test_make_sstate_examples():
    triv = subgroup_from_indices(Z3, [0])
    d1 = make_sstate(SStateSpec(triv, hom(triv), (0,), (1,), 1.0))
    assert np.allclose(d1.values, [0, 1, 0])
    c = make_sstate(SStateSpec(FULL3, hom(FULL3, (0,)), (0,), (0,), 3**-0.5))
    assert np.allclose(c.values, 3**-0.5)
    chirp = make_sstate(SStateSpec(FULL3, hom(FULL3, (1,)), (0,), (0,), 3**-0.5))
    assert np.allclose(chirp.values, CHIRP.values)


def test_zero_scale_rejected():
    with pytest.raises(ZeroVector):
        SStateSpec(FULL3, hom(FULL3, (0,)), (0,), (0,), 0)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_zp_sstates_match_chirp_oracle(p):
    ours = {canonical_key(f) for f in enumerate_sstates(Group((p,)))}
    assert ours == oracles.zp_sstates(p)
    assert len(ours) == p * (p + 1)


@pytest.mark.parametrize("orders, count", [((3,), 12), ((5,), 30), ((7,), 56), ((1,), 1), ((3, 3), 360)])
def test_sstate_counts(orders, count):
    assert len(enumerate_sstates(Group(orders))) == count


def test_sstate_cap():
    with pytest.raises(CapExceeded):
        enumerate_sstates(Group((27,)), cap=26)


# -- maximal isotropic subgroups ---------------------------------------------------

@pytest.mark.parametrize("orders, count", [((3,), 4), ((5,), 6), ((7,), 8), ((9,), 13), ((3, 3), 40), ((3, 5), 24)])
def test_isotropic_counts(orders, count):
    iso = enumerate_max_isotropic(Group(orders))
    assert len(iso) == count
    assert all(G.check() for G in iso)
    assert all(G.mass == 1 for G in iso)


@pytest.mark.parametrize("orders", [(3,), (5,), (9,), (3, 3), (3, 5)])
def test_isotropic_matches_lagrangian_oracle(orders):
    """Brute force: subgroups of A x A^ of order |A| on which the symplectic form is trivial."""
    g = Group(orders)
    k, n = len(orders), g.cardinality
    P = Group(orders + orders)
    oracle = set()
    for S in enumerate_subgroups(P):
        if S.order != n:
            continue
        pts = S.elements
        if all(
            (g.char_phase(z[k:], w[:k]) - g.char_phase(w[k:], z[:k])) % g.exponent == 0 for z in pts for w in pts
        ):
            oracle.add(frozenset(g.index(z[:k]) * n + g.index(z[k:]) for z in pts))
    ours = {frozenset(int(i) for i in G.phase_subgroup.flat) for G in enumerate_max_isotropic(g)}
    assert ours == oracle


def test_isotropic_z3_membership():
    G = isotropic_group(hom(FULL3, (1,)))
    assert sorted(G.elements) == [((0,), (0,)), ((1,), (1,)), ((2,), (2,))]


# -- wigner of S-states -----------------------------------------------------------------

@pytest.mark.parametrize("orders", [(3,), (9,), (3, 3), (3, 5)])
def test_sstate_wigner_is_coset_indicator(orders):
    g = Group(orders)
    for spec in iter_sstate_specs(g):
        f = make_sstate(spec)
        W = wigner(f).values
        expect = isotropic_group(spec.beta).coset_indicator(spec.shift, spec.chi)
        assert np.abs(W - expect).max() < 1e-9


# -- detection and classification ------------------------------------------------------

def test_detect_examples():
    spec = detect_sstate(delta(Z3, (2,)))
    assert spec.H.order == 1 and spec.shift == (2,)
    spec = detect_sstate(CHIRP)
    assert spec.H.order == 3 and spec.beta.matrix == ((1,),) and spec.chi == (0,)
    assert detect_sstate(state(Z3, [1, 1, 0]).normalized()) is None
    with pytest.raises(ZeroVector):
        detect_sstate(state(Z3, [0, 0, 0]))


@pytest.mark.parametrize("orders", [(5,), (9,), (3, 3), (3, 5), (27,)])
def test_detect_roundtrip(orders):
    g = Group(orders)
    for f in enumerate_sstates(g):
        spec = detect_sstate(f)
        assert spec is not None
        assert np.abs(make_sstate(spec).values - f.values).max() < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(3,), (9,), (3, 3), (3, 5)]), st.integers(0, 2**32 - 1))
def test_detect_survives_phase_space_shifts(orders, seed):
    g = Group(orders)
    rng = np.random.default_rng(seed)
    ss = enumerate_sstates(g)
    f = ss[int(rng.integers(len(ss)))]
    y, a = (g.element(int(i)) for i in rng.integers(g.cardinality, size=2))
    c = complex(rng.standard_normal(), rng.standard_normal())
    moved = translate(modulate(f, a), y).scaled(c)
    assert detect_sstate(moved) is not None
    assert hudson_classify(moved).positive


def test_hudson_examples():
    r = hudson_classify(delta(Z3))
    assert r.positive and r.consistent and r.sstate is not None
    assert np.allclose(wigner(delta(Z3)).values, PhaseSubgroup.dual_axis(Z3).mask())
    r = hudson_classify(state(Z3, [1, 1, 0]).normalized())
    assert not r.positive and r.sstate is None and r.consistent
    assert r.min_value == pytest.approx(-0.5)


def test_random_states_on_z5_are_negative():
    g = Group((5,))
    rng = np.random.default_rng(0)
    for _ in range(1000):
        r = hudson_classify(random_state(g, rng))
        assert not r.positive and r.min_value < -1e-9 and r.consistent


# -- Wehrl-type bound --------------------------------------------------------------

def test_wehrl_examples():
    assert wehrl_l1(delta(Z3), delta(Z3)) == pytest.approx(1)
    f = state(Z3, [1, 1, 0]).normalized()
    assert wehrl_l1(f, f) > 1 + 1e-3
    g = Group((3, 5))
    s = enumerate_sstates(g)[100]
    moved = translate(modulate(s, (1, 2)), (2, 4))
    assert abs(wehrl_l1(moved, s) - 1) < 1e-9


def test_support_measure_examples():
    assert support_measure(stft(delta(Z3), delta(Z3))) == Fraction(1)
    f = state(Z3, [1, 1, 0]).normalized()
    assert support_measure(stft(f, f)) > 1
    assert support_measure(stft(CHIRP, CHIRP)) == Fraction(1)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(3,), (5,), (9,), (3, 3), (3, 5)]), st.integers(0, 2**32 - 1))
def test_wehrl_bound(orders, seed):
    g = Group(orders)
    rng = np.random.default_rng(seed)
    f, w = random_state(g, rng).scaled(2.0), random_state(g, rng)
    assert wehrl_l1(f, w) >= f.norm() * w.norm() - 1e-9


@pytest.mark.parametrize("orders", [(3,), (9,), (3, 3)])
def test_wehrl_equality_exactly_for_sstates(orders):
    g = Group(orders)
    for f in enumerate_sstates(g):
        assert abs(wehrl_l1(f, reflect(f)) - 1) < 1e-9
    rng = np.random.default_rng(7)
    for _ in range(50):
        f = random_state(g, rng)
        assert wehrl_l1(f, reflect(f)) > 1 + 1e-6


# -- products and Fourier duality -----------------------------------------------------

def test_direct_sum_examples():
    assert verify_direct_sum_form(tensor(CHIRP, delta(Z3)), 1)
    assert not verify_direct_sum_form(tensor(CHIRP, constant(Z3)), 1)
    assert verify_direct_product_form(tensor(CHIRP, constant(Z3)), 1)
    assert verify_direct_sum_form(tensor(delta(Z3), delta(Z3)), 1)
    assert not verify_direct_sum_form(tensor(state(Z3, [1, 1, 0]), delta(Z3)), 1)
    with pytest.raises(GroupMismatch):
        verify_direct_sum_form(CHIRP, 1)


def test_partial_fourier_of_constant_is_delta():
    f = partial_fourier_second(tensor(CHIRP, constant(Z3)), 1)
    assert np.allclose(f.values, tensor(CHIRP, delta(Z3)).scaled(3).values)


@pytest.mark.parametrize("orders", [(3,), (5,), (9,), (3, 3), (3, 5)])
def test_fourier_maps_sstates_onto_sstates(orders):
    ss = enumerate_sstates(Group(orders))
    keys = {canonical_key(f) for f in ss}
    assert {canonical_key(fourier(f)) for f in ss} == keys


def test_smoothing_with_isotropic_nonnegative():
    g = Group((3, 3))
    rng = np.random.default_rng(11)
    iso = enumerate_max_isotropic(g)
    for _ in range(20):
        W = wigner(random_state(g, rng))
        for G in iso[::5]:
            assert smooth_with_subgroup(W, G).values.real.min() >= -1e-9
