"""Characters of second degree, S-states and maximal isotropic subgroups.

A subgroup H is coordinatised by an invariant-factor basis b_1..b_r with
orders e_1 | e_2 | ... | e_r.  A symmetric homomorphism beta: H -> H^ is
then a symmetric integer matrix m with m_ij taken mod gcd(e_i, e_j):

    beta(x)(y) = exp(2 pi i sum_ij m_ij c_i(x) c_j(y) / gcd(e_i, e_j)).

On a group of odd order the character of second degree attached to beta
is h(x) = beta(x/2)(x), and the S-states are the functions

    f(x) = c * h(x - y) * xi_chi(x - y)   on y + H,   0 elsewhere.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import CapExceeded, GroupMismatch, ZeroVector
from .groups import (
    DEFAULT_CAP,
    Element,
    Group,
    Subgroup,
    coset_representatives,
    enumerate_subgroups,
    generated_subgroup,
)
from .phase_space import (
    EXACT_TOL,
    PhaseSubgroup,
    PhaseTable,
    StateVector,
    min_entry,
    stft,
    wigner,
)


@dataclass(frozen=True, eq=False)
class CyclicBasis:
    subgroup: Subgroup
    basis_indices: tuple[int, ...]
    invariant_factors: tuple[int, ...]
    coords: np.ndarray  # (|H|, r), row i = coordinates of subgroup.indices[i]

    @property
    def group(self) -> Group:
        return self.subgroup.parent

    @property
    def basis(self) -> list[Element]:
        return [self.group.element(i) for i in self.basis_indices]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @cached_property
    def position(self) -> np.ndarray:
        """position[i] = row of parent index i in ``coords``, or -1 off H."""
        pos = np.full(self.group.cardinality, -1, dtype=np.int64)
        pos[list(self.subgroup.indices)] = np.arange(self.subgroup.order)
        return pos

    def coordinates(self, x) -> tuple[int, ...]:
        i = x if isinstance(x, (int, np.integer)) else self.group.index(x)
        p = self.position[int(i)]
        if p < 0:
            raise GroupMismatch(f"{self.group.element(int(i))} is not in the subgroup")
        return tuple(int(c) for c in self.coords[p])


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _p_part_basis(g: Group, part: list[int], p: int) -> list[int]:
    """Basis of a finite abelian p-group, chosen greedily by quotient order.

    Each step takes the element of largest order modulo the current span and
    replaces it by a translate of the same order, so the span grows directly.
    """
    add = g.add_table
    span = {0}
    basis: list[int] = []
    while len(span) < len(part):
        best, best_q = None, 1
        for x in part:
            q, y = 1, x
            while y not in span:
                q *= p
                y = _multiple(g, x, q)
            if q > best_q:
                best, best_q = x, q
        lift = next(
            d for d in (int(add[best, g.neg_index[s]]) for s in sorted(span))
            if g.element_order(g.element(d)) == best_q
        )
        basis.append(lift)
        new_span = set(span)
        y = lift
        for _ in range(best_q - 1):
            new_span |= {int(add[s, y]) for s in span}
            y = int(add[y, lift])
        span = new_span
    return basis


def _multiple(g: Group, x: int, k: int) -> int:
    return g.index(g.mul(k, g.element(x)))


def cyclic_decompose(H: Subgroup) -> CyclicBasis:
    """Invariant-factor basis of H.  Deterministic: depends only on the element set."""
    g = H.parent
    if H.order == 1:
        return CyclicBasis(H, (), (), np.zeros((1, 0), dtype=np.int64))
    prime_bases: list[list[tuple[int, int]]] = []
    for p in _prime_factors(H.order):
        part = [i for i in H.indices if _is_power_of(g.element_order(g.element(i)), p)]
        basis = _p_part_basis(g, part, p)
        orders = [g.element_order(g.element(b)) for b in basis]
        prime_bases.append(sorted(zip(orders, basis), key=lambda t: -t[0]))
    r = max(len(pb) for pb in prime_bases)
    factors, elems = [], []
    for k in range(r):
        e, b = 1, 0
        for pb in prime_bases:
            if k < len(pb):
                e *= pb[k][0]
                b = int(g.add_table[b, pb[k][1]])
        factors.append(e)
        elems.append(b)
    factors.reverse()
    elems.reverse()
    coords = np.zeros((H.order, r), dtype=np.int64)
    pos = {h: i for i, h in enumerate(H.indices)}
    filled = np.zeros(H.order, dtype=bool)
    for c in itertools.product(*(range(e) for e in factors)):
        x = 0
        for ci, b in zip(c, elems):
            x = int(g.add_table[x, _multiple(g, b, ci)])
        i = pos[x]
        if filled[i]:
            raise AssertionError("basis does not give unique coordinates")
        filled[i] = True
        coords[i] = c
    return CyclicBasis(H, tuple(elems), tuple(factors), coords)


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


@dataclass(frozen=True, eq=False)
class SymmetricHom:
    basis: CyclicBasis
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        e = self.basis.invariant_factors
        m = tuple(tuple(int(v) % math.gcd(e[i], e[j]) for j, v in enumerate(row)) for i, row in enumerate(self.matrix))
        if len(m) != len(e) or any(len(row) != len(e) for row in m):
            raise GroupMismatch(f"beta must be a {len(e)}x{len(e)} matrix")
        if any(m[i][j] != m[j][i] for i in range(len(e)) for j in range(len(e))):
            raise GroupMismatch("beta matrix is not symmetric")
        object.__setattr__(self, "matrix", m)

    def __repr__(self):
        return f"SymmetricHom({[list(r) for r in self.matrix]}, factors={list(self.basis.invariant_factors)})"

    @property
    def subgroup(self) -> Subgroup:
        return self.basis.subgroup

    @cached_property
    def scaled_matrix(self) -> np.ndarray:
        L = self.basis.group.exponent
        e = self.basis.invariant_factors
        r = len(e)
        out = np.zeros((r, r), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                out[i, j] = self.matrix[i][j] * (L // math.gcd(e[i], e[j]))
        return out

    @cached_property
    def phase_table(self) -> np.ndarray:
        """Integer phases of beta(x)(y), units of 1/L, rows and columns in H order."""
        C = self.basis.coords
        return (C @ self.scaled_matrix @ C.T) % self.basis.group.exponent

    def phase(self, x, y) -> int:
        pos = self.basis.position
        g = self.basis.group
        xi = x if isinstance(x, (int, np.integer)) else g.index(x)
        yi = y if isinstance(y, (int, np.integer)) else g.index(y)
        return int(self.phase_table[pos[xi], pos[yi]])

    def __call__(self, x, y) -> complex:
        return complex(self.basis.group.roots[self.phase(x, y)])


def enumerate_sym_homs(H: Subgroup, cap: int = DEFAULT_CAP, basis: CyclicBasis | None = None) -> list[SymmetricHom]:
    if H.order > cap:
        raise CapExceeded(f"subgroup of order {H.order} exceeds cap {cap}")
    basis = basis or cyclic_decompose(H)
    e = basis.invariant_factors
    r = len(e)
    slots = [(i, j) for i in range(r) for j in range(i, r)]
    homs = []
    for values in itertools.product(*(range(math.gcd(e[i], e[j])) for i, j in slots)):
        m = [[0] * r for _ in range(r)]
        for (i, j), v in zip(slots, values):
            m[i][j] = m[j][i] = v
        homs.append(SymmetricHom(basis, tuple(tuple(row) for row in m)))
    return homs


def second_degree_phases(beta: SymmetricHom) -> np.ndarray:
    """Phases of h(x) = beta(x/2)(x) for x in H order."""
    g = beta.basis.group
    g.require_two_regular()
    H = beta.subgroup
    pos = beta.basis.position
    rows = pos[g.half_index[list(H.indices)]]
    return beta.phase_table[rows, np.arange(H.order)]


def second_degree_char(H: Subgroup, beta: SymmetricHom):
    """The character of second degree x -> beta(x/2)(x) on H, as a callable."""
    if beta.subgroup != H:
        raise GroupMismatch("beta is attached to a different subgroup")
    g = H.parent
    phases = second_degree_phases(beta)
    pos = beta.basis.position

    def h(x) -> complex:
        i = x if isinstance(x, (int, np.integer)) else g.index(x)
        p = pos[int(i)]
        if p < 0:
            raise GroupMismatch(f"{g.element(int(i))} is not in H")
        return complex(g.roots[phases[p]])

    return h


@dataclass(frozen=True, eq=False)
class SStateSpec:
    H: Subgroup
    beta: SymmetricHom
    chi: Element
    shift: Element
    scale: complex = 1.0

    def __post_init__(self):
        if self.beta.subgroup != self.H:
            raise GroupMismatch("beta is attached to a different subgroup")
        if self.scale == 0:
            raise ZeroVector("an S-state needs a nonzero scale")
        g = self.H.parent
        object.__setattr__(self, "chi", g.check(self.chi))
        object.__setattr__(self, "shift", g.check(self.shift))

    @property
    def group(self) -> Group:
        return self.H.parent

    def to_json(self) -> dict:
        return {
            "H": self.H.to_json(),
            "beta": [list(r) for r in self.beta.matrix],
            "chi": list(self.chi),
            "shift": list(self.shift),
            "scale": [float(np.real(self.scale)), float(np.imag(self.scale))],
        }


def make_sstate(spec: SStateSpec) -> StateVector:
    g = spec.group
    g.require_two_regular()
    H = spec.H
    hidx = np.array(H.indices)
    L = g.exponent
    phases = (second_degree_phases(spec.beta) + g.phase_matrix[g.index(spec.chi), hidx]) % L
    values = np.zeros(g.cardinality, dtype=complex)
    values[g.add_table[g.index(spec.shift), hidx]] = spec.scale * g.roots[phases]
    return StateVector(g, values)


def character_representatives(H: Subgroup, basis: CyclicBasis | None = None) -> list[int]:
    """One dual index per character of H (least index in each class mod H^perp)."""
    g = H.parent
    basis = basis or cyclic_decompose(H)
    cols = list(basis.basis_indices)
    seen, reps = set(), []
    for a in range(g.cardinality):
        key = tuple(int(v) for v in g.phase_matrix[a, cols])
        if key not in seen:
            seen.add(key)
            reps.append(a)
    return reps


def iter_sstate_specs(g: Group, cap: int = DEFAULT_CAP) -> Iterator[SStateSpec]:
    """All (H, beta, chi, shift) with chi over H^ and shift over A/H, unit-norm scale."""
    g.require_two_regular()
    for H in enumerate_subgroups(g, cap):
        basis = cyclic_decompose(H)
        scale = 1 / math.sqrt(H.order)
        chis = character_representatives(H, basis)
        shifts = coset_representatives(H)
        for beta in enumerate_sym_homs(H, cap, basis):
            for a in chis:
                for y in shifts:
                    yield SStateSpec(H, beta, g.element(a), g.element(y), scale)


def canonical_form(f: StateVector, tol: float = EXACT_TOL) -> StateVector:
    """Unit norm, first entry above ``tol`` (scan order) real positive."""
    norm = f.norm()
    if norm == 0:
        raise ZeroVector("cannot canonicalise the zero vector")
    v = f.values / norm
    first = v[np.flatnonzero(np.abs(v) > tol)[0]]
    return StateVector(f.group, v * (abs(first) / first))


def canonical_key(f: StateVector, decimals: int = 8) -> bytes:
    v = canonical_form(f).values
    parts = np.round(np.concatenate([v.real, v.imag]), decimals) + 0.0
    return parts.tobytes()


def enumerate_sstates(g: Group, cap: int = DEFAULT_CAP) -> list[StateVector]:
    """All S-states up to a global scalar, canonicalised, in generation order."""
    if g.cardinality > cap:
        raise CapExceeded(f"{g!r} has {g.cardinality} elements, cap is {cap}")
    out: dict[bytes, StateVector] = {}
    for spec in iter_sstate_specs(g, cap):
        f = canonical_form(make_sstate(spec))
        out.setdefault(canonical_key(f), f)
    return list(out.values())


@dataclass(frozen=True, eq=False)
class IsotropicGroupSpec:
    """G = {(x, a) : x in H, xi_a restricted to H equals beta(x)} inside A x A^."""

    H: Subgroup
    beta: SymmetricHom
    phase_subgroup: PhaseSubgroup

    @property
    def group(self) -> Group:
        return self.H.parent

    @property
    def elements(self):
        return self.phase_subgroup.points()

    @property
    def mass(self) -> float:
        return self.phase_subgroup.mass

    def is_isotropic(self) -> bool:
        g = self.group
        G = self.phase_subgroup
        p = g.phase_matrix[np.ix_(G.duals, G.xs)]
        return bool(((p - p.T) % g.exponent == 0).all())

    def membership_holds(self) -> bool:
        g = self.group
        G = self.phase_subgroup
        cols = list(self.beta.basis.basis_indices)
        pos = self.beta.basis.position
        if (pos[G.xs] < 0).any():
            return False
        lhs = g.phase_matrix[np.ix_(G.duals, cols)]
        rhs = self.beta.phase_table[np.ix_(pos[G.xs], pos[cols])] if cols else lhs
        return bool((lhs == rhs).all())

    def check(self) -> bool:
        n = self.group.cardinality
        return (
            len(self.phase_subgroup) == n
            and self.phase_subgroup.is_subgroup()
            and self.is_isotropic()
            and self.membership_holds()
        )

    def coset_indicator(self, shift: Sequence[int], chi: Sequence[int]) -> np.ndarray:
        g = self.group
        return self.phase_subgroup.coset_indicator(g.index(shift), g.index(chi))


def isotropic_group(beta: SymmetricHom) -> IsotropicGroupSpec:
    g = beta.basis.group
    H = beta.subgroup
    n = g.cardinality
    cols = list(beta.basis.basis_indices)
    by_restriction: dict[tuple, list[int]] = {}
    for a in range(n):
        by_restriction.setdefault(tuple(int(v) for v in g.phase_matrix[a, cols]), []).append(a)
    flat = []
    col_pos = beta.basis.position[cols]
    for row, x in enumerate(H.indices):
        target = tuple(int(v) for v in beta.phase_table[row, col_pos])
        flat.extend(x * n + a for a in by_restriction.get(target, ()))
    return IsotropicGroupSpec(H, beta, PhaseSubgroup.from_flat(g, flat, check=False))


def enumerate_max_isotropic(g: Group, cap: int = DEFAULT_CAP) -> list[IsotropicGroupSpec]:
    g.require_two_regular()
    out = []
    for H in enumerate_subgroups(g, cap):
        basis = cyclic_decompose(H)
        out.extend(isotropic_group(beta) for beta in enumerate_sym_homs(H, cap, basis))
    return out


# -- detection and classification -----------------------------------------------

def detect_sstate(f: StateVector, tol: float = EXACT_TOL) -> Optional[SStateSpec]:
    """Recover (H, beta, chi, shift, scale) from the values of f, or None.

    The support must be a coset y + H with |f| constant on it; beta is read
    off the quotients g(x + y) / (g(x) g(y)) on basis pairs, chi off the
    remaining character, and the result is accepted only if it reproduces f
    to within ``tol * |f|``.
    """
    g = f.group
    g.require_two_regular()
    norm = f.norm()
    if norm == 0:
        raise ZeroVector("detect_sstate needs a nonzero function")
    v = f.values
    amp = np.abs(v)
    support = np.flatnonzero(amp > 0.5 * amp.max())
    y0 = int(support[0])
    H_idx = np.sort(g.sub_table[support, y0])
    if H_idx[0] != 0 or g.cardinality % H_idx.size:
        return None
    member = np.zeros(g.cardinality, dtype=bool)
    member[H_idx] = True
    if not member[g.sub_table[np.ix_(H_idx, H_idx)]].all():
        return None
    H = generated_subgroup(g, [g.element(i) for i in H_idx])
    basis = cyclic_decompose(H)
    e = basis.invariant_factors
    L = g.exponent
    c = complex(v[y0])
    ratio = v[g.add_table[y0]] / c  # ratio[x] = f(y0 + x) / f(y0)

    def arg_units(z: complex, units: int) -> int:
        return int(round(np.angle(z) * units / (2 * np.pi))) % units

    b = basis.basis_indices
    r = len(b)
    m = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            q = ratio[g.add_table[b[i], b[j]]] / (ratio[b[i]] * ratio[b[j]])
            m[i][j] = arg_units(q, math.gcd(e[i], e[j]))
    if any(m[i][j] != m[j][i] for i in range(r) for j in range(i)):
        return None
    beta = SymmetricHom(basis, tuple(tuple(row) for row in m))
    h = second_degree_phases(beta)
    pos = basis.position
    target = np.array(
        [(arg_units(ratio[bi] / g.roots[h[pos[bi]]], ei) * (L // ei)) % L for bi, ei in zip(b, e)],
        dtype=np.int64,
    )
    hits = np.flatnonzero((g.phase_matrix[:, list(b)] == target).all(axis=1)) if r else np.array([0])
    if hits.size == 0:
        return None
    spec = SStateSpec(H, beta, g.element(int(hits[0])), g.element(y0), c)
    if np.linalg.norm(make_sstate(spec).values - v) > tol * norm:
        return None
    return spec


@dataclass
class HudsonResult:
    positive: bool
    min_value: float
    argmin: object
    sstate: Optional[SStateSpec]
    consistent: bool
    indicator_error: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "positive": self.positive,
            "min": self.min_value,
            "argmin": {"x": list(self.argmin.x), "a": list(self.argmin.a)},
            "sstate": self.sstate.to_json() if self.sstate else None,
            "consistent": self.consistent,
            "indicator_error": self.indicator_error,
        }


def hudson_classify(f: StateVector, tol: float = EXACT_TOL) -> HudsonResult:
    """Decide whether W f >= 0, and if so produce the S-state describing f.

    The Wigner table is taken of f / |f|.  ``consistent`` is False when the
    sign test and S-state detection disagree, or when a positive table is
    not the indicator of the predicted coset (shift, chi) + G(H, beta).
    """
    if f.norm() == 0:
        raise ZeroVector("hudson_classify needs a nonzero function")
    W = wigner(f.normalized())
    m, where = min_entry(W, tol)
    positive = m >= -tol
    spec = detect_sstate(f, tol)
    err = None
    consistent = positive == (spec is not None)
    if positive and spec is not None:
        G = isotropic_group(spec.beta)
        err = float(np.abs(W.values - G.coset_indicator(spec.shift, spec.chi)).max())
        consistent = consistent and err <= tol
    return HudsonResult(positive, m, where, spec if positive else None, consistent, err)


def wehrl_l1(f: StateVector, g: StateVector) -> float:
    """|V_g f|_{L^1(A x A^)}; bounded below by |f| |g|."""
    return stft(f, g).l1_norm()


def support_measure(V: PhaseTable, tol: float = EXACT_TOL):
    from fractions import Fraction

    return Fraction(int((np.abs(V.values) > tol).sum()), V.group.cardinality)


def split_group(g: Group, split: int) -> tuple[Group, Group]:
    if not 0 < split < g.rank:
        raise GroupMismatch(f"split {split} must leave factors on both sides of {g!r}")
    return Group(g.orders[:split]), Group(g.orders[split:])


def partial_fourier_second(f: StateVector, split: int) -> StateVector:
    """Fourier transform in the second tensor factor only."""
    g1, g2 = split_group(f.group, split)
    F = f.values.reshape(g1.cardinality, g2.cardinality)
    return StateVector(f.group, (F @ np.conj(g2.char_matrix)).reshape(-1))


def verify_direct_sum_form(f: StateVector, split: int, tol: float = EXACT_TOL) -> bool:
    """True iff f = f~ (x) delta_0 with f~ an S-state on the first factor."""
    g1, g2 = split_group(f.group, split)
    norm = f.norm()
    if norm == 0:
        raise ZeroVector("zero function")
    F = f.values.reshape(g1.cardinality, g2.cardinality)
    if np.linalg.norm(F[:, 1:]) > tol * norm:
        return False
    return detect_sstate(StateVector(g1, F[:, 0]), tol) is not None


def verify_direct_product_form(f: StateVector, split: int, tol: float = EXACT_TOL) -> bool:
    """True iff f = f~ (x) 1 with f~ an S-state, tested on the partial Fourier transform."""
    return verify_direct_sum_form(partial_fourier_second(f, split), split, tol)
