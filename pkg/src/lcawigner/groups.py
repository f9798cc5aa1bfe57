"""Finite abelian groups Z_{d1} x ... x Z_{dk}.

Elements are tuples of residues.  Internally every element also has an
integer index given by the row-major (lexicographic) enumeration of the
residue tuples, and all tables in the package are indexed that way.

The dual group is identified with the group itself through the pairing

    xi_a(x) = exp(2 pi i sum_j a_j x_j / d_j).

Phases are kept as integers modulo the exponent L = lcm(d_j), so a
character value costs one lookup in a table of L-th roots of unity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, GroupMismatch, NotASubgroup, NotTwoRegular

DEFAULT_CAP = 512

Element = tuple[int, ...]


@dataclass(frozen=True)
class Group:
    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        if not orders:
            raise GroupMismatch("a group needs at least one cyclic factor")
        if any(d < 1 for d in orders):
            raise GroupMismatch(f"cyclic orders must be >= 1, got {list(orders)}")
        object.__setattr__(self, "orders", orders)

    def __repr__(self):
        return "Group(" + " x ".join(f"Z{d}" for d in self.orders) + ")"

    @property
    def rank(self) -> int:
        return len(self.orders)

    @cached_property
    def cardinality(self) -> int:
        return math.prod(self.orders)

    @property
    def point_weight_primal(self) -> Fraction:
        return Fraction(1)

    @property
    def point_weight_dual(self) -> Fraction:
        return Fraction(1, self.cardinality)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.orders)

    def is_two_regular(self) -> bool:
        return self.cardinality % 2 == 1

    def require_two_regular(self):
        if not self.is_two_regular():
            raise NotTwoRegular(f"{self!r} has even order {self.cardinality}")

    # -- element <-> index ------------------------------------------------

    @cached_property
    def elements(self) -> np.ndarray:
        """All elements as an (N, k) integer array, in index order."""
        grids = np.indices(self.orders).reshape(self.rank, -1)
        return np.ascontiguousarray(grids.T)

    def index(self, x: Sequence[int]) -> int:
        return int(np.ravel_multi_index(self.check(x), self.orders))

    def element(self, i: int) -> Element:
        return tuple(int(v) for v in np.unravel_index(int(i), self.orders))

    def indices_of(self, residues: np.ndarray) -> np.ndarray:
        """Vectorised index lookup; ``residues`` has trailing axis of length k."""
        residues = np.mod(residues, self.orders)
        return np.ravel_multi_index(tuple(np.moveaxis(residues, -1, 0)), self.orders)

    def check(self, x: Sequence[int]) -> Element:
        x = tuple(int(v) for v in x)
        if len(x) != self.rank:
            raise GroupMismatch(f"element {list(x)} has {len(x)} coordinates, {self!r} has rank {self.rank}")
        if any(not 0 <= v < d for v, d in zip(x, self.orders)):
            raise GroupMismatch(f"element {list(x)} is not reduced modulo {list(self.orders)}")
        return x

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    # -- arithmetic -------------------------------------------------------

    def add(self, x: Sequence[int], y: Sequence[int]) -> Element:
        x, y = self.check(x), self.check(y)
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x: Sequence[int]) -> Element:
        return tuple((-a) % d for a, d in zip(self.check(x), self.orders))

    def sub(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return self.add(x, self.neg(y))

    def mul(self, k: int, x: Sequence[int]) -> Element:
        return tuple((k * a) % d for a, d in zip(self.check(x), self.orders))

    def double(self, x: Sequence[int]) -> Element:
        return self.mul(2, x)

    def halve(self, x: Sequence[int]) -> Element:
        """The unique y with 2y = x.  Only defined for odd order."""
        self.require_two_regular()
        return tuple(((d + 1) // 2 * a) % d for a, d in zip(self.check(x), self.orders))

    def element_order(self, x: Sequence[int]) -> int:
        return math.lcm(*(d // math.gcd(d, a) for a, d in zip(self.check(x), self.orders)))

    # -- index tables -----------------------------------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        e = self.elements
        return self.indices_of(e[:, None, :] + e[None, :, :])

    @cached_property
    def neg_index(self) -> np.ndarray:
        return self.indices_of(-self.elements)

    @cached_property
    def double_index(self) -> np.ndarray:
        return self.indices_of(2 * self.elements)

    @cached_property
    def half_index(self) -> np.ndarray:
        self.require_two_regular()
        factors = np.array([(d + 1) // 2 for d in self.orders])
        return self.indices_of(self.elements * factors)

    @cached_property
    def sub_table(self) -> np.ndarray:
        """sub_table[x, y] = index of x - y."""
        return self.add_table[:, self.neg_index]

    # -- characters -------------------------------------------------------

    @cached_property
    def roots(self) -> np.ndarray:
        L = self.exponent
        k = np.arange(L)
        return np.exp(2j * np.pi * k / L)

    @cached_property
    def phase_matrix(self) -> np.ndarray:
        """phase_matrix[a, x] = L * (sum_j a_j x_j / d_j) mod L, an exact integer."""
        scale = np.array([self.exponent // d for d in self.orders], dtype=np.int64)
        e = self.elements.astype(np.int64)
        return ((e * scale) @ e.T) % self.exponent

    @cached_property
    def char_matrix(self) -> np.ndarray:
        """char_matrix[a, x] = xi_a(x).  Symmetric under the standard pairing."""
        return self.roots[self.phase_matrix]

    def char_phase(self, a: Sequence[int], x: Sequence[int]) -> int:
        a, x = self.check(a), self.check(x)
        L = self.exponent
        return sum(ai * xi * (L // d) for ai, xi, d in zip(a, x, self.orders)) % L

    def char_eval(self, a: Sequence[int], x: Sequence[int]) -> complex:
        return complex(self.roots[self.char_phase(a, x)])

    def to_json(self) -> dict:
        return {"orders": list(self.orders)}


def make_group(orders: Iterable[int]) -> Group:
    return Group(tuple(orders))


def product_group(g1: Group, g2: Group) -> Group:
    """A1 x A2 with its index split as i = i1 * |A2| + i2."""
    return Group(g1.orders + g2.orders)


def trivial_group() -> Group:
    return Group((1,))


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup H of ``parent``, stored as the sorted tuple of its element indices."""

    parent: Group
    indices: tuple[int, ...]
    generator_indices: tuple[int, ...] = ()

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.parent == other.parent and self.indices == other.indices

    def __hash__(self):
        return hash((self.parent, self.indices))

    def __len__(self):
        return len(self.indices)

    def __contains__(self, x):
        i = x if isinstance(x, (int, np.integer)) else self.parent.index(x)
        return int(i) in self.index_set

    def __repr__(self):
        return f"Subgroup(order={self.order}, generators={self.generators})"

    @property
    def order(self) -> int:
        return len(self.indices)

    @cached_property
    def index_set(self) -> frozenset[int]:
        return frozenset(self.indices)

    @property
    def elements(self) -> list[Element]:
        return [self.parent.element(i) for i in self.indices]

    @property
    def generators(self) -> list[Element]:
        return [self.parent.element(i) for i in self.generator_indices]

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.cardinality, dtype=bool)
        m[list(self.indices)] = True
        return m

    def to_json(self) -> dict:
        return {"generators": [list(g) for g in self.generators]}


def _closure(g: Group, gens: Iterable[int]) -> tuple[int, ...]:
    span = np.zeros(g.cardinality, dtype=bool)
    span[0] = True
    table = g.add_table
    for s in gens:
        current = np.flatnonzero(span)
        # add multiples of s until the coset sweep closes up
        while True:
            shifted = table[current, s]
            if span[shifted].all():
                break
            span[shifted] = True
            current = np.flatnonzero(span)
    return tuple(int(i) for i in np.flatnonzero(span))


def _prune_generators(g: Group, gens: Sequence[int], target: tuple[int, ...]) -> tuple[int, ...]:
    gens = [int(s) for s in dict.fromkeys(gens) if s != 0]
    i = 0
    while i < len(gens):
        trial = gens[:i] + gens[i + 1:]
        if _closure(g, trial) == target:
            gens = trial
        else:
            i += 1
    return tuple(gens)


def greedy_generators(g: Group, indices: Iterable[int]) -> tuple[int, ...]:
    """Scan elements in index order, keeping each one not already spanned."""
    gens: list[int] = []
    span = {0}
    for i in sorted(int(i) for i in indices):
        if i not in span:
            gens.append(i)
            span = set(_closure(g, gens))
    return tuple(gens)


def subgroup_from_indices(g: Group, indices: Iterable[int]) -> Subgroup:
    idx = tuple(sorted({int(i) for i in indices}))
    if not is_subgroup(g, idx):
        raise NotASubgroup(f"indices {list(idx)} do not form a subgroup of {g!r}")
    return Subgroup(g, idx, greedy_generators(g, idx))


def generated_subgroup(g: Group, generators: Iterable[Sequence[int]]) -> Subgroup:
    gens = [g.index(x) for x in generators]
    idx = _closure(g, gens)
    return Subgroup(g, idx, _prune_generators(g, gens, idx))


def is_subgroup(g: Group, indices: Iterable[int]) -> bool:
    idx = np.unique(np.fromiter((int(i) for i in indices), dtype=np.int64))
    if idx.size == 0 or idx[0] != 0 or g.cardinality % idx.size:
        return False
    member = np.zeros(g.cardinality, dtype=bool)
    member[idx] = True
    return bool(member[g.sub_table[np.ix_(idx, idx)]].all())


def enumerate_subgroups(g: Group, cap: int = DEFAULT_CAP) -> list[Subgroup]:
    """All subgroups of ``g``, sorted by order and then by element list.

    Cyclic subgroups are generated first; pairwise sums are then taken until
    no new subgroup appears.
    """
    if g.cardinality > cap:
        raise CapExceeded(f"{g!r} has {g.cardinality} elements, cap is {cap}")
    found: dict[tuple[int, ...], tuple[int, ...]] = {}
    for x in range(g.cardinality):
        idx = _closure(g, [x])
        found.setdefault(idx, (x,) if x else ())
    queue = list(found)
    table = g.add_table
    i = 0
    while i < len(queue):
        h = np.array(queue[i])
        for j in range(i):
            k = np.array(queue[j])
            joined = tuple(int(v) for v in np.unique(table[np.ix_(h, k)]))
            if joined not in found:
                found[joined] = found[queue[i]] + found[queue[j]]
                queue.append(joined)
        i += 1
    subs = [Subgroup(g, idx, _prune_generators(g, gens, idx)) for idx, gens in found.items()]
    subs.sort(key=lambda s: (s.order, s.indices))
    return subs


def annihilator(h: Subgroup) -> Subgroup:
    """H^perp = {a : xi_a(x) = 1 for all x in H}, as a subgroup of the (self-)dual copy."""
    g = h.parent
    gens = list(h.generator_indices) or [0]
    trivial = (g.phase_matrix[:, gens] == 0).all(axis=1)
    return subgroup_from_indices(g, np.flatnonzero(trivial))


def haar_mass(h: Subgroup) -> Fraction:
    return h.order * h.parent.point_weight_primal


def dual_haar_mass(h: Subgroup) -> Fraction:
    return h.order * h.parent.point_weight_dual


def coset_representatives(h: Subgroup) -> list[int]:
    """Least element index of every coset x + H, in increasing order."""
    g = h.parent
    seen = np.zeros(g.cardinality, dtype=bool)
    reps = []
    hidx = np.array(h.indices)
    for x in range(g.cardinality):
        if not seen[x]:
            reps.append(x)
            seen[g.add_table[x, hidx]] = True
    return reps


def doubled(h: Subgroup) -> Subgroup:
    g = h.parent
    return subgroup_from_indices(g, g.double_index[list(h.indices)])


def all_products(orders: Sequence[int]) -> Iterable[Element]:
    return itertools.product(*(range(d) for d in orders))
