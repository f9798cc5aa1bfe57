"""Functions on a finite abelian group and their phase-space transforms.

Measure conventions: counting measure on A, mass 1/|A| per point on the
dual, so a phase-space cell (x, a) has mass 1/|A|.  Tables are |A| x |A|
with rows indexed by x and columns by the dual index a.

All transforms are plain O(|A|^2)-per-row sums in a fixed order, so results
do not depend on how rows are scheduled.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import GroupMismatch, NonRealTable, NotASubgroup
from .groups import Element, Group, product_group

EXACT_TOL = 1e-9
COMPOSED_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class StateVector:
    group: Group
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).reshape(-1)
        if v.size != self.group.cardinality:
            raise GroupMismatch(f"{v.size} values given for a group of order {self.group.cardinality}")
        object.__setattr__(self, "values", v)

    def __repr__(self):
        return f"StateVector({self.group!r}, norm={self.norm():.6g})"

    def __getitem__(self, x):
        i = x if isinstance(x, (int, np.integer)) else self.group.index(x)
        return self.values[i]

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def normalized(self) -> "StateVector":
        return StateVector(self.group, self.values / self.norm())

    def scaled(self, c: complex) -> "StateVector":
        return StateVector(self.group, c * self.values)

    def inner(self, other: "StateVector") -> complex:
        """<self, other>, conjugate-linear in the first slot."""
        _same_group(self, other)
        return complex(np.vdot(self.values, other.values))

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "values": [[float(z.real), float(z.imag)] for z in self.values]}


class PhasePoint(NamedTuple):
    x: Element
    a: Element


@dataclass(frozen=True, eq=False)
class PhaseTable:
    group: Group
    values: np.ndarray

    def __post_init__(self):
        n = self.group.cardinality
        v = np.asarray(self.values)
        if v.shape != (n, n):
            raise GroupMismatch(f"table of shape {v.shape} for a group of order {n}")
        object.__setattr__(self, "values", v)

    @property
    def cell_mass(self) -> float:
        return 1.0 / self.group.cardinality

    def __getitem__(self, point):
        x, a = point
        g = self.group
        xi = x if isinstance(x, (int, np.integer)) else g.index(x)
        ai = a if isinstance(a, (int, np.integer)) else g.index(a)
        return self.values[xi, ai]

    def __neg__(self):
        return PhaseTable(self.group, -self.values)

    def real(self, tol: float = EXACT_TOL) -> np.ndarray:
        imag = float(np.max(np.abs(np.imag(self.values)), initial=0.0))
        if imag > tol:
            raise NonRealTable(f"max |Im| = {imag:.3g} exceeds {tol:g}")
        return np.real(self.values).copy()

    def inner(self, other: "PhaseTable") -> complex:
        """<F, G> in L^2(A x A^) with cell mass 1/|A|."""
        if other.group != self.group:
            raise GroupMismatch("tables live on different groups")
        return complex(np.vdot(self.values, other.values)) * self.cell_mass

    def total_mass(self) -> complex:
        return complex(self.values.sum()) * self.cell_mass

    def l1_norm(self) -> float:
        return float(np.abs(self.values).sum()) * self.cell_mass

    def records(self):
        n = self.group.cardinality
        v = np.asarray(self.values, dtype=complex)
        for x in range(n):
            for a in range(n):
                yield x, a, float(v[x, a].real), float(v[x, a].imag)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x_index,dual_index,re,im\n")
        for x, a, re, im in self.records():
            buf.write(f"{x},{a},{re!r},{im!r}\n")
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "columns": ["x_index", "dual_index", "re", "im"],
            "rows": [list(r) for r in self.records()],
        }


def _same_group(f: StateVector, g: StateVector):
    if f.group != g.group:
        raise GroupMismatch(f"{f.group!r} != {g.group!r}")


def state(group: Group, values) -> StateVector:
    return StateVector(group, values)


def delta(group: Group, x: Sequence[int] | None = None) -> StateVector:
    v = np.zeros(group.cardinality, dtype=complex)
    v[0 if x is None else group.index(x)] = 1.0
    return StateVector(group, v)


def constant(group: Group, c: complex = 1.0) -> StateVector:
    return StateVector(group, np.full(group.cardinality, c, dtype=complex))


def random_state(group: Group, rng: np.random.Generator) -> StateVector:
    """i.i.d. standard complex Gaussian coordinates, normalised."""
    n = group.cardinality
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return StateVector(group, v / np.linalg.norm(v))


# -- elementary operators ------------------------------------------------------

def fourier(f: StateVector) -> StateVector:
    """f^(a) = sum_x f(x) conj(xi_a(x)); the result is indexed by the dual."""
    return StateVector(f.group, np.conj(f.group.char_matrix) @ f.values)


def inverse_fourier(fh: StateVector) -> StateVector:
    g = fh.group
    return StateVector(g, g.char_matrix @ fh.values / g.cardinality)


def reflect(f: StateVector) -> StateVector:
    return StateVector(f.group, f.values[f.group.neg_index])


def translate(f: StateVector, y: Sequence[int]) -> StateVector:
    """T_y f(x) = f(x - y)."""
    g = f.group
    return StateVector(g, f.values[g.sub_table[:, g.index(y)]])


def modulate(f: StateVector, a: Sequence[int]) -> StateVector:
    """M_a f(x) = xi_a(x) f(x)."""
    g = f.group
    return StateVector(g, g.char_matrix[g.index(a)] * f.values)


def tensor(f: StateVector, h: StateVector) -> StateVector:
    return StateVector(product_group(f.group, h.group), np.kron(f.values, h.values))


def tensor_table(t1: PhaseTable, t2: PhaseTable) -> PhaseTable:
    """(T1 (x) T2)((x1,x2),(a1,a2)) = T1(x1,a1) T2(x2,a2) in the product's index order."""
    n1, n2 = t1.group.cardinality, t2.group.cardinality
    v = np.einsum("ij,kl->ikjl", t1.values, t2.values).reshape(n1 * n2, n1 * n2)
    return PhaseTable(product_group(t1.group, t2.group), v)


# -- transforms ----------------------------------------------------------------

def stft(f: StateVector, g: StateVector) -> PhaseTable:
    """V_g f(x, a) = <M_a T_x g, f> = sum_y conj(xi_a(y)) conj(g(y - x)) f(y)."""
    _same_group(f, g)
    grp = f.group
    # row x, column y holds the index of y - x
    shifted = grp.sub_table.T
    u = np.conj(g.values)[shifted] * f.values[None, :]
    return PhaseTable(grp, u @ np.conj(grp.char_matrix))


def ambiguity(f: StateVector) -> PhaseTable:
    """A f(x, a) = xi_a(x/2) V_f f(x, a)."""
    grp = f.group
    grp.require_two_regular()
    v = stft(f, f).values
    return PhaseTable(grp, grp.char_matrix[grp.half_index, :] * v)


def wigner(f: StateVector) -> PhaseTable:
    """W f(x, a) = sum_y f(x + y/2) conj(f(x - y/2)) conj(xi_a(y))."""
    grp = f.group
    grp.require_two_regular()
    half = grp.half_index
    plus = grp.add_table[:, half]
    minus = grp.sub_table[:, half]
    u = f.values[plus] * np.conj(f.values[minus])
    return PhaseTable(grp, u @ np.conj(grp.char_matrix))


def wigner_stack(group: Group, values: np.ndarray) -> np.ndarray:
    """Wigner tables of a stack of functions, shape (B, |A|) -> (B, |A|, |A|)."""
    group.require_two_regular()
    half = group.half_index
    v = np.asarray(values, dtype=complex)
    u = v[:, group.add_table[:, half]] * np.conj(v[:, group.sub_table[:, half]])
    return u @ np.conj(group.char_matrix)


def wigner_via_stft(f: StateVector) -> PhaseTable:
    """W f(x, a) = xi_a(2x) V_{f reflected} f(2x, 2a); the doubling constant is 1 here."""
    grp = f.group
    grp.require_two_regular()
    dbl = grp.double_index
    v = stft(f, reflect(f)).values
    return PhaseTable(grp, grp.char_matrix[dbl, :] * v[np.ix_(dbl, dbl)])


def rotate(table: PhaseTable) -> np.ndarray:
    """U F(b, y) = F(y, -b), returned with rows indexed by the dual variable b."""
    g = table.group
    return table.values[:, g.neg_index].T


def symplectic_fourier(F: np.ndarray, group: Group) -> PhaseTable:
    """Fourier transform of a function F(b, y) on A^ x A, evaluated on A x A^.

    (F F)(x, a) = sum_{b, y} (1/|A|) F(b, y) conj(xi_a(y)) conj(xi_b(x)).
    """
    cc = np.conj(group.char_matrix)
    out = np.einsum("bx,by,ya->xa", cc, F, cc) / group.cardinality
    return PhaseTable(group, out)


def wigner_from_ambiguity(table: PhaseTable) -> PhaseTable:
    return symplectic_fourier(rotate(table), table.group)


# -- phase-space subgroups and smoothing -------------------------------------------

@dataclass(frozen=True, eq=False)
class PhaseSubgroup:
    """A subgroup of A x A^, stored as sorted flat cell indices x * |A| + a."""

    group: Group
    flat: np.ndarray

    @classmethod
    def from_flat(cls, group: Group, flat: Iterable[int], check: bool = True) -> "PhaseSubgroup":
        flat = np.unique(np.fromiter((int(i) for i in flat), dtype=np.int64))
        G = cls(group, flat)
        if check and not G.is_subgroup():
            raise NotASubgroup("the given phase-space points are not closed under subtraction")
        return G

    @classmethod
    def from_points(cls, group: Group, points: Iterable, check: bool = True) -> "PhaseSubgroup":
        n = group.cardinality
        flat = []
        for x, a in points:
            xi = x if isinstance(x, (int, np.integer)) else group.index(x)
            ai = a if isinstance(a, (int, np.integer)) else group.index(a)
            flat.append(int(xi) * n + int(ai))
        return cls.from_flat(group, flat, check)

    @classmethod
    def full(cls, group: Group) -> "PhaseSubgroup":
        return cls(group, np.arange(group.cardinality ** 2))

    @classmethod
    def primal_axis(cls, group: Group) -> "PhaseSubgroup":
        """A x {0}."""
        n = group.cardinality
        return cls(group, np.arange(n) * n)

    @classmethod
    def dual_axis(cls, group: Group) -> "PhaseSubgroup":
        """{0} x A^."""
        return cls(group, np.arange(group.cardinality))

    def __len__(self):
        return int(self.flat.size)

    @property
    def xs(self) -> np.ndarray:
        return self.flat // self.group.cardinality

    @property
    def duals(self) -> np.ndarray:
        return self.flat % self.group.cardinality

    @property
    def mass(self) -> float:
        return len(self) / self.group.cardinality

    def points(self) -> list[PhasePoint]:
        g = self.group
        return [PhasePoint(g.element(x), g.element(a)) for x, a in zip(self.xs, self.duals)]

    def mask(self) -> np.ndarray:
        n = self.group.cardinality
        m = np.zeros(n * n, dtype=bool)
        m[self.flat] = True
        return m.reshape(n, n)

    def key(self) -> bytes:
        return self.flat.astype(np.int64).tobytes()

    def _combine(self, other_xs, other_as, sub: bool) -> np.ndarray:
        g = self.group
        table = g.sub_table if sub else g.add_table
        xs = table[np.ix_(self.xs, other_xs)]
        duals = table[np.ix_(self.duals, other_as)]
        return xs * g.cardinality + duals

    def is_subgroup(self) -> bool:
        n = self.group.cardinality
        if self.flat.size == 0 or self.flat[0] != 0 or (n * n) % self.flat.size:
            return False
        member = np.zeros(n * n, dtype=bool)
        member[self.flat] = True
        return bool(member[self._combine(self.xs, self.duals, sub=True)].all())

    def join(self, other: "PhaseSubgroup") -> "PhaseSubgroup":
        """G + K; a subgroup whenever both summands are."""
        if other.group != self.group:
            raise GroupMismatch("phase-space subgroups of different groups")
        return PhaseSubgroup(self.group, np.unique(self._combine(other.xs, other.duals, sub=False)))

    def contains(self, other: "PhaseSubgroup") -> bool:
        return bool(np.isin(other.flat, self.flat).all())

    def coset_indicator(self, x: int = 0, a: int = 0) -> np.ndarray:
        """Indicator table of (x, a) + G."""
        g = self.group
        n = g.cardinality
        out = np.zeros((n, n))
        out[g.add_table[x, self.xs], g.add_table[a, self.duals]] = 1.0
        return out


def smooth_with_subgroup(W: PhaseTable, G) -> PhaseTable:
    """(W * chi_G)(z) = sum_w (1/|A|) W(w) chi_G(z - w).

    ``G`` may be a PhaseSubgroup, anything exposing ``phase_subgroup``, or an
    iterable of phase points; closure under subtraction is checked.
    """
    grp = W.group
    if hasattr(G, "phase_subgroup"):
        G = G.phase_subgroup
    if not isinstance(G, PhaseSubgroup):
        G = PhaseSubgroup.from_points(grp, G)
    elif not G.is_subgroup():
        raise NotASubgroup("smoothing set is not a subgroup of A x A^")
    if G.group != grp:
        raise GroupMismatch("smoothing subgroup lives on another group")
    return PhaseTable(grp, _smooth_values(W.values, G))


def _smooth_values(values: np.ndarray, G: PhaseSubgroup) -> np.ndarray:
    """Smooth one table (n, n) or a stack (..., n, n) without re-validating G."""
    grp = G.group
    n = grp.cardinality
    zx = np.repeat(np.arange(n), n)
    za = np.tile(np.arange(n), n)
    gather = grp.sub_table[zx[:, None], G.xs[None, :]] * n + grp.sub_table[za[:, None], G.duals[None, :]]
    flat = values.reshape(values.shape[:-2] + (n * n,))
    out = flat[..., gather].sum(axis=-1) / n
    return out.reshape(values.shape)


def smooth_stack(values: np.ndarray, G: PhaseSubgroup) -> np.ndarray:
    return _smooth_values(values, G)


def min_entry(W: PhaseTable, tol: float = EXACT_TOL) -> tuple[float, PhasePoint]:
    """Minimum of a real table and the first cell (row-major) within ``tol`` of it.

    Scanning for the first near-minimal cell rather than the exact argmin
    keeps the reported location stable under round-off.
    """
    r = W.real(tol)
    m = float(r.min())
    flat = int(np.flatnonzero(r.reshape(-1) <= m + tol)[0])
    n = W.group.cardinality
    g = W.group
    return m, PhasePoint(g.element(flat // n), g.element(flat % n))


def plancherel_defect(f: StateVector) -> float:
    fh = fourier(f)
    return abs(np.sum(np.abs(f.values) ** 2) - np.sum(np.abs(fh.values) ** 2) / f.group.cardinality)


def symplectic_form(group: Group, z: PhasePoint, w: PhasePoint) -> complex:
    """sigma((x, a), (y, b)) = xi_a(y) conj(xi_b(x))."""
    (x, a), (y, b) = z, w
    phase = (group.char_phase(a, y) - group.char_phase(b, x)) % group.exponent
    return complex(group.roots[phase])
