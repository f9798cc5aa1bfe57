"""Exact Wigner tables for locally constant, compactly supported functions on Omega_n.

A function with levels (m, M) vanishes off U_m and is constant on cosets of
U_M; its value on y + U_M is ``coeffs[iota(y)]`` with
iota(y) = sum_{k=m}^{M-1} y_k n^(k-m).  Haar measure has |U_k| = n^(-k).

For such f the Wigner integral reduces to a finite sum:

* x only matters modulo U_M and Wf vanishes unless 2x is in U_m, so x runs
  over the U_M-cosets of 2^{-1} U_m (digit x_{m-1} in {0, n/2} for even n);
* the integrand is a function of y in U_m modulo 2 U_M, so only the
  characters of the cyclic group U_m / 2U_M ~ Z_K contribute, with
  K = n^(M-m) for odd n and K = 2 n^(M-m) for even n;
* each y-coset has mass |2U_M| = lambda_2 n^(-M).

A grid point (X, b) stands for x = X n^s (s the x-grid start level) and the
character y -> exp(2 pi i b iota_K(y) / K), where iota_K(y) is y n^(-m) mod K.
The cell of a grid point has mass n^(m-M).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .adic import NAdicNumber
from .errors import LCAError


@dataclass(frozen=True, eq=False)
class SchwartzBruhatFn:
    base: int
    m: int
    M: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.base < 2:
            raise LCAError(f"base must be >= 2, got {self.base}")
        if self.M < self.m:
            raise LCAError(f"need m <= M, got m={self.m}, M={self.M}")
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if c.size != self.base ** (self.M - self.m):
            raise LCAError(f"expected {self.base ** (self.M - self.m)} coefficients, got {c.size}")
        object.__setattr__(self, "coeffs", c)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2)) * float(self.base) ** (-self.M)

    def refine(self, m: int | None = None, M: int | None = None) -> "SchwartzBruhatFn":
        """The same function described at a lower support level / higher constancy level."""
        n = self.base
        m = self.m if m is None else m
        M = self.M if M is None else M
        if m > self.m or M < self.M:
            raise LCAError("refinement can only lower m and raise M")
        c = np.tile(self.coeffs, n ** (M - self.M))
        out = np.zeros(c.size * n ** (self.m - m), dtype=complex)
        out[:: n ** (self.m - m)] = c
        return SchwartzBruhatFn(n, m, M, out)

    def __call__(self, x: NAdicNumber) -> complex:
        if x.base != self.base:
            raise LCAError("base mismatch")
        if x.precision_end < self.M:
            raise LCAError("point is not known to the constancy level")
        if any(x.digit(k) for k in range(x.start, self.m)):
            return 0j
        idx = sum(x.digit(k) * self.base ** (k - self.m) for k in range(self.m, self.M))
        return complex(self.coeffs[idx])

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "m": self.m,
            "M": self.M,
            "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SchwartzBruhatFn":
        coeffs = np.array([complex(re, im) for re, im in obj["coeffs"]])
        return cls(int(obj["base"]), int(obj["m"]), int(obj["M"]), coeffs)


def indicator_of_integers(n: int) -> SchwartzBruhatFn:
    """chi_{Delta_n}."""
    return SchwartzBruhatFn(n, 0, 0, np.ones(1))


def random_sb(n: int, m: int, M: int, rng: np.random.Generator) -> SchwartzBruhatFn:
    size = n ** (M - m)
    return SchwartzBruhatFn(n, m, M, rng.standard_normal(size) + 1j * rng.standard_normal(size))


@dataclass(frozen=True)
class SBGrid:
    base: int
    m: int
    M: int
    x_start: int
    modulus: int  # R = n^(M - x_start); x values are integers mod R
    x_values: np.ndarray
    char_order: int  # K

    @property
    def cell_mass(self) -> float:
        return float(self.base) ** (self.m - self.M)

    def x_point(self, i: int) -> NAdicNumber:
        return NAdicNumber.from_int(self.base, int(self.x_values[i]), self.x_start, self.M)


@lru_cache(maxsize=64)
def _grid(n: int, m: int, M: int) -> tuple[SBGrid, np.ndarray, np.ndarray]:
    even = n % 2 == 0
    s = m - 1 if even else m
    R = n ** (M - s)
    if even:
        K = 2 * n ** (M - m)
        X = np.arange(R, dtype=np.int64)
        X = X[(X % n == 0) | (X % n == n // 2)]
        halves = (np.arange(K, dtype=np.int64) * (n // 2)) % R
    else:
        K = R
        X = np.arange(R, dtype=np.int64)
        halves = (np.arange(K, dtype=np.int64) * ((R + 1) // 2)) % R
    plus = (X[:, None] + halves[None, :]) % R
    minus = (X[:, None] - halves[None, :]) % R
    return SBGrid(n, m, M, s, R, X, K), plus, minus


@dataclass(frozen=True, eq=False)
class SBWignerTable:
    grid: SBGrid
    values: np.ndarray  # (len(x_values), K), real

    def total_mass(self) -> float:
        return float(self.values.sum()) * self.grid.cell_mass

    def l1_norm(self) -> float:
        return float(np.abs(self.values).sum()) * self.grid.cell_mass

    def to_json(self) -> dict:
        g = self.grid
        return {
            "base": g.base,
            "m": g.m,
            "M": g.M,
            "x_start": g.x_start,
            "char_order": g.char_order,
            "cell_mass": g.cell_mass,
            "rows": [
                {"x": g.x_point(i).to_json(), "values": [float(v) for v in row]}
                for i, row in enumerate(self.values)
            ],
        }


def sb_wigner(f: SchwartzBruhatFn, tol: float = 1e-9) -> SBWignerTable:
    if f.base % 2 and f.M == f.m:
        # keep at least one x digit on the grid
        f = f.refine(M=f.M + 1)
    n, m, M = f.base, f.m, f.M
    grid, plus, minus = _grid(n, m, M)
    step = n ** (m - grid.x_start)

    def lookup(z: np.ndarray) -> np.ndarray:
        vals = f.coeffs[(z // step) % f.coeffs.size]
        return np.where(z % step == 0, vals, 0)

    u = lookup(plus) * np.conj(lookup(minus))
    w = np.fft.fft(u, axis=1) * (float(n) ** (-m) / grid.char_order)
    scale = max(1.0, float(np.abs(w).max()))
    if np.abs(w.imag).max() > tol * scale:
        raise AssertionError("Wigner table is not real")
    return SBWignerTable(grid, w.real.copy())


def sb_min(f: SchwartzBruhatFn) -> tuple[float, tuple[NAdicNumber, int]]:
    """Global minimum of Wf with a grid point (x, b) attaining it."""
    table = sb_wigner(f)
    i, b = np.unravel_index(int(np.argmin(table.values)), table.values.shape)
    return float(table.values[i, b]), (table.grid.x_point(int(i)), int(b))
