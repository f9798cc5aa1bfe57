"""Finite-precision n-adic numbers and the n-adic solenoid.

An ``NAdicNumber`` carries the digits x_m, ..., x_{M-1} of sum_k x_k n^k and
is meaningful modulo n^M.  All arithmetic works on the window intersection.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import GroupMismatch, LCAError, NotTwoRegular


@dataclass(frozen=True)
class NAdicNumber:
    base: int
    start: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise LCAError(f"base must be >= 2, got {self.base}")
        if len(self.digits) == 0:
            raise LCAError("an n-adic number needs at least one known digit")
        object.__setattr__(self, "digits", tuple(int(d) % self.base for d in self.digits))

    @property
    def precision_end(self) -> int:
        return self.start + len(self.digits)

    @property
    def scaled_value(self) -> int:
        """Integer V with value = V * n^start (mod n^precision_end)."""
        return sum(d * self.base**i for i, d in enumerate(self.digits))

    def digit(self, k: int) -> int:
        if k < self.start:
            return 0
        if k >= self.precision_end:
            raise LCAError(f"digit {k} is beyond the precision window")
        return self.digits[k - self.start]

    @classmethod
    def from_int(cls, base: int, value: int, start: int, end: int) -> "NAdicNumber":
        """The element value * n^start, known up to digit end - 1."""
        if end <= start:
            raise LCAError("empty precision window")
        v = value % base ** (end - start)
        digits = []
        for _ in range(end - start):
            v, d = divmod(v, base)
            digits.append(d)
        return cls(base, start, tuple(digits))

    def reframe(self, start: int, end: int) -> "NAdicNumber":
        """Same value on the window [start, end); start may only go down."""
        if start > self.start and any(self.digits[: start - self.start]):
            raise LCAError("cannot drop nonzero low digits")
        if end > self.precision_end:
            raise LCAError("cannot extend precision")
        shift = self.start - start
        v = self.scaled_value * self.base**shift if shift >= 0 else self.scaled_value // self.base ** (-shift)
        return NAdicNumber.from_int(self.base, v, start, end)

    def to_json(self) -> dict:
        return {"base": self.base, "start": self.start, "digits": list(self.digits)}

    @classmethod
    def from_json(cls, obj: dict) -> "NAdicNumber":
        return cls(int(obj["base"]), int(obj["start"]), tuple(int(d) for d in obj["digits"]))

    def __repr__(self):
        return f"NAdicNumber(base={self.base}, start={self.start}, digits={list(self.digits)})"


def _common(x: NAdicNumber, y: NAdicNumber) -> tuple[int, int]:
    if x.base != y.base:
        raise GroupMismatch(f"base mismatch: {x.base} vs {y.base}")
    s, e = min(x.start, y.start), min(x.precision_end, y.precision_end)
    if e <= s:
        raise LCAError("precision windows do not overlap")
    return s, e


def _shifted(x: NAdicNumber, s: int) -> int:
    return x.scaled_value * x.base ** (x.start - s)


def nadic_add(x: NAdicNumber, y: NAdicNumber) -> NAdicNumber:
    s, e = _common(x, y)
    return NAdicNumber.from_int(x.base, _shifted(x, s) + _shifted(y, s), s, e)


def nadic_sub(x: NAdicNumber, y: NAdicNumber) -> NAdicNumber:
    s, e = _common(x, y)
    return NAdicNumber.from_int(x.base, _shifted(x, s) - _shifted(y, s), s, e)


def nadic_neg(x: NAdicNumber) -> NAdicNumber:
    return NAdicNumber.from_int(x.base, -x.scaled_value, x.start, x.precision_end)


def nadic_double(x: NAdicNumber) -> NAdicNumber:
    return NAdicNumber.from_int(x.base, 2 * x.scaled_value, x.start, x.precision_end)


def nadic_congruent(x: NAdicNumber, y: NAdicNumber, upto: int | None = None) -> bool:
    """x == y modulo n^upto (default: the smaller precision end)."""
    s, e = _common(x, y)
    e = e if upto is None else min(e, upto)
    if e <= s:
        return True
    return (_shifted(x, s) - _shifted(y, s)) % x.base ** (e - s) == 0


def nadic_halve(y: NAdicNumber) -> NAdicNumber:
    """The unique x with 2x = y, computed digit by digit.

    Odd n: x_k solves 2 x_k = (current digit) mod n and the overflow is
    carried into the next digit; the window is unchanged.  Even n: one digit
    is added below (x_{m-1} in {0, n/2} absorbs the parity of y_m) and the
    top digit is lost, since x_k depends on the parity of y_{k+1}.
    """
    n, m, ys = y.base, y.start, y.digits
    if n % 2:
        inv2 = (n + 1) // 2
        xs, cur = [], ys[0]
        for k in range(len(ys)):
            xk = (cur * inv2) % n
            xs.append(xk)
            if k + 1 < len(ys):
                cur = ys[k + 1] - (2 * xk - cur) // n
        return NAdicNumber(n, m, tuple(xs))
    half = n // 2
    if len(ys) == 1:
        return NAdicNumber(n, m - 1, (half * (ys[0] % 2),))
    xs = [half if ys[0] % 2 else 0]
    cur = ys[0] - ys[0] % 2
    for k in range(len(ys) - 1):
        a = ys[k + 1] % 2
        xs.append(cur // 2 + a * half)
        cur = ys[k + 1] - a
    return NAdicNumber(n, m - 1, tuple(xs))


def doubling_constant(n: int, M: int = 3) -> Fraction:
    """|2 Delta_n| / |Delta_n|, read off the image of doubling on Z_{n^M}.

    Checked to agree at precision M and M + 1.
    """
    if n < 2 or M < 1:
        raise LCAError("need n >= 2 and M >= 1")

    def density(level: int) -> Fraction:
        q = n**level
        return Fraction(np.unique((2 * np.arange(q, dtype=np.int64)) % q).size, q)

    d = density(M)
    if density(M + 1) != d:
        raise AssertionError(f"doubling density not stable at M={M}")
    return d


def random_nadic(n: int, rng: np.random.Generator, start: int = 0, length: int = 8) -> NAdicNumber:
    return NAdicNumber(n, start, tuple(int(d) for d in rng.integers(0, n, size=length)))


# -- solenoid ---------------------------------------------------------------------

@dataclass(frozen=True)
class SolenoidPoint:
    """(a, x) in [0, 1) x Delta_n, with a exact."""

    base: int
    a: Fraction
    x: NAdicNumber

    def __post_init__(self):
        a = Fraction(self.a)
        if not 0 <= a < 1:
            raise LCAError(f"solenoid coordinate a={a} is not in [0, 1)")
        if self.x.base != self.base:
            raise GroupMismatch("base mismatch")
        if self.x.start < 0:
            raise LCAError("the n-adic coordinate must lie in Delta_n")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "x", self.x.reframe(0, self.x.precision_end))

    def to_json(self) -> dict:
        return {"base": self.base, "a": str(self.a), "x": self.x.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "SolenoidPoint":
        return cls(int(obj["base"]), Fraction(obj["a"]), NAdicNumber.from_json(obj["x"]))


def _unit(n: int, end: int) -> NAdicNumber:
    return NAdicNumber.from_int(n, 1, 0, end)


def _wrap(n: int, s: Fraction, x: NAdicNumber) -> SolenoidPoint:
    k = s.numerator // s.denominator
    return SolenoidPoint(n, s - k, NAdicNumber.from_int(n, x.scaled_value - k, 0, x.precision_end))


def solenoid_add(p: SolenoidPoint, q: SolenoidPoint) -> SolenoidPoint:
    if p.base != q.base:
        raise GroupMismatch(f"base mismatch: {p.base} vs {q.base}")
    return _wrap(p.base, p.a + q.a, nadic_add(p.x, q.x))


def solenoid_double(p: SolenoidPoint) -> SolenoidPoint:
    return solenoid_add(p, p)


def solenoid_equal(p: SolenoidPoint, q: SolenoidPoint) -> bool:
    return p.base == q.base and p.a == q.a and nadic_congruent(p.x, q.x)


def solenoid_halve(q: SolenoidPoint) -> SolenoidPoint:
    """The unique p with 2p = q; the n-adic part loses its top digit."""
    n = q.base
    if n % 2:
        raise NotTwoRegular(f"the solenoid with n={n} odd is not 2-regular")
    y = q.x
    if y.digit(0) % 2 == 0:
        a, y2 = q.a / 2, y
    else:
        a, y2 = (q.a + 1) / 2, nadic_add(y, _unit(n, y.precision_end))
    x = nadic_halve(y2)
    if x.digit(-1):
        raise AssertionError("halving left a fractional digit")
    return SolenoidPoint(n, a, x.reframe(0, x.precision_end))


def solenoid_doubling_kernel(n: int, precision: int = 8) -> SolenoidPoint:
    """A nonzero point of order 2 on the solenoid for odd n: (1/2, u/2)."""
    if n % 2 == 0:
        raise LCAError(f"doubling is injective on the solenoid for even n={n}")
    return SolenoidPoint(n, Fraction(1, 2), nadic_halve(_unit(n, precision)))


def random_solenoid(n: int, rng: np.random.Generator, length: int = 8, denominator: int = 64) -> SolenoidPoint:
    a = Fraction(int(rng.integers(0, denominator)), denominator)
    return SolenoidPoint(n, a, random_nadic(n, rng, 0, length))

