"""Exact scalars: rationals (``fractions.Fraction``) and single-radicand
quadratic irrationalities ``base + coeff*sqrt(radicand)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

Rational = Fraction


class MixedRadicandError(ValueError):
    pass


def normalize(num: int, den: int = 1) -> Fraction:
    """Canonical reduced rational with positive denominator."""
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    return Fraction(num, den)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return normalize(int(num), int(den))
        return Fraction(int(text))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _rational_sqrt(r: Fraction) -> Fraction | None:
    if r < 0:
        return None
    n, d = r.numerator, r.denominator
    sn, sd = isqrt(n), isqrt(d)
    if sn * sn == n and sd * sd == d:
        return Fraction(sn, sd)
    return None


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** k == n else None


def rational_root(r: Fraction, degree: int) -> Fraction | None:
    """A rational ``degree``-th root of ``r`` if one exists (non-negative
    for even degree)."""
    r = as_rational(r)
    if degree == 1:
        return r
    if r < 0:
        if degree % 2 == 0:
            return None
        root = rational_root(-r, degree)
        return None if root is None else -root
    num, den = _iroot(r.numerator, degree), _iroot(r.denominator, degree)
    if num is None or den is None:
        return None
    return Fraction(num, den)


@dataclass(frozen=True)
class RadicalScalar:
    """``base + coeff * sqrt(radicand)`` with a single fixed radicand.

    Arithmetic with plain rationals is allowed; combining two values with
    different (nontrivial) radicands raises :class:`MixedRadicandError`.
    """

    base: Fraction
    coeff: Fraction
    radicand: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", as_rational(self.base))
        object.__setattr__(self, "coeff", as_rational(self.coeff))
        object.__setattr__(self, "radicand", as_rational(self.radicand))
        if self.coeff != 0:
            root = _rational_sqrt(self.radicand)
            if root is not None:
                raise ValueError(
                    f"radicand {self.radicand} is a rational square; use a Fraction")

    @property
    def is_rational(self) -> bool:
        return self.coeff == 0

    def to_rational(self) -> Fraction:
        if self.coeff != 0:
            raise ValueError(f"{self} is irrational")
        return self.base

    def _common(self, other) -> tuple[Fraction, Fraction, Fraction, Fraction, Fraction]:
        if isinstance(other, RadicalScalar):
            if self.coeff == 0:
                rad = other.radicand
            elif other.coeff == 0 or other.radicand == self.radicand:
                rad = self.radicand
            else:
                raise MixedRadicandError(
                    f"cannot combine sqrt({self.radicand}) with sqrt({other.radicand})")
            return self.base, self.coeff, other.base, other.coeff, rad
        q = as_rational(other)
        return self.base, self.coeff, q, Fraction(0), self.radicand

    @staticmethod
    def _make(base, coeff, rad) -> "RadicalScalar":
        if coeff == 0:
            return RadicalScalar(base, 0, 0)
        return RadicalScalar(base, coeff, rad)

    def __add__(self, other):
        b1, c1, b2, c2, r = self._common(other)
        return self._make(b1 + b2, c1 + c2, r)

    __radd__ = __add__

    def __neg__(self):
        return self._make(-self.base, -self.coeff, self.radicand)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b1, c1, b2, c2, r = self._common(other)
        return self._make(b1 * b2 + c1 * c2 * r, b1 * c2 + b2 * c1, r)

    __rmul__ = __mul__

    def inverse(self) -> "RadicalScalar":
        norm = self.base * self.base - self.coeff * self.coeff * self.radicand
        if norm == 0:
            raise ZeroDivisionError("division by zero radical scalar")
        return self._make(self.base / norm, -self.coeff / norm, self.radicand)

    def __truediv__(self, other):
        if not isinstance(other, RadicalScalar):
            other = RadicalScalar(as_rational(other), 0, 0)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        out = RadicalScalar(1, 0, 0)
        for _ in range(abs(exponent)):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, RadicalScalar):
            if self.coeff == 0 and other.coeff == 0:
                return self.base == other.base
            return (self.base, self.coeff, self.radicand) == (
                other.base, other.coeff, other.radicand)
        if isinstance(other, (int, Fraction)):
            return self.coeff == 0 and self.base == other
        return NotImplemented

    def __hash__(self):
        if self.coeff == 0:
            return hash(self.base)
        return hash((self.base, self.coeff, self.radicand))

    def __bool__(self):
        return self.base != 0 or self.coeff != 0

    def __str__(self):
        if self.coeff == 0:
            return format_rational(self.base)
        return (f"{format_rational(self.base)}+{format_rational(self.coeff)}"
                f"*sqrt({format_rational(self.radicand)})")


Scalar = Union[Fraction, RadicalScalar]


def try_square_root(r) -> Scalar:
    """The non-negative rational square root of ``r`` when it exists,
    otherwise the formal value ``sqrt(r)``."""
    r = as_rational(r)
    root = _rational_sqrt(r)
    if root is not None:
        return root
    return RadicalScalar(0, 1, r)


def simplify(value: Scalar) -> Scalar:
    if isinstance(value, RadicalScalar) and value.coeff == 0:
        return value.base
    return value


def scalar_to_json(value: Scalar):
    value = simplify(value)
    if isinstance(value, RadicalScalar):
        return {
            "base": format_rational(value.base),
            "coeff": format_rational(value.coeff),
            "radicand": format_rational(value.radicand),
        }
    return format_rational(value)


def scalar_from_json(data) -> Scalar:
    if isinstance(data, dict):
        return simplify(RadicalScalar(data["base"], data["coeff"], data["radicand"]))
    return as_rational(data)
