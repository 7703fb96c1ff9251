"""Exact number types for angular-momentum algebra.

``HalfInt`` stores twice its value so that spins like 3/2 are exact integers
internally.  ``SignedSqrtRational`` holds numbers of the form ``sign*sqrt(p/q)``,
which is the closed form of every Clebsch-Gordan coefficient and 6j symbol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Union

__all__ = [
    "HalfInt",
    "SignedSqrtRational",
    "NotClosedError",
    "as_halfint",
    "exact_sum",
    "squarefree_split",
]


class NotClosedError(ArithmeticError):
    """Raised when a sum of square roots is not itself a single square root."""


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """Angular-momentum label ``j = twice / 2``."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int) or isinstance(self.twice, bool):
            raise TypeError(f"HalfInt.twice must be int, got {self.twice!r}")

    @classmethod
    def parse(cls, text: str) -> "HalfInt":
        """Parse ``"3/2"``, ``"-1/2"``, ``"2"`` or ``"1.5"``."""
        text = text.strip()
        try:
            value = Fraction(text)
        except ValueError as exc:
            raise ValueError(f"not a half-integer: {text!r}") from exc
        return cls.from_value(value)

    @classmethod
    def from_value(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        frac = Fraction(value)
        twice = 2 * frac
        if twice.denominator != 1:
            raise ValueError(f"{value!r} is not an integer or half-integer")
        return cls(int(twice))

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __float__(self) -> float:
        return self.twice / 2

    def __int__(self) -> int:
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __add__(self, other):
        return HalfInt(self.twice + as_halfint(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - as_halfint(other).twice)

    def __rsub__(self, other):
        return HalfInt(as_halfint(other).twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __lt__(self, other):
        return self.twice < as_halfint(other).twice

    def __eq__(self, other):
        try:
            return self.twice == as_halfint(other).twice
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __str__(self):
        return str(self.twice // 2) if self.is_integer else f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"

    def projections(self):
        """The projections ``-j, -j+1, ..., j``."""
        return [HalfInt(t) for t in range(-self.twice, self.twice + 1, 2)]


def as_halfint(value) -> HalfInt:
    return HalfInt.from_value(value)


@lru_cache(maxsize=4096)
def _squarefree_int(n: int) -> tuple[int, int]:
    # n = k**2 * f with f squarefree; returns (k, f)
    k, f = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            k *= p ** (e // 2)
            if e % 2:
                f *= p
        p += 1 if p == 2 else 2
    return k, f * n


def squarefree_split(r: Fraction) -> tuple[Fraction, int]:
    """Write ``sqrt(r)`` as ``c * sqrt(f)`` with rational ``c`` and squarefree ``f``."""
    if r < 0:
        raise ValueError("radicand must be non-negative")
    if r == 0:
        return Fraction(0), 1
    # sqrt(p/q) = sqrt(p*q) / q
    k, f = _squarefree_int(r.numerator * r.denominator)
    return Fraction(k, r.denominator), f


@dataclass(frozen=True)
class SignedSqrtRational:
    """The exact number ``sign * sqrt(radicand)``."""

    sign: int
    radicand: Fraction

    def __post_init__(self):
        rad = Fraction(self.radicand)
        object.__setattr__(self, "radicand", rad)
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if rad < 0:
            raise ValueError("radicand must be non-negative")
        if (self.sign == 0) != (rad == 0):
            raise ValueError("sign is 0 exactly when the radicand is 0")

    @classmethod
    def zero(cls) -> "SignedSqrtRational":
        return cls(0, Fraction(0))

    @classmethod
    def from_rational(cls, x) -> "SignedSqrtRational":
        x = Fraction(x)
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, x * x)

    @classmethod
    def from_signed_square(cls, sign: int, square) -> "SignedSqrtRational":
        square = Fraction(square)
        if square == 0 or sign == 0:
            return cls.zero()
        return cls(1 if sign > 0 else -1, square)

    @property
    def numerator(self) -> int:
        return self.radicand.numerator

    @property
    def denominator(self) -> int:
        return self.radicand.denominator

    def is_zero(self) -> bool:
        return self.sign == 0

    def square(self) -> Fraction:
        """The signed square ``sign * radicand``."""
        return self.sign * self.radicand

    def to_rational(self) -> Fraction:
        """Exact rational value; raises when the radicand is not a perfect square."""
        c, f = squarefree_split(self.radicand)
        if f != 1:
            raise NotClosedError(f"{self} is irrational")
        return self.sign * c

    def is_rational(self) -> bool:
        return squarefree_split(self.radicand)[1] == 1

    def __mul__(self, other):
        if isinstance(other, SignedSqrtRational):
            return SignedSqrtRational.from_signed_square(
                self.sign * other.sign, self.radicand * other.radicand)
        if isinstance(other, (int, Fraction)):
            return self * SignedSqrtRational.from_rational(other)
        if isinstance(other, float):
            return float(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SignedSqrtRational.from_rational(other)
        if isinstance(other, SignedSqrtRational):
            if other.sign == 0:
                raise ZeroDivisionError("division by exact zero")
            return SignedSqrtRational.from_signed_square(
                self.sign * other.sign, self.radicand / other.radicand)
        if isinstance(other, float):
            return float(self) / other
        return NotImplemented

    def __neg__(self):
        return SignedSqrtRational.from_signed_square(-self.sign, self.radicand)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SignedSqrtRational.from_rational(other)
        if isinstance(other, SignedSqrtRational):
            return exact_sum([self, other])
        if isinstance(other, float):
            return float(self) + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SignedSqrtRational.from_rational(other)
        if isinstance(other, SignedSqrtRational):
            return exact_sum([self, -other])
        if isinstance(other, float):
            return float(self) - other
        return NotImplemented

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        c, f = squarefree_split(self.radicand)
        return self.sign * float(c) * math.sqrt(f)

    def __bool__(self):
        return self.sign != 0

    def __str__(self):
        if self.sign == 0:
            return "0"
        s = "-" if self.sign < 0 else ""
        return f"{s}sqrt({self.radicand})"

    def as_dict(self) -> dict:
        return {
            "sign": self.sign,
            "numerator": self.numerator,
            "denominator": self.denominator,
            "float": float(self),
        }


def exact_sum(values: Iterable) -> SignedSqrtRational:
    """Sum square roots of rationals exactly.

    Terms are grouped by the squarefree part of their radicand; square roots of
    distinct squarefree integers are linearly independent over the rationals,
    so the sum is a single ``SignedSqrtRational`` only when at most one group
    survives.  Otherwise :class:`NotClosedError` is raised.
    """
    groups: dict[int, Fraction] = {}
    for v in values:
        if isinstance(v, (int, Fraction)):
            v = SignedSqrtRational.from_rational(v)
        if v.sign == 0:
            continue
        c, f = squarefree_split(v.radicand)
        groups[f] = groups.get(f, Fraction(0)) + v.sign * c
    live = {f: c for f, c in groups.items() if c != 0}
    if not live:
        return SignedSqrtRational.zero()
    if len(live) > 1:
        raise NotClosedError(f"sum spans {len(live)} independent square roots")
    (f, c), = live.items()
    return SignedSqrtRational.from_signed_square(1 if c > 0 else -1, c * c * f)


Number = Union[int, Fraction, HalfInt, str]
