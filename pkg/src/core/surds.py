"""
Exact arithmetic in Q(√2): numbers a + b√2 with rational a, b.

Used to check the normalization identities of the Fock-basis eigenstates
without floating-point drift.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Union

SurdLike = Union['Surd', int, Fraction]


@dataclass(frozen=True)
class Surd:
    a: Rational = 0
    b: Rational = 0

    @staticmethod
    def of(value: SurdLike) -> 'Surd':
        if isinstance(value, Surd):
            return value
        return Surd(value, 0)

    def __add__(self, other: SurdLike) -> 'Surd':
        other = Surd.of(other)
        return Surd(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self) -> 'Surd':
        return Surd(-self.a, -self.b)

    def __sub__(self, other: SurdLike) -> 'Surd':
        return self + (-Surd.of(other))

    def __rsub__(self, other: SurdLike) -> 'Surd':
        return Surd.of(other) - self

    def __mul__(self, other: SurdLike) -> 'Surd':
        other = Surd.of(other)
        return Surd(self.a * other.a + 2 * self.b * other.b, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def conjugate(self) -> 'Surd':
        return Surd(self.a, -self.b)

    def norm(self) -> Rational:
        """Field norm a^2 - 2 b^2."""
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> 'Surd':
        norm = self.norm()
        if norm == 0:
            raise ZeroDivisionError('Surd has no inverse')
        if norm in (1, -1):
            return Surd(self.a * norm, -self.b * norm)
        return Surd(Fraction(self.a) / norm, -Fraction(self.b) / norm)

    def __pow__(self, exponent: int) -> 'Surd':
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = Surd(1, 0), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 2**0.5


SILVER = Surd(1, 1)  # 1 + √2


def pell(alpha: int) -> int:
    """
    Pell number F(alpha) with F(0) = 0, F(1) = 1 and F(a) = 2F(a-1) + F(a-2).

    Negative arguments follow the same recurrence backwards (F(-1) = 1, F(-2) = -2).
    """
    if alpha < 0:
        previous, current = 1, 0  # F(1), F(0)
        for _ in range(-alpha):
            previous, current = current, previous - 2 * current
        return current
    previous, current = 1, 0  # F(-1), F(0)
    for _ in range(alpha):
        previous, current = current, 2 * current + previous
    return current


def silver_power(alpha: int) -> Surd:
    """(1 + √2)^alpha from Pell numbers: F(alpha-1) + F(alpha) + F(alpha)√2."""
    return Surd(pell(alpha - 1) + pell(alpha), pell(alpha))


def silver_weighted_sum(m: int, sign: int = 1) -> Surd:
    """sum_w C(m, w) (1 + √2)^(2 w sign), computed exactly."""
    total = Surd(0, 0)
    for w in range(m + 1):
        total = total + comb(m, w) * silver_power(2 * w * sign)
    return total
