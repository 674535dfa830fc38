"""Exact scalar arithmetic over odd prime fields and over the rationals.

Every scalar carries its field; mixing fields raises instead of coercing.
Prime moduli are capped because enumeration modules scale with powers of p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldMismatchError

MODULUS_CAP = 997


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """Integers modulo an odd prime p, canonical residues in [0, p)."""

    kind = "prime-field"
    finite = True

    __slots__ = ("p",)

    def __init__(self, p, cap=MODULUS_CAP):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"modulus must be a prime integer, got {p!r}")
        if p == 2:
            raise ValueError("characteristic 2 is excluded; modulus must be odd")
        if p > cap:
            raise ValueError(f"modulus {p} exceeds the configured cap {cap}")
        self.p = p

    def scalar(self, value):
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatchError(f"scalar from {value.field} used in {self}")
            return value
        if isinstance(value, Fraction):
            num = self.scalar(value.numerator)
            return num / self.scalar(value.denominator)
        return Scalar(self, value % self.p)

    @property
    def zero(self):
        return Scalar(self, 0)

    @property
    def one(self):
        return Scalar(self, 1)

    @property
    def unit_count(self):
        return self.p - 1

    def elements(self):
        return [Scalar(self, v) for v in range(self.p)]

    def units(self):
        return [Scalar(self, v) for v in range(1, self.p)]

    def invert(self, value):
        if value == 0:
            raise ZeroDivisionError("division by zero")
        return pow(value, self.p - 2, self.p)

    def is_square_value(self, value):
        return pow(value, (self.p - 1) // 2, self.p) == 1

    def square_class_count(self):
        # K*/(K*)^2 has order 2 for every odd prime field.
        return 2

    def primitive_root(self):
        order = self.p - 1
        factors = _prime_factors(order)
        for g in range(2, self.p):
            if all(pow(g, order // q, self.p) != 1 for q in factors):
                return g
        raise RuntimeError("no primitive root found")  # unreachable for prime p

    def random_scalar(self, rng):
        return Scalar(self, rng.randrange(self.p))

    def random_unit(self, rng):
        return Scalar(self, rng.randrange(1, self.p))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"F{self.p}"


class Rationals:
    """The field of rational numbers, values held as reduced fractions."""

    kind = "rationals"
    finite = False

    __slots__ = ()

    def scalar(self, value):
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatchError(f"scalar from {value.field} used in {self}")
            return value
        return Scalar(self, Fraction(value))

    @property
    def zero(self):
        return Scalar(self, Fraction(0))

    @property
    def one(self):
        return Scalar(self, Fraction(1))

    @property
    def unit_count(self):
        return math.inf

    def invert(self, value):
        if value == 0:
            raise ZeroDivisionError("division by zero")
        return 1 / Fraction(value)

    def is_square_value(self, value):
        if value <= 0:
            return False
        num, den = value.numerator, value.denominator
        return math.isqrt(num) ** 2 == num and math.isqrt(den) ** 2 == den

    def square_class_count(self):
        return math.inf

    def random_scalar(self, rng):
        return Scalar(self, Fraction(rng.randint(-6, 6), rng.randint(1, 6)))

    def random_unit(self, rng):
        num = rng.choice([n for n in range(-6, 7) if n != 0])
        return Scalar(self, Fraction(num, rng.randint(1, 6)))

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class Scalar:
    """Immutable field element in canonical form."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def _check(self, other):
        if not isinstance(other, Scalar):
            raise TypeError(f"expected Scalar, got {other!r}")
        if other.field != self.field:
            raise FieldMismatchError(f"mixed fields {self.field} and {other.field}")

    def __add__(self, other):
        self._check(other)
        v = self.value + other.value
        if self.field.finite:
            v %= self.field.p
        return Scalar(self.field, v)

    def __sub__(self, other):
        self._check(other)
        v = self.value - other.value
        if self.field.finite:
            v %= self.field.p
        return Scalar(self.field, v)

    def __mul__(self, other):
        self._check(other)
        v = self.value * other.value
        if self.field.finite:
            v %= self.field.p
        return Scalar(self.field, v)

    def __truediv__(self, other):
        self._check(other)
        v = self.value * self.field.invert(other.value)
        if self.field.finite:
            v %= self.field.p
        return Scalar(self.field, v)

    def __neg__(self):
        v = -self.value
        if self.field.finite:
            v %= self.field.p
        return Scalar(self.field, v)

    def inverse(self):
        return Scalar(self.field, self.field.invert(self.value))

    @property
    def is_zero(self):
        return self.value == 0

    @property
    def is_one(self):
        return self.value == 1

    def is_square(self):
        if self.is_zero:
            raise ValueError("zero has no square class")
        return self.field.is_square_value(self.value)

    def __eq__(self, other):
        return (
            isinstance(other, Scalar)
            and other.field == self.field
            and other.value == self.value
        )

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return str(self.value)


@dataclass(frozen=True)
class SquareClassGroup:
    """K*/(K*)^2: order 2 with representatives for odd prime fields,
    infinite without representatives for the rationals."""

    field: object
    count: object
    representatives: tuple


def square_class_count(field):
    return field.square_class_count()


def square_class_group(field):
    if not field.finite:
        return SquareClassGroup(field, math.inf, None)
    nonsquare = next(u for u in field.units() if not u.is_square())
    return SquareClassGroup(field, 2, (field.one, nonsquare))


def field_from_spec(text):
    """Parse a CLI field spec: an odd prime such as "3", or "Q"."""
    text = text.strip()
    if text.upper() == "Q":
        return Rationals()
    try:
        p = int(text)
    except ValueError:
        raise ValueError(f"field must be an odd prime or Q, got {text!r}") from None
    return PrimeField(p)


def parse_literal(text):
    """Parse a scalar literal ("7", "-2", "3/4") into a Fraction."""
    return Fraction(text)


def bind_literal(field, fraction):
    """Interpret a rational literal in the given field."""
    if field.finite and fraction.denominator % field.p == 0:
        raise ZeroDivisionError(
            f"denominator {fraction.denominator} vanishes in {field}"
        )
    return field.scalar(fraction)


def _prime_factors(n):
    factors = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors.add(d)
            n //= d
        d += 1
    if n > 1:
        factors.add(n)
    return factors
