"""Coefficient fields: Z_p for primes p < 2^31, and the rationals."""

from __future__ import annotations

from fractions import Fraction

from .linalg.primes import is_prime

MAX_CHAR = 2**31


class FieldError(ValueError):
    pass


class PrimeField:
    """Residues mod ``p`` stored as ints in ``[0, p)``."""

    def __init__(self, p: int):
        if not (2 <= p < MAX_CHAR) or not is_prime(p):
            raise FieldError(f"characteristic must be a prime < 2^31, got {p}")
        self.p = p
        self.characteristic = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Zp", self.p))

    zero = 0
    one = 1

    def __call__(self, value) -> int:
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise FieldError(f"denominator of {value} vanishes mod {self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def signed(self, a) -> int:
        """Symmetric representative in (-p/2, p/2], used for printing."""
        return a - self.p if a > self.p // 2 else a


class RationalField:
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        return 1 / Fraction(a)

    @staticmethod
    def div(a, b):
        return Fraction(a) / b

    @staticmethod
    def signed(a):
        return a


def make_field(characteristic: int):
    if characteristic == 0:
        return RationalField()
    return PrimeField(characteristic)
