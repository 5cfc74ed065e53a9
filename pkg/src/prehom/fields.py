"""Exact scalar fields: the rationals and prime fields F_p.

Elements are plain Python values so that they hash and compare cheaply:
``Fraction`` for the rationals and ``int`` in ``range(p)`` for F_p.  All
arithmetic goes through the owning :class:`Field` object.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from .errors import NonPrimeField


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface of :data:`QQ` and :func:`GF`."""

    name: str
    characteristic: int

    def __call__(self, value):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        raise NotImplementedError

    def random_element(self, rng: random.Random, bound: int = 100):
        raise NotImplementedError

    def random_nonzero(self, rng: random.Random, bound: int = 100):
        while True:
            a = self.random_element(rng, bound)
            if not self.is_zero(a):
                return a

    def __repr__(self) -> str:
        return self.name


class RationalField(Field):
    name = "QQ"
    characteristic = 0

    def __call__(self, value) -> Fraction:
        if isinstance(value, str):
            return self.parse(value)
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def parse(self, text: str) -> Fraction:
        return Fraction(text.strip())

    def random_element(self, rng, bound=100):
        # Coefficients are integers in [-bound, bound].
        return Fraction(rng.randint(-bound, bound))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField(Field):
    characteristic: int

    def __init__(self, p: int):
        if not is_prime(p):
            raise NonPrimeField(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, value) -> int:
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def parse(self, text: str) -> int:
        return self(Fraction(text.strip()))

    def random_element(self, rng, bound=100):
        return rng.randrange(self.p)

    def elements(self) -> range:
        return range(self.p)

    def primitive_root(self) -> int:
        return _primitive_root(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


@lru_cache(maxsize=None)
def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    order = p - 1
    factors = {f for f in range(2, order + 1) if order % f == 0 and is_prime(f)}
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in factors):
            return g
    raise AssertionError("unreachable for prime p")


def field_from_name(name: str) -> Field:
    """Parse ``"QQ"``, ``"GF(p)"`` or a bare prime ``"p"``."""
    text = name.strip()
    if text.upper() in ("QQ", "Q", "RATIONALS"):
        return QQ
    if text.upper().startswith("GF(") and text.endswith(")"):
        text = text[3:-1]
    try:
        p = int(text)
    except ValueError:
        raise NonPrimeField(f"unknown field {name!r}") from None
    return GF(p)
