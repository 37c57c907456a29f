"""Exact coefficient arithmetic for the supported semirings.

Values are plain Python ints (``0``/``1`` for the boolean semiring, residues
in ``[0, n)`` for ``Z/n``).  The rational field used by the q-root
denominator check is exposed as :data:`QQ`; it is deliberately not a
:class:`SemiringSpec`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInvertible, ParseError, UsageError

NATURALS = "N"
BOOLEAN = "B"
INTEGERS = "Z"
INTEGERS_MOD = "Z/n"


class SemiringClass(enum.Enum):
    BOOLEAN_IDEMPOTENT = "BooleanIdempotent"
    NON_RING = "NonRing"
    RING_CHAR_0 = "RingChar0"
    RING_CHAR_PRIME = "RingCharPrime"
    RING_CHAR_COMPOSITE = "RingCharComposite"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class SemiringSpec:
    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == INTEGERS_MOD:
            if self.modulus is None or self.modulus < 2:
                raise UsageError("Z/n requires n >= 2")
        elif self.kind in (NATURALS, BOOLEAN, INTEGERS):
            if self.modulus is not None:
                raise UsageError(f"semiring {self.kind} takes no modulus")
        else:
            raise UsageError(f"unknown semiring kind {self.kind!r}")

    @classmethod
    def naturals(cls):
        return cls(NATURALS)

    @classmethod
    def boolean(cls):
        return cls(BOOLEAN)

    @classmethod
    def integers(cls):
        return cls(INTEGERS)

    @classmethod
    def mod(cls, n: int):
        return cls(INTEGERS_MOD, n)

    def __str__(self):
        if self.kind == INTEGERS_MOD:
            return f"Z/{self.modulus}"
        return self.kind

    # -- structure ---------------------------------------------------------
    @property
    def is_ring(self) -> bool:
        return self.kind in (INTEGERS, INTEGERS_MOD)

    @property
    def characteristic(self) -> int:
        if self.kind == INTEGERS_MOD:
            return self.modulus
        return 0

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    # -- arithmetic --------------------------------------------------------
    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under the canonical map (``n * 1_K``)."""
        if self.kind == BOOLEAN:
            if n < 0:
                raise UsageError("negative multiple in the boolean semiring")
            return 1 if n > 0 else 0
        if self.kind == NATURALS:
            if n < 0:
                raise UsageError("negative multiple in N")
            return n
        if self.kind == INTEGERS:
            return n
        return n % self.modulus

    def normalize(self, x) -> int:
        if isinstance(x, bool):
            x = int(x)
        if not isinstance(x, int):
            raise UsageError(f"{x!r} is not a value of {self}")
        return self.from_int(x)

    def add(self, x: int, y: int) -> int:
        if self.kind == BOOLEAN:
            return x | y
        if self.kind == INTEGERS_MOD:
            return (x + y) % self.modulus
        return x + y

    def mul(self, x: int, y: int) -> int:
        if self.kind == BOOLEAN:
            return x & y
        if self.kind == INTEGERS_MOD:
            return (x * y) % self.modulus
        return x * y

    def neg(self, x: int) -> int:
        if self.kind == INTEGERS:
            return -x
        if self.kind == INTEGERS_MOD:
            return (-x) % self.modulus
        if x == 0:
            return 0
        raise UsageError(f"no additive inverses in {self}")

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def pow(self, x: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = self.mul(r, x)
        return r

    def is_zero(self, x: int) -> bool:
        return x == 0

    def inverse(self, x: int) -> int:
        if self.kind == INTEGERS_MOD:
            try:
                return pow(x, -1, self.modulus)
            except ValueError:
                raise NotInvertible(f"{x} is not a unit of {self}") from None
        if x == 1 or (self.kind == INTEGERS and x == -1):
            return x
        raise NotInvertible(f"{x} is not a unit of {self}")

    def format(self, x: int) -> str:
        return str(x)


class RationalField:
    """Exact rationals; used only for the Z[1/q] check on q-th roots."""

    kind = "Q"
    is_ring = True
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "QQ"

    __str__ = __repr__

    def from_int(self, n):
        return Fraction(n)

    def normalize(self, x):
        return Fraction(x)

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def sub(self, x, y):
        return x - y

    def pow(self, x, e):
        return x**e

    def is_zero(self, x):
        return x == 0

    def inverse(self, x):
        if x == 0:
            raise NotInvertible("0 has no inverse")
        return 1 / Fraction(x)

    def format(self, x):
        return str(x)


QQ = RationalField()


def classify_semiring(spec: SemiringSpec) -> tuple[SemiringClass, int]:
    """Class of the subsemiring generated by ``1_K``, plus its characteristic."""
    if spec.kind == BOOLEAN:
        return SemiringClass.BOOLEAN_IDEMPOTENT, 0
    if spec.kind == NATURALS:
        return SemiringClass.NON_RING, 0
    if spec.kind == INTEGERS:
        return SemiringClass.RING_CHAR_0, 0
    n = spec.modulus
    if is_prime(n):
        return SemiringClass.RING_CHAR_PRIME, n
    return SemiringClass.RING_CHAR_COMPOSITE, n


def parse_semiring(text: str) -> SemiringSpec:
    t = text.strip()
    if t in (NATURALS, BOOLEAN, INTEGERS):
        return SemiringSpec(t)
    if t.startswith("Z/"):
        try:
            n = int(t[2:])
        except ValueError:
            raise ParseError(f"bad modulus in semiring {text!r}") from None
        if n < 2:
            raise ParseError(f"Z/n requires n >= 2, got {text!r}")
        return SemiringSpec(INTEGERS_MOD, n)
    raise ParseError(f"unknown semiring {text!r} (expected N, B, Z or Z/n)")
