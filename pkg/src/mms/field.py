"""Prime field arithmetic.

Elements are plain ints in ``range(p)``; :class:`FieldElement` wraps one
together with its field for callers that want operator syntax.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering

MAX_PRIME = 251


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """GF(p) for a prime ``2 <= p <= 251``.

    The total order on elements is the order of their representatives,
    so 0 < 1 < 2 < ... < p - 1. It is not compatible with + or *.
    """

    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or p < 2 or p > MAX_PRIME:
            raise FieldError(f"field {p} out of range (need 2 <= p <= {MAX_PRIME})")
        if not is_prime(p):
            raise FieldError(f"field {p} not prime")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, value % self.p)

    def elements(self):
        return range(self.p)

    def reduce(self, x: int) -> int:
        return x % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return pow(a, -1, self.p)

    def cmp(self, a: int, b: int) -> int:
        return (a > b) - (a < b)

    def __str__(self):
        return f"GF({self.p})"


def field_make(p: int) -> Field:
    return Field(p)


@total_ordering
@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise FieldError(f"{self.value} is not a reduced element of {self.field}")

    def _check(self, other: "FieldElement") -> None:
        if other.field != self.field:
            raise FieldError(f"mixing {self.field} and {other.field}")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.value, other.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __lt__(self, other):
        self._check(other)
        return self.value < other.value

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"
