"""Prime fields, small extension fields, and modular combinatorics.

Elements of ``F_{p^k}`` are stored as coefficient tuples in the power basis
of the generator, little-endian. Prime-field elements are length-1 tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import DomainError, UsageError

MAX_PRIME = 97
MAX_DEGREE = 3


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise DomainError("zero has no inverse mod %d" % p)
    return pow(a, -1, p)


def _poly_eval(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


@dataclass(frozen=True)
class Field:
    """``F_p`` (``k == 1``) or ``F_p[x]/(poly)`` with ``poly`` monic of degree k.

    ``poly`` is little-endian and includes the leading 1, so ``x^2 + 1`` is
    ``(1, 0, 1)``. It is empty for prime fields. Irreducibility is checked at
    construction; for ``k <= 3`` a polynomial is irreducible iff it has no
    root in ``F_p``.
    """

    p: int
    k: int = 1
    poly: tuple[int, ...] = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise UsageError("characteristic %r is not prime" % (self.p,))
        if self.p > MAX_PRIME:
            raise UsageError("p=%d exceeds cap %d" % (self.p, MAX_PRIME))
        if not 1 <= self.k <= MAX_DEGREE:
            raise UsageError("extension degree must be in 1..%d" % MAX_DEGREE)
        poly = tuple(int(c) % self.p for c in self.poly)
        object.__setattr__(self, "poly", poly)
        if self.k == 1:
            if poly:
                raise UsageError("prime field takes no defining polynomial")
            return
        if len(poly) != self.k + 1 or poly[-1] != 1:
            raise UsageError("defining polynomial must be monic of degree k")
        if any(_poly_eval(poly, x, self.p) == 0 for x in range(self.p)):
            raise UsageError("defining polynomial %r is reducible" % (poly,))

    @property
    def order(self) -> int:
        return self.p**self.k

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise UsageError("element belongs to a different field")
            return value
        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.k - 1)
        else:
            coeffs = [int(c) % self.p for c in value]
            if len(coeffs) > self.k:
                raise UsageError("too many coefficients for degree %d" % self.k)
            coeffs += [0] * (self.k - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    @property
    def zero(self) -> "FieldElement":
        return self(0)

    @property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def gen(self) -> "FieldElement":
        """The class of ``x`` in ``F_p[x]/(poly)``."""
        if self.k == 1:
            raise UsageError("prime field has no adjoined generator")
        return self((0, 1))

    def elements(self) -> Iterator["FieldElement"]:
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield FieldElement(self, tuple(reversed(coeffs)))

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "poly": list(self.poly)}

    @classmethod
    def from_json(cls, obj: dict) -> "Field":
        return cls(int(obj["p"]), int(obj.get("k", 1)), tuple(obj.get("poly") or ()))


@lru_cache(maxsize=None)
def prime_field(p: int) -> Field:
    return Field(p)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    coeffs: tuple[int, ...]

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise UsageError("mismatched parent fields")
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        p, k = f.p, f.k
        if k == 1:
            return FieldElement(f, ((self.coeffs[0] * other.coeffs[0]) % p,))
        prod = [0] * (2 * k - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        # reduce with x^k = -(poly[0] + ... + poly[k-1] x^{k-1})
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                for i in range(k):
                    prod[d - k + i] -= c * f.poly[i]
            prod[d] = 0
        return FieldElement(f, tuple(c % p for c in prod[:k]))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self) -> "FieldElement":
        if self.is_zero():
            raise DomainError("zero has no inverse")
        if self.field.k == 1:
            return FieldElement(self.field, (inv_mod(self.coeffs[0], self.field.p),))
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __int__(self):
        if self.field.k != 1:
            raise UsageError("only prime-field elements convert to int")
        return self.coeffs[0]

    def __repr__(self):
        if self.field.k == 1:
            return "%d (mod %d)" % (self.coeffs[0], self.field.p)
        return "F%d^%d%r" % (self.field.p, self.field.k, self.coeffs)

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def binom_mod_p(m: int, i: int, p: int) -> int:
    """``C(m, i) mod p`` via Lucas' theorem (digit-wise product)."""
    if i < 0 or m < 0 or i > m:
        return 0
    result = 1
    while m or i:
        md, id_ = m % p, i % p
        if id_ > md:
            return 0
        result = result * _small_binom(md, id_, p) % p
        m //= p
        i //= p
    return result


@lru_cache(maxsize=None)
def _small_binom(m: int, i: int, p: int) -> int:
    return factorial_mod_p(m, p) * inv_factorial_mod_p(i, p) * inv_factorial_mod_p(m - i, p) % p


@lru_cache(maxsize=None)
def factorial_mod_p(m: int, p: int) -> int:
    if not 0 <= m < p:
        raise DomainError("m! is only invertible mod p for 0 <= m < p (got m=%d, p=%d)" % (m, p))
    out = 1
    for j in range(2, m + 1):
        out = out * j % p
    return out


def inv_factorial_mod_p(m: int, p: int) -> int:
    return inv_mod(factorial_mod_p(m, p), p)
