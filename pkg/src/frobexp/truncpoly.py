"""Truncated polynomial rings ``F_p[t]/(t^N)`` and ``F_p[s,t]/(s^N, t^N)``, ``N = p^r``.

``PolyMatrix`` is an ``n x n`` matrix over ``F_p[t]/(t^N)`` stored as its
coefficient matrices ``A_0, ..., A_{N-1}`` (an array of shape ``(N, n, n)``).
This is the concrete form of a scheme map ``G_{a(r)} -> GL_n``: the
homomorphism law is the two-variable identity ``phi(s + t) = phi(s) phi(t)``.

Two-variable objects are dense grids indexed ``[s_degree, t_degree]``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import CapacityError, UsageError
from .fields import Field, FieldElement, binom_mod_p, prime_field
from .matrices import SquareMatrix

# 7**3; (5, 3) is needed for the bijection checks
MAX_LENGTH = 343


def ring_length(p: int, r: int) -> int:
    if r < 1:
        raise UsageError("height r must be >= 1")
    n = p**r
    if n > MAX_LENGTH:
        raise CapacityError("p^r = %d exceeds MAX_LENGTH = %d" % (n, MAX_LENGTH))
    return n


@lru_cache(maxsize=None)
def binomial_grid(p: int, length: int) -> np.ndarray:
    """``G[a, b] = C(a+b, a) mod p`` for ``a + b < length``, else 0."""
    g = np.zeros((length, length), dtype=np.int64)
    for a in range(length):
        for b in range(length - a):
            g[a, b] = binom_mod_p(a + b, a, p)
    g.setflags(write=False)
    return g


def _scalar(c, p: int) -> int:
    if isinstance(c, FieldElement):
        if c.field.k != 1 or c.field.p != p:
            raise UsageError("scalar from a different field")
        return c.coeffs[0]
    return int(c) % p


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _expand_sum(coeffs: np.ndarray, p: int) -> np.ndarray:
    """Grid of ``f(s + t)`` for coefficient array ``coeffs`` (leading axis = degree)."""
    length = coeffs.shape[0]
    binom = binomial_grid(p, length)
    idx = np.add.outer(np.arange(length), np.arange(length))
    padded = np.concatenate([coeffs, np.zeros_like(coeffs)], axis=0)
    extra = (None,) * (coeffs.ndim - 1)
    return binom[(...,) + extra] * padded[idx] % p


class TruncPoly:
    __slots__ = ("p", "r", "coeffs")

    def __init__(self, p: int, r: int, coeffs: Sequence[int] = ()):
        length = ring_length(p, r)
        c = np.zeros(length, dtype=np.int64)
        vals = np.array(coeffs, dtype=np.int64).ravel()
        if len(vals) > length:
            if np.any(vals[length:] % p):
                raise UsageError("coefficients beyond degree p^r - 1 must be zero")
            vals = vals[:length]
        c[: len(vals)] = vals
        self.p, self.r = p, r
        self.coeffs = _frozen(c % p)

    @classmethod
    def _wrap(cls, p, r, c):
        obj = object.__new__(cls)
        obj.p, obj.r, obj.coeffs = p, r, _frozen(c % p)
        return obj

    @classmethod
    def monomial(cls, p: int, r: int, m: int, c=1) -> "TruncPoly":
        length = ring_length(p, r)
        out = np.zeros(length, dtype=np.int64)
        if m < length:
            out[m] = _scalar(c, p)
        return cls._wrap(p, r, out)

    @property
    def length(self) -> int:
        return len(self.coeffs)

    @property
    def field(self) -> Field:
        return prime_field(self.p)

    def _check(self, other):
        if not isinstance(other, TruncPoly) or (other.p, other.r) != (self.p, self.r):
            raise UsageError("truncated polynomials with different (p, r)")

    def __add__(self, other):
        self._check(other)
        return TruncPoly._wrap(self.p, self.r, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return TruncPoly._wrap(self.p, self.r, self.coeffs - other.coeffs)

    def __neg__(self):
        return TruncPoly._wrap(self.p, self.r, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TruncPoly):
            self._check(other)
            full = np.convolve(self.coeffs, other.coeffs)[: self.length]
            return TruncPoly._wrap(self.p, self.r, full)
        return TruncPoly._wrap(self.p, self.r, self.coeffs * _scalar(other, self.p))

    def __rmul__(self, c):
        return self * c

    def __pow__(self, e: int):
        out = TruncPoly.monomial(self.p, self.r, 0)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return (self.p, self.r) == (other.p, other.r) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.r, self.coeffs.tobytes()))

    def __repr__(self):
        terms = ["%d*t^%d" % (c, m) for m, c in enumerate(self.coeffs.tolist()) if c]
        return "TruncPoly(p=%d, r=%d, %s)" % (self.p, self.r, " + ".join(terms) or "0")

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def coeff(self, m: int) -> int:
        return int(self.coeffs[m]) if 0 <= m < self.length else 0

    def subst_sum(self) -> "TruncPoly2":
        """``a(s + t)`` in the two-variable ring."""
        return TruncPoly2(self.p, self.r, _expand_sum(self.coeffs, self.p))

    def tensor(self, other: "TruncPoly") -> "TruncPoly2":
        """``a(s) * b(t)``, i.e. ``a (x) b``."""
        self._check(other)
        return TruncPoly2(self.p, self.r, np.outer(self.coeffs, other.coeffs))

    def is_primitive(self) -> bool:
        one = TruncPoly.monomial(self.p, self.r, 0)
        return self.subst_sum() == self.tensor(one) + one.tensor(self)

    def frobenius_twist(self, i: int) -> "TruncPoly":
        """``a(t^(p^i))``, truncated."""
        step = self.p**i
        out = np.zeros(self.length, dtype=np.int64)
        src = np.arange(0, (self.length - 1) // step + 1)
        out[src * step] = self.coeffs[src]
        return TruncPoly._wrap(self.p, self.r, out)

    def scale_variable(self, c) -> "TruncPoly":
        """``a(c t)``."""
        c = _scalar(c, self.p)
        powers = np.array([pow(c, m, self.p) for m in range(self.length)], dtype=np.int64)
        return TruncPoly._wrap(self.p, self.r, self.coeffs * powers)

    def evaluate(self, c) -> FieldElement:
        c = _scalar(c, self.p)
        acc = 0
        for a in reversed(self.coeffs.tolist()):
            acc = (acc * c + a) % self.p
        return self.field(acc)

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "coeffs": self.coeffs.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "TruncPoly":
        return cls(int(obj["p"]), int(obj["r"]), obj["coeffs"])


class TruncPoly2:
    """Element of ``F_p[s,t]/(s^N, t^N)``; ``grid[a, b]`` is the ``s^a t^b`` coefficient."""

    __slots__ = ("p", "r", "grid")

    def __init__(self, p: int, r: int, grid):
        length = ring_length(p, r)
        g = np.array(grid, dtype=np.int64) % p
        if g.shape != (length, length):
            raise UsageError("grid must be %dx%d" % (length, length))
        self.p, self.r, self.grid = p, r, _frozen(g)

    def _check(self, other):
        if not isinstance(other, TruncPoly2) or (other.p, other.r) != (self.p, self.r):
            raise UsageError("two-variable polynomials with different (p, r)")

    def __add__(self, other):
        self._check(other)
        return TruncPoly2(self.p, self.r, self.grid + other.grid)

    def __sub__(self, other):
        self._check(other)
        return TruncPoly2(self.p, self.r, self.grid - other.grid)

    def __mul__(self, c):
        return TruncPoly2(self.p, self.r, self.grid * _scalar(c, self.p))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncPoly2):
            return NotImplemented
        return (self.p, self.r) == (other.p, other.r) and np.array_equal(self.grid, other.grid)

    def __hash__(self):
        return hash((self.p, self.r, self.grid.tobytes()))

    def is_zero(self) -> bool:
        return not self.grid.any()

    def support(self) -> list[tuple[int, int]]:
        return [tuple(int(v) for v in ab) for ab in np.argwhere(self.grid)]


class PolyMatrix:
    """``n x n`` matrix over ``F_p[t]/(t^(p^r))``, stored by coefficient matrices."""

    __slots__ = ("p", "r", "coeffs")

    def __init__(self, p: int, r: int, coeffs):
        length = ring_length(p, r)
        c = np.array(coeffs, dtype=np.int64)
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise UsageError("PolyMatrix coefficients must have shape (N, n, n)")
        if c.shape[0] > length:
            if np.any(c[length:] % p):
                raise UsageError("coefficients beyond degree p^r - 1 must be zero")
            c = c[:length]
        if c.shape[0] < length:
            c = np.concatenate([c, np.zeros((length - c.shape[0],) + c.shape[1:], dtype=np.int64)])
        self.p, self.r, self.coeffs = p, r, _frozen(c % p)

    @classmethod
    def _wrap(cls, p, r, c):
        obj = object.__new__(cls)
        obj.p, obj.r, obj.coeffs = p, r, _frozen(c % p)
        return obj

    @classmethod
    def identity(cls, p: int, r: int, n: int) -> "PolyMatrix":
        c = np.zeros((ring_length(p, r), n, n), dtype=np.int64)
        c[0] = np.eye(n, dtype=np.int64)
        return cls._wrap(p, r, c)

    @classmethod
    def from_terms(cls, p: int, r: int, n: int, terms: Mapping[int, SquareMatrix]) -> "PolyMatrix":
        """Build ``sum_m terms[m] t^m``; degrees at or above ``p^r`` are dropped."""
        length = ring_length(p, r)
        c = np.zeros((length, n, n), dtype=np.int64)
        for m, mat in terms.items():
            if mat.p != p or mat.n != n:
                raise UsageError("term matrix has the wrong field or size")
            if m < length:
                c[m] = (c[m] + mat.array) % p
        return cls._wrap(p, r, c)

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @property
    def length(self) -> int:
        return self.coeffs.shape[0]

    @property
    def field(self) -> Field:
        return prime_field(self.p)

    def _check(self, other):
        if not isinstance(other, PolyMatrix):
            raise UsageError("expected a PolyMatrix")
        if (other.p, other.r, other.n) != (self.p, self.r, self.n):
            raise UsageError("PolyMatrix parameter mismatch")

    def coefficient_matrix(self, m: int) -> SquareMatrix:
        """The degree-``m`` coefficient ``A_m``; this is the value on the divided power ``gamma_m``."""
        if not 0 <= m < self.length:
            raise UsageError("degree %d outside 0..%d" % (m, self.length - 1))
        return SquareMatrix._wrap(self.field, self.coeffs[m].copy())

    def entry(self, i: int, j: int) -> TruncPoly:
        return TruncPoly._wrap(self.p, self.r, self.coeffs[:, i, j].copy())

    def __add__(self, other):
        self._check(other)
        return PolyMatrix._wrap(self.p, self.r, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return PolyMatrix._wrap(self.p, self.r, self.coeffs - other.coeffs)

    def __matmul__(self, other):
        if isinstance(other, SquareMatrix):
            if other.p != self.p or other.n != self.n:
                raise UsageError("PolyMatrix/SquareMatrix mismatch")
            return PolyMatrix._wrap(self.p, self.r, self.coeffs @ other.array)
        self._check(other)
        length = self.length
        out = np.zeros_like(self.coeffs)
        b = other.coeffs
        for i in np.flatnonzero(self.coeffs.reshape(length, -1).any(axis=1)):
            out[i:] += self.coeffs[i] @ b[: length - i]
        return PolyMatrix._wrap(self.p, self.r, out)

    def __rmatmul__(self, other):
        if isinstance(other, SquareMatrix):
            if other.p != self.p or other.n != self.n:
                raise UsageError("PolyMatrix/SquareMatrix mismatch")
            return PolyMatrix._wrap(self.p, self.r, other.array @ self.coeffs)
        return NotImplemented

    def conjugate(self, g: SquareMatrix) -> "PolyMatrix":
        """``g phi g^-1`` coefficient-wise."""
        return (g @ self) @ g.inverse()

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.p, self.r) == (other.p, other.r) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.r, self.coeffs.tobytes()))

    def __repr__(self):
        terms = {m: self.coeffs[m].tolist() for m in range(self.length) if self.coeffs[m].any()}
        return "PolyMatrix(p=%d, r=%d, n=%d, %r)" % (self.p, self.r, self.n, terms)

    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs.reshape(self.length, -1).any(axis=1))
        return int(nz[-1]) if len(nz) else -1

    def frobenius_twist(self, i: int) -> "PolyMatrix":
        step = self.p**i
        out = np.zeros_like(self.coeffs)
        src = np.arange(0, (self.length - 1) // step + 1)
        out[src * step] = self.coeffs[src]
        return PolyMatrix._wrap(self.p, self.r, out)

    def scale_variable(self, c) -> "PolyMatrix":
        c = _scalar(c, self.p)
        powers = np.array([pow(c, m, self.p) for m in range(self.length)], dtype=np.int64)
        return PolyMatrix._wrap(self.p, self.r, self.coeffs * powers[:, None, None])

    def evaluate(self, c) -> SquareMatrix:
        c = _scalar(c, self.p)
        acc = np.zeros(self.coeffs.shape[1:], dtype=np.int64)
        for m in range(self.length - 1, -1, -1):
            acc = (acc * c + self.coeffs[m]) % self.p
        return SquareMatrix._wrap(self.field, acc)

    def subst_sum(self) -> "PolyMatrix2":
        """``phi(s + t)``."""
        return PolyMatrix2(self.p, self.r, _expand_sum(self.coeffs, self.p))

    def tensor(self, other: "PolyMatrix") -> "PolyMatrix2":
        """``phi(s) psi(t)`` as a matrix over the two-variable ring."""
        self._check(other)
        return PolyMatrix2(self.p, self.r, self.coeffs[:, None] @ other.coeffs[None, :])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "field": self.field.to_json(),
            "rows": [[self.entry(i, j).to_json() for j in range(self.n)] for i in range(self.n)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PolyMatrix":
        field = Field.from_json(obj["field"])
        rows = obj["rows"]
        n = len(rows)
        if "n" in obj and int(obj["n"]) != n:
            raise UsageError("declared n disagrees with rows")
        entries = [[TruncPoly.from_json(e) for e in row] for row in rows]
        if any(len(row) != n for row in entries):
            raise UsageError("PolyMatrix rows must be square")
        p, r = entries[0][0].p, entries[0][0].r
        if p != field.p or any((e.p, e.r) != (p, r) for row in entries for e in row):
            raise UsageError("entries disagree on (p, r)")
        c = np.zeros((ring_length(p, r), n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                c[:, i, j] = entries[i][j].coeffs
        return cls._wrap(p, r, c)


class PolyMatrix2:
    """Matrix over the two-variable ring; ``grid[a, b]`` is the ``s^a t^b`` coefficient matrix."""

    __slots__ = ("p", "r", "grid")

    def __init__(self, p: int, r: int, grid: np.ndarray):
        self.p, self.r, self.grid = p, r, _frozen(np.asarray(grid, dtype=np.int64) % p)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix2):
            return NotImplemented
        return (self.p, self.r) == (other.p, other.r) and np.array_equal(self.grid, other.grid)

    def __hash__(self):
        return hash((self.p, self.r, self.grid.tobytes()))

    def __sub__(self, other):
        return PolyMatrix2(self.p, self.r, self.grid - other.grid)

    def support(self) -> list[tuple[int, int]]:
        """Bidegrees with a nonzero coefficient matrix."""
        nz = self.grid.reshape(self.grid.shape[0], self.grid.shape[1], -1).any(axis=2)
        return [(int(a), int(b)) for a, b in np.argwhere(nz)]
