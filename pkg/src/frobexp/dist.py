"""The distribution algebra of the height-r Frobenius kernel of the additive group.

Elements are coefficient vectors on the divided-power basis
``gamma_0, ..., gamma_{N-1}`` (``N = p^r``), where ``gamma_m`` is dual to
``t^m``. Structure constants::

    gamma_i * gamma_j = C(i+j, i) gamma_{i+j}      (zero once i+j >= N)
    Delta(gamma_m)    = sum_{i+j=m} gamma_i (x) gamma_j

The algebra generators are ``u_j = gamma_{p^j}`` for ``j < r``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import UsageError
from .fields import factorial_mod_p, inv_mod, prime_field
from .matrices import kernel_basis
from .report import Report
from .truncpoly import TruncPoly, TruncPoly2, binomial_grid, ring_length


class DistElement:
    __slots__ = ("p", "r", "coeffs")

    def __init__(self, p: int, r: int, coeffs: Sequence[int] = ()):
        length = ring_length(p, r)
        c = np.zeros(length, dtype=np.int64)
        vals = np.array(coeffs, dtype=np.int64).ravel()
        if len(vals) > length:
            raise UsageError("gamma_m with m >= p^r is zero; pass at most p^r coefficients")
        c[: len(vals)] = vals
        c %= p
        c.setflags(write=False)
        self.p, self.r, self.coeffs = p, r, c

    @classmethod
    def gamma(cls, p: int, r: int, m: int, c: int = 1) -> "DistElement":
        length = ring_length(p, r)
        coeffs = [0] * length
        if m < length:
            coeffs[m] = c
        return cls(p, r, coeffs)

    @classmethod
    def unit(cls, p: int, r: int) -> "DistElement":
        return cls.gamma(p, r, 0)

    @property
    def length(self) -> int:
        return len(self.coeffs)

    def _check(self, other):
        if not isinstance(other, DistElement) or (other.p, other.r) != (self.p, self.r):
            raise UsageError("distributions with different (p, r)")

    def __add__(self, other):
        self._check(other)
        return DistElement(self.p, self.r, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return DistElement(self.p, self.r, self.coeffs - other.coeffs)

    def __mul__(self, other):
        if not isinstance(other, DistElement):
            return DistElement(self.p, self.r, self.coeffs * (int(other) % self.p))
        return dist_mul(self, other)

    def __rmul__(self, c):
        return DistElement(self.p, self.r, self.coeffs * (int(c) % self.p))

    def __pow__(self, e: int):
        out = DistElement.unit(self.p, self.r)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, DistElement):
            return NotImplemented
        return (self.p, self.r) == (other.p, other.r) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.r, self.coeffs.tobytes()))

    def __repr__(self):
        terms = ["%d*g%d" % (c, m) for m, c in enumerate(self.coeffs.tolist()) if c]
        return "DistElement(p=%d, r=%d, %s)" % (self.p, self.r, " + ".join(terms) or "0")

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def pair(self, f: TruncPoly) -> int:
        """``<a, f> = sum_m a_m f_m``, from ``<gamma_m, t^i> = delta_{m,i}``."""
        if (f.p, f.r) != (self.p, self.r):
            raise UsageError("pairing needs matching (p, r)")
        return int(np.dot(self.coeffs, f.coeffs) % self.p)

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "coeffs": self.coeffs.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "DistElement":
        return cls(int(obj["p"]), int(obj["r"]), obj["coeffs"])


def dist_mul(a: DistElement, b: DistElement) -> DistElement:
    a._check(b)
    length = a.length
    # binomial_grid already vanishes on i + j >= N, i.e. gamma_{i+j} = 0 there
    weights = binomial_grid(a.p, length) * np.outer(a.coeffs, b.coeffs) % a.p
    out = np.zeros(length, dtype=np.int64)
    idx = np.add.outer(np.arange(length), np.arange(length))
    mask = idx < length
    np.add.at(out, idx[mask], weights[mask])
    return DistElement(a.p, a.r, out)


def dist_coproduct(a: DistElement) -> TruncPoly2:
    """Grid ``D[i, j]`` = coefficient of ``gamma_i (x) gamma_j`` in ``Delta(a)``."""
    length = a.length
    idx = np.add.outer(np.arange(length), np.arange(length))
    padded = np.concatenate([a.coeffs, np.zeros(length, dtype=np.int64)])
    return TruncPoly2(a.p, a.r, padded[idx])


def trivial_part(a: DistElement) -> TruncPoly2:
    """``a (x) 1 + 1 (x) a``."""
    g = np.zeros((a.length, a.length), dtype=np.int64)
    g[:, 0] += a.coeffs
    g[0, :] += a.coeffs
    return TruncPoly2(a.p, a.r, g)


def is_primitive(a: DistElement) -> bool:
    return dist_coproduct(a) == trivial_part(a)


def u_generator(p: int, r: int, j: int) -> DistElement:
    if not 0 <= j < r:
        raise UsageError("u_j needs 0 <= j < r (got j=%d, r=%d)" % (j, r))
    return DistElement.gamma(p, r, p**j)


def padic_digits(m: int, p: int) -> list[int]:
    digits = []
    while m:
        digits.append(m % p)
        m //= p
    return digits or [0]


def padic_monomial(p: int, r: int, m: int) -> DistElement:
    """Evaluate ``u_0^{m_0} ... u_q^{m_q} / (m_0! ... m_q!)`` with dist_mul.

    The ``m_i`` are the base-p digits of ``m``; the result should be ``gamma_m``.
    """
    if not 0 <= m < ring_length(p, r):
        raise UsageError("m must lie in 0..p^r-1")
    out = DistElement.unit(p, r)
    denom = 1
    for j, digit in enumerate(padic_digits(m, p)):
        out = out * (u_generator(p, r, j) ** digit)
        denom = denom * factorial_mod_p(digit, p) % p
    return out * inv_mod(denom, p)


def primitive_subspace(p: int, r: int) -> list[DistElement]:
    """Basis of the primitive elements, from the kernel of ``a -> Delta(a) - a(x)1 - 1(x)a``."""
    length = ring_length(p, r)
    columns = []
    for m in range(length):
        g = DistElement.gamma(p, r, m)
        columns.append((dist_coproduct(g) - trivial_part(g)).grid.ravel())
    system = np.stack(columns, axis=1)
    return [DistElement(p, r, v) for v in kernel_basis(system, prime_field(p))]


def verify_dist(p: int, r: int) -> Report:
    """Exhaustive structural checks on the full gamma basis."""
    length = ring_length(p, r)
    report = Report("dist", {"p": p, "r": r})
    for m in range(length):
        report.check("padic_identity", padic_monomial(p, r, m) == DistElement.gamma(p, r, m), m)
    for j in range(r):
        report.check("u_power_zero", (u_generator(p, r, j) ** p).is_zero(), j)
    sums = np.stack([TruncPoly.monomial(p, r, m).subst_sum().grid for m in range(length)])
    for i in range(length):
        gi = DistElement.gamma(p, r, i)
        for j in range(length):
            prod = dist_mul(gi, DistElement.gamma(p, r, j))
            report.check("duality", np.array_equal(prod.coeffs, sums[:, i, j]), None, i=i, j=j)
    for m in range(length):
        grid = dist_coproduct(DistElement.gamma(p, r, m)).grid
        report.check("cocommutative", np.array_equal(grid, grid.T), m)
    basis = primitive_subspace(p, r)
    report.check(
        "primitives_are_lie_algebra",
        [b.coeffs.tolist() for b in basis] == [DistElement.gamma(p, r, 1).coeffs.tolist()],
        None,
        basis=[b.coeffs.tolist() for b in basis],
    )
    report.extra["primitive_dimension"] = len(basis)
    report.extra["u_primitive"] = [is_primitive(u_generator(p, r, j)) for j in range(r)]
    return report
