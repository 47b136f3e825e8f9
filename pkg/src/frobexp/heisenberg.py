"""The fake Heisenberg group: a 2-dimensional unipotent group whose height-r
one-parameter subgroups do not match commuting r-tuples in its Lie algebra.

Group law on points (p > 2)::

    (a, b) . (c, d) = (a + c, b + d + (a^p c - a c^p) / 2)

Coordinate ring ``k[X, Y]`` with ``X`` primitive and::

    Delta(Y) = Y(x)1 + 1(x)Y + (X^p (x) X - X (x) X^p) / 2

A Hopf map ``k[H] -> k[t]/(t^(p^r))`` is fixed by the images ``fX, fY``
(zero constant terms); it is a Hopf map iff both comultiplication
identities hold after substituting ``t -> s + t``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError, UsageError
from .fields import Field, FieldElement, inv_mod, prime_field
from .matrices import kernel_basis
from .oneparam import _run_batch
from .report import Report
from .truncpoly import TruncPoly, TruncPoly2, _expand_sum, ring_length

MAX_SEARCH = 10**6
_BATCH = 4096


@dataclass(frozen=True)
class HeisenbergPoint:
    a: FieldElement
    b: FieldElement

    def __post_init__(self):
        if self.a.field != self.b.field:
            raise UsageError("coordinates from different fields")
        if self.a.field.p == 2:
            raise DomainError("the fake Heisenberg group needs p > 2")

    @classmethod
    def of(cls, field: Field, a, b) -> "HeisenbergPoint":
        return cls(field(a), field(b))

    @property
    def field(self) -> Field:
        return self.a.field

    def __mul__(self, other: "HeisenbergPoint") -> "HeisenbergPoint":
        return group_law(self, other)

    def inverse(self) -> "HeisenbergPoint":
        return HeisenbergPoint(-self.a, -self.b)


def group_law(u: HeisenbergPoint, v: HeisenbergPoint) -> HeisenbergPoint:
    if u.field != v.field:
        raise UsageError("points over different fields")
    p = u.field.p
    a, b, c, d = u.a, u.b, v.a, v.b
    twist = (a**p * c - a * c**p) * inv_mod(2, p)
    return HeisenbergPoint(a + c, b + d + twist)


def identity_point(field: Field) -> HeisenbergPoint:
    return HeisenbergPoint(field.zero, field.zero)


@dataclass(frozen=True)
class HopfMapCandidate:
    fX: TruncPoly
    fY: TruncPoly

    def __post_init__(self):
        if (self.fX.p, self.fX.r) != (self.fY.p, self.fY.r):
            raise UsageError("fX and fY live in different rings")

    @property
    def p(self) -> int:
        return self.fX.p

    @property
    def r(self) -> int:
        return self.fX.r

    def to_json(self) -> dict:
        return {"fX": self.fX.coeffs.tolist(), "fY": self.fY.coeffs.tolist()}

    def sort_key(self):
        return (tuple(self.fX.coeffs.tolist()), tuple(self.fY.coeffs.tolist()))


def _twist(fx: TruncPoly) -> TruncPoly2:
    """``(fX^p (x) fX - fX (x) fX^p) / 2``."""
    fxp = fx**fx.p
    return (fxp.tensor(fx) - fx.tensor(fxp)) * inv_mod(2, fx.p)


def is_hopf_map(c: HopfMapCandidate) -> bool:
    fx, fy = c.fX, c.fY
    if fx.coeff(0) or fy.coeff(0):
        return False
    if not fx.is_primitive():
        return False
    one = TruncPoly.monomial(c.p, c.r, 0)
    return fy.subst_sum() == fy.tensor(one) + one.tensor(fy) + _twist(fx)


def primitive_polys(p: int, r: int) -> list[TruncPoly]:
    """Every primitive element of ``F_p[t]/(t^(p^r))``, from the kernel of the primitivity map."""
    length = ring_length(p, r)
    columns = []
    one = TruncPoly.monomial(p, r, 0)
    for m in range(length):
        t_m = TruncPoly.monomial(p, r, m)
        columns.append((t_m.subst_sum() - t_m.tensor(one) - one.tensor(t_m)).grid.ravel())
    basis = [np.array(v, dtype=np.int64) for v in kernel_basis(np.stack(columns, axis=1), prime_field(p))]
    out = []
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        vec = sum((c * v for c, v in zip(coeffs, basis)), np.zeros(length, dtype=np.int64))
        out.append(TruncPoly(p, r, vec))
    return out


def search_space(p: int, r: int) -> int:
    return len(primitive_polys(p, r)) * p ** (ring_length(p, r) - 1)


def _scan_fy(args):
    """Test every ``fY`` with zero constant term against a fixed primitive ``fX``.

    Same identity as ``is_hopf_map``, evaluated on a batch of candidates at
    once: column ``k`` of ``fy`` is one candidate.
    """
    p, r, fx_coeffs = args
    fx = TruncPoly(p, r, fx_coeffs)
    if fx.coeff(0) or not fx.is_primitive():
        return []
    length = ring_length(p, r)
    target = _twist(fx).grid[:, :, None]
    tails = itertools.product(range(p), repeat=length - 1)
    found = []
    while True:
        chunk = list(itertools.islice(tails, _BATCH))
        if not chunk:
            return found
        fy = np.zeros((length, len(chunk)), dtype=np.int64)
        fy[1:] = np.array(chunk, dtype=np.int64).T
        lhs = _expand_sum(fy, p)
        lhs[:, 0] -= fy
        lhs[0, :] -= fy
        ok = ((lhs - target) % p == 0).all(axis=(0, 1))
        for k in np.nonzero(ok)[0]:
            found.append({"fX": list(fx_coeffs), "fY": fy[:, k].tolist()})


def enumerate_hopf_maps(p: int, r: int, jobs: int = 1) -> list[HopfMapCandidate]:
    """All Hopf maps over F_p by brute force, sorted by coefficient tuples.

    ``fX`` ranges over the primitive polynomials (the linear condition on
    ``X``); ``fY`` ranges over every polynomial with zero constant term.
    """
    if p == 2:
        raise DomainError("the fake Heisenberg group needs p > 2")
    size = search_space(p, r)
    if size > MAX_SEARCH:
        raise CapacityError(
            "search space %d exceeds %d; use verify_family for a soundness check" % (size, MAX_SEARCH)
        )
    args = [(p, r, tuple(fx.coeffs.tolist())) for fx in primitive_polys(p, r)]
    maps = []
    for found in _run_batch(_scan_fy, args, jobs):
        for obj in found:
            maps.append(HopfMapCandidate(TruncPoly(p, r, obj["fX"]), TruncPoly(p, r, obj["fY"])))
    return sorted(maps, key=HopfMapCandidate.sort_key)


def closed_form_family(p: int, r: int) -> list[HopfMapCandidate]:
    """``fX = a t^(p^(r-1))``, ``fY = b_0 t + b_1 t^p + ... + b_{r-1} t^(p^(r-1))``."""
    top = p ** (r - 1)
    out = []
    for a in range(p):
        fx = TruncPoly.monomial(p, r, top, a)
        for bs in itertools.product(range(p), repeat=r):
            fy = TruncPoly(p, r, [0] * ring_length(p, r))
            for j, b in enumerate(bs):
                fy = fy + TruncPoly.monomial(p, r, p**j, b)
            out.append(HopfMapCandidate(fx, fy))
    return sorted(out, key=HopfMapCandidate.sort_key)


def verify_family(p: int, r: int) -> Report:
    report = Report("heisenberg-family", {"p": p, "r": r})
    family = closed_form_family(p, r)
    for idx, cand in enumerate(family):
        report.check("closed_form_is_hopf", is_hopf_map(cand), idx, map=cand.to_json())
    report.extra["family_size"] = len(family)
    return report


def lie_algebra_nullcone_count(p: int) -> int:
    """Points of the restricted nullcone of the 2-dim abelian Lie algebra with zero [p]-map."""

    def p_map(x):
        return (0, 0)

    return sum(1 for x in itertools.product(range(p), repeat=2) if p_map(x) == (0, 0))


def commuting_tuple_count(p: int, r: int) -> int:
    # trivial bracket: every r-tuple of nullcone points commutes
    return lie_algebra_nullcone_count(p) ** r


def counterexample_report(p: int, r: int, jobs: int = 1) -> dict:
    complete = search_space(p, r) <= MAX_SEARCH
    if complete:
        maps = enumerate_hopf_maps(p, r, jobs)
        family = {c.sort_key() for c in closed_form_family(p, r)}
        all_closed_form = all(c.sort_key() in family for c in maps)
    else:
        fam_report = verify_family(p, r)
        if not fam_report.passed:
            raise DomainError("closed-form family failed the Hopf check")
        maps = closed_form_family(p, r)
        all_closed_form = True
    hom = len(maps)
    tuples = commuting_tuple_count(p, r)
    return {
        "p": p,
        "r": r,
        "hom_count": hom,
        "tuple_count": tuples,
        "complete_search": complete,
        "all_closed_form": all_closed_form,
        "mismatch": hom != tuples,
        "maps": [c.to_json() for c in maps],
    }
