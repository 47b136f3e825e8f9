"""Root data, Smith normal form, and good / pretty good primes.

Lattices are ``Z^d`` with roots and coroots given in dual coordinates, so
the pairing ``<x, y>`` is the dot product. ``X / Z S`` has p-torsion exactly
when p divides a nonzero invariant factor of the matrix whose rows are S.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import CapacityError, UsageError

MAX_ROOTS = 16


# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    """Nonzero invariant factors ``d_1 | d_2 | ...`` and the matrix rank."""

    factors: tuple[int, ...]
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.factors)

    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)

    def has_p_torsion(self, p: int) -> bool:
        return any(d % p == 0 for d in self.factors)


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SNFResult:
    a = [[int(v) for v in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    factors = []
    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            piv = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // piv
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // piv
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                bad = next(
                    (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % piv),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad])]
                done = False
            # move the smallest nonzero entry of row/column t onto the diagonal
            cands = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, i, j = min(cands)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        factors.append(abs(a[t][t]))
        t += 1
    return SNFResult(tuple(factors), (rows, cols))


def torsion_primes(matrix: Sequence[Sequence[int]]) -> set[int]:
    primes = set()
    for d in smith_normal_form(matrix).torsion():
        q = 2
        while d > 1:
            while d % q == 0:
                primes.add(q)
                d //= q
            q += 1
    return primes


# root data


@dataclass(frozen=True)
class RootDatum:
    rank: int
    roots: tuple[tuple[int, ...], ...]
    coroots: tuple[tuple[int, ...], ...]
    simple: tuple[int, ...] = ()
    types: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(tuple(int(v) for v in a) for a in self.roots))
        object.__setattr__(self, "coroots", tuple(tuple(int(v) for v in a) for a in self.coroots))
        if len(self.roots) != len(self.coroots):
            raise UsageError("roots and coroots must have equal length")
        for a, c in zip(self.roots, self.coroots):
            if len(a) != self.rank or len(c) != self.rank:
                raise UsageError("vector of wrong length for rank %d" % self.rank)
            if pairing(a, c) != 2:
                raise UsageError("<alpha, alpha^vee> = %d != 2 for alpha=%r" % (pairing(a, c), a))
        for t in self.types:
            parse_type(t)

    def cartan_matrix(self) -> list[list[int]]:
        """``C[i][j] = <alpha_i, alpha_j^vee>`` over the simple roots."""
        return [[pairing(self.roots[i], self.coroots[j]) for j in self.simple] for i in self.simple]

    def reflect(self, beta: Sequence[int], k: int) -> tuple[int, ...]:
        """``s_alpha(beta) = beta - <beta, alpha^vee> alpha`` for ``alpha = roots[k]``."""
        c = pairing(beta, self.coroots[k])
        return tuple(b - c * a for b, a in zip(beta, self.roots[k]))

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "roots": [list(a) for a in self.roots],
            "coroots": [list(c) for c in self.coroots],
            "simple": list(self.simple),
            "types": list(self.types),
            "name": self.name,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RootDatum":
        return cls(int(obj["rank"]), obj["roots"], obj["coroots"], tuple(obj.get("simple", ())), tuple(obj.get("types", ())), obj.get("name", ""))


def pairing(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


def _with_negatives(pairs: Iterable[tuple[tuple[int, ...], tuple[int, ...]]]):
    roots, coroots = [], []
    for a, c in pairs:
        roots.append(a)
        coroots.append(c)
    for a, c in list(zip(roots, coroots)):
        roots.append(tuple(-v for v in a))
        coroots.append(tuple(-v for v in c))
    return roots, coroots


def _gl(n: int) -> RootDatum:
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            v = [0] * n
            v[i], v[j] = 1, -1
            pairs.append((tuple(v), tuple(v)))
    roots, coroots = _with_negatives(pairs)
    simple = tuple(roots.index(tuple(1 if k == i else -1 if k == i + 1 else 0 for k in range(n))) for i in range(n - 1))
    types = ("A%d" % (n - 1),) if n > 1 else ()
    return RootDatum(n, roots, coroots, simple, types, "GL%d" % n)


def _sl(n: int) -> RootDatum:
    if n < 2:
        raise UsageError("SL_n needs n >= 2")
    d = n - 1

    def character(k):
        # epsilon_n = -(epsilon_1 + ... + epsilon_{n-1})
        return [1 if m == k else 0 for m in range(d)] if k < d else [-1] * d

    def cocharacter(k):
        # f_k = e_k - e_n; f_n = 0
        return [1 if m == k else 0 for m in range(d)]

    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            a = tuple(x - y for x, y in zip(character(i), character(j)))
            c = tuple(x - y for x, y in zip(cocharacter(i), cocharacter(j)))
            pairs.append((a, c))
    roots, coroots = _with_negatives(pairs)
    pos = [(i, j) for i in range(n) for j in range(i + 1, n)]
    simple = tuple(pos.index((i, i + 1)) for i in range(n - 1))
    return RootDatum(d, roots, coroots, simple, ("A%d" % d,), "SL%d" % n)


def _rank2(positive_long_short, simple_idx, types, name):
    roots, coroots = _with_negatives(positive_long_short)
    return RootDatum(2, roots, coroots, simple_idx, types, name)


def _sp4() -> RootDatum:
    # torus diag(t1, t2, t2^-1, t1^-1); long roots 2e_i have coroots e_i
    pos = [((1, -1), (1, -1)), ((1, 1), (1, 1)), ((2, 0), (1, 0)), ((0, 2), (0, 1))]
    return _rank2(pos, (0, 3), ("C2",), "Sp4")


def _so5() -> RootDatum:
    # adjoint B2: short roots e_i have coroots 2e_i
    pos = [((1, -1), (1, -1)), ((1, 1), (1, 1)), ((1, 0), (2, 0)), ((0, 1), (0, 2))]
    return _rank2(pos, (0, 3), ("B2",), "SO5")


def _g2() -> RootDatum:
    # X = root lattice with basis (short a1, long a2); Gram matrix of (.,.) below
    gram = ((2, -3), (-3, 6))
    positive = [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)]

    def form(u, v):
        return sum(u[i] * gram[i][j] * v[j] for i in range(2) for j in range(2))

    pairs = []
    for a in positive:
        norm = form(a, a)
        # alpha^vee in dual coordinates: <e_i, alpha^vee> = 2 (e_i, alpha) / (alpha, alpha)
        c = tuple(2 * form(e, a) // norm for e in ((1, 0), (0, 1)))
        pairs.append((a, c))
    return _rank2(pairs, (0, 1), ("G2",), "G2")


_NAMED = {"Sp4": _sp4, "C2": _sp4, "SO5": _so5, "B2": _so5, "G2": _g2}


def builtin_datum(name: str) -> RootDatum:
    m = re.fullmatch(r"(GL|SL)(\d+)", name)
    if m:
        n = int(m.group(2))
        if n < 1:
            raise UsageError("n must be positive")
        return _gl(n) if m.group(1) == "GL" else _sl(n)
    if name in _NAMED:
        return _NAMED[name]()
    raise UsageError("unknown root datum %r" % name)


BUILTIN_NAMES = ("GL1", "GL2", "GL3", "SL2", "SL3", "SL4", "Sp4", "SO5", "G2")


# good and pretty good primes


_TYPE_RE = re.compile(r"([A-G])_?(\d+)")


def parse_type(label: str) -> tuple[str, int]:
    m = _TYPE_RE.fullmatch(label)
    if not m:
        raise UsageError("unknown root system label %r" % label)
    family, rank = m.group(1), int(m.group(2))
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 3,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }[family]
    if not ok:
        raise UsageError("unknown root system label %r" % label)
    return family, rank


def bad_prime_bound(label: str) -> int:
    """Largest prime that is bad for the component (1 when none is)."""
    family, rank = parse_type(label)
    if family == "A":
        return 1
    if family in "BCD":
        return 2
    if family == "E" and rank == 8:
        return 5
    return 3


def is_good_prime(labels: Iterable[str], p: int) -> bool:
    return all(p > bad_prime_bound(label) for label in labels)


def _subsets(n: int):
    for size in range(n + 1):
        yield from itertools.combinations(range(n), size)


def is_pretty_good(datum: RootDatum, p: int) -> bool:
    """No p-torsion in ``X / Z S`` or ``Y / Z S^vee`` for every subset S of roots."""
    if len(datum.roots) > MAX_ROOTS:
        raise CapacityError("%d roots exceed the exhaustive-subset cap %d" % (len(datum.roots), MAX_ROOTS))
    return not pretty_good_witness(datum, p)


def pretty_good_witness(datum: RootDatum, p: int) -> dict | None:
    """First subset exhibiting p-torsion, or None."""
    if len(datum.roots) > MAX_ROOTS:
        raise CapacityError("%d roots exceed the exhaustive-subset cap %d" % (len(datum.roots), MAX_ROOTS))
    for subset in _subsets(len(datum.roots)):
        if not subset:
            continue
        for side, vecs in (("X", datum.roots), ("Y", datum.coroots)):
            snf = smith_normal_form([vecs[k] for k in subset])
            if snf.has_p_torsion(p):
                return {"side": side, "subset": list(subset), "invariant_factors": list(snf.factors)}
    return None


def root_lattice_coordinates(datum: RootDatum) -> list[tuple[int, ...]]:
    """Coordinates of every root in the basis of simple roots."""
    if len(datum.simple) == 0:
        return [() for _ in datum.roots]
    basis = [datum.roots[k] for k in datum.simple]
    out = []
    for a in datum.roots:
        coords = _solve_rational(basis, a)
        if coords is None or any(c.denominator != 1 for c in coords):
            raise UsageError("simple roots of %s do not span the root %r over Z" % (datum.name, a))
        out.append(tuple(int(c) for c in coords))
    return out


def _solve_rational(basis: Sequence[Sequence[int]], target: Sequence[int]):
    """Solve ``sum c_i basis[i] = target`` over Q; None if inconsistent."""
    k, d = len(basis), len(target)
    rows = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(target[j])] for j in range(d)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, d) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(d):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(rows[i][k] != 0 for i in range(r, d)):
        return None
    sol = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        sol[c] = rows[i][k]
    return sol


def is_good_by_torsion(datum: RootDatum, p: int) -> bool:
    """Goodness via torsion of ``Z Phi / Z S`` over all subsets S."""
    coords = root_lattice_coordinates(datum)
    if not datum.simple:
        return True
    for subset in _subsets(len(coords)):
        if subset and smith_normal_form([coords[k] for k in subset]).has_p_torsion(p):
            return False
    return True
