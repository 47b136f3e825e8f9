"""Dense exact linear algebra over a prime field.

Matrices hold least nonnegative residues in read-only ``int64`` arrays.
With ``p <= 97`` and the dimensions used here no intermediate product can
overflow before reduction.

The ``[p]``-mapping on ``gl_n`` is the p-th matrix power, so membership in
the restricted nullcone is ``x**p == 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DomainError, UsageError
from .fields import Field, FieldElement, inv_mod, prime_field
from .rng import SplitMix64

Scalar = Union[int, FieldElement]


def _as_prime_field(field) -> Field:
    if isinstance(field, int):
        return prime_field(field)
    if field.k != 1:
        raise UsageError("matrices are only supported over prime fields")
    return field


def _scalar(c: Scalar, field: Field) -> int:
    if isinstance(c, FieldElement):
        if c.field != field:
            raise UsageError("scalar from a different field")
        return c.coeffs[0]
    return int(c) % field.p


class SquareMatrix:
    __slots__ = ("field", "_a")

    def __init__(self, field, entries):
        field = _as_prime_field(field)
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise UsageError("matrix must be square, got shape %r" % (a.shape,))
        a %= field.p
        a.setflags(write=False)
        self.field = field
        self._a = a

    @classmethod
    def _wrap(cls, field: Field, a: np.ndarray) -> "SquareMatrix":
        m = object.__new__(cls)
        a = a % field.p
        a.setflags(write=False)
        m.field = field
        m._a = a
        return m

    # construction helpers

    @classmethod
    def identity(cls, field, n: int) -> "SquareMatrix":
        field = _as_prime_field(field)
        return cls._wrap(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field, n: int) -> "SquareMatrix":
        field = _as_prime_field(field)
        return cls._wrap(field, np.zeros((n, n), dtype=np.int64))

    @classmethod
    def unit(cls, field, n: int, i: int, j: int) -> "SquareMatrix":
        """Elementary matrix with a single 1 at (i, j), zero-based."""
        field = _as_prime_field(field)
        a = np.zeros((n, n), dtype=np.int64)
        a[i, j] = 1
        return cls._wrap(field, a)

    @classmethod
    def diag(cls, field, values: Sequence[Scalar]) -> "SquareMatrix":
        field = _as_prime_field(field)
        return cls._wrap(field, np.diag([_scalar(v, field) for v in values]).astype(np.int64))

    @classmethod
    def permutation(cls, field, perm: Sequence[int]) -> "SquareMatrix":
        """Matrix sending basis vector ``e_j`` to ``e_perm[j]``."""
        field = _as_prime_field(field)
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise UsageError("not a permutation: %r" % (perm,))
        a = np.zeros((n, n), dtype=np.int64)
        for j, i in enumerate(perm):
            a[i, j] = 1
        return cls._wrap(field, a)

    @classmethod
    def jordan_block(cls, field, n: int) -> "SquareMatrix":
        field = _as_prime_field(field)
        return cls._wrap(field, np.eye(n, k=1, dtype=np.int64))

    # accessors

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def array(self) -> np.ndarray:
        return self._a

    def __getitem__(self, ij) -> int:
        return int(self._a[ij])

    def rows(self) -> list[list[int]]:
        return self._a.tolist()

    # arithmetic

    def _check(self, other: "SquareMatrix"):
        if not isinstance(other, SquareMatrix):
            raise UsageError("expected a SquareMatrix, got %s" % type(other).__name__)
        if other.field != self.field:
            raise UsageError("matrices over different fields")
        if other.n != self.n:
            raise UsageError("dimension mismatch: %d vs %d" % (self.n, other.n))

    def __add__(self, other):
        self._check(other)
        return SquareMatrix._wrap(self.field, self._a + other._a)

    def __sub__(self, other):
        self._check(other)
        return SquareMatrix._wrap(self.field, self._a - other._a)

    def __neg__(self):
        return SquareMatrix._wrap(self.field, -self._a)

    def __matmul__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        self._check(other)
        return SquareMatrix._wrap(self.field, self._a @ other._a)

    def __mul__(self, c: Scalar):
        if isinstance(c, SquareMatrix):
            raise UsageError("use @ for matrix products")
        return SquareMatrix._wrap(self.field, self._a * _scalar(c, self.field))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = SquareMatrix.identity(self.field, self.n)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash((self.field.p, self._a.tobytes()))

    def __repr__(self):
        return "SquareMatrix(F%d, %r)" % (self.p, self.rows())

    # linear algebra

    def is_zero(self) -> bool:
        return not self._a.any()

    def is_identity(self) -> bool:
        return np.array_equal(self._a, np.eye(self.n, dtype=np.int64))

    def trace(self) -> int:
        return int(np.trace(self._a)) % self.p

    def rank(self) -> int:
        return len(rref(self._a, self.p)[1])

    def det(self) -> int:
        p = self.p
        a = self._a.copy()
        n = self.n
        det = 1
        for col in range(n):
            nz = np.nonzero(a[col:, col])[0]
            if len(nz) == 0:
                return 0
            piv = col + int(nz[0])
            if piv != col:
                a[[col, piv]] = a[[piv, col]]
                det = -det
            det = det * int(a[col, col]) % p
            inv = inv_mod(int(a[col, col]), p)
            below = a[col + 1 :, col] * inv % p
            a[col + 1 :] = (a[col + 1 :] - np.outer(below, a[col])) % p
        return det % p

    def is_invertible(self) -> bool:
        return self.det() != 0

    def inverse(self) -> "SquareMatrix":
        n, p = self.n, self.p
        aug = np.concatenate([self._a, np.eye(n, dtype=np.int64)], axis=1)
        red, pivots = rref(aug, p)
        if pivots[:n] != list(range(n)):
            raise DomainError("matrix is singular over F_%d" % p)
        return SquareMatrix._wrap(self.field, red[:, n:])

    def transpose(self) -> "SquareMatrix":
        return SquareMatrix._wrap(self.field, self._a.T.copy())

    # serialization

    def to_json(self) -> dict:
        return {"n": self.n, "field": self.field.to_json(), "rows": self.rows()}

    @classmethod
    def from_json(cls, obj: dict, field: Field | None = None) -> "SquareMatrix":
        if "field" in obj:
            f = Field.from_json(obj["field"])
            if field is not None and f != field:
                raise UsageError("matrix field %r disagrees with requested %r" % (f, field))
            field = f
        if field is None:
            raise UsageError("matrix JSON carries no field and none was given")
        rows = [[c[0] if isinstance(c, list) else c for c in row] for row in obj["rows"]]
        m = cls(field, rows)
        if "n" in obj and int(obj["n"]) != m.n:
            raise UsageError("declared n=%s but rows give %d" % (obj["n"], m.n))
        return m


def commutator(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    return a @ b - b @ a


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p with leftmost pivots.

    Returns the reduced matrix and the list of pivot columns.
    """
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * inv_mod(int(a[r, c]), p) % p
        factors = a[:, c].copy()
        factors[r] = 0
        a = (a - np.outer(factors, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def kernel_basis(a, field) -> list[tuple[int, ...]]:
    """Basis of ``{v : a v = 0}`` for a rectangular matrix over F_p.

    One vector per free column, with a 1 in that column; the order follows
    the free columns left to right.
    """
    field = _as_prime_field(field)
    p = field.p
    arr = np.array(a, dtype=np.int64)
    if arr.ndim != 2:
        raise UsageError("kernel_basis expects a 2-d array")
    cols = arr.shape[1]
    if arr.shape[0] == 0:
        return [tuple(int(i == j) for i in range(cols)) for j in range(cols)]
    red, pivots = rref(arr, p)
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = np.zeros(cols, dtype=np.int64)
        v[free] = 1
        for row, pc in enumerate(pivots):
            v[pc] = -red[row, free] % p
        basis.append(tuple(int(x) for x in v))
    return basis


def ad_matrix(x: SquareMatrix) -> np.ndarray:
    """Matrix of ``Y -> [x, Y]`` acting on row-major ``vec(Y)``."""
    eye = np.eye(x.n, dtype=np.int64)
    return (np.kron(x.array, eye) - np.kron(eye, x.array.T)) % x.p


def centralizer_basis(x: SquareMatrix) -> list[SquareMatrix]:
    n = x.n
    return [
        SquareMatrix._wrap(x.field, np.array(v, dtype=np.int64).reshape(n, n))
        for v in kernel_basis(ad_matrix(x), x.field)
    ]


def is_p_nilpotent(a: SquareMatrix) -> bool:
    return (a ** a.p).is_zero()


def is_p_unipotent(g: SquareMatrix) -> bool:
    return is_p_nilpotent(g - SquareMatrix.identity(g.field, g.n))


def conjugate(g: SquareMatrix, x: SquareMatrix) -> SquareMatrix:
    """Adjoint action ``g x g^-1``."""
    return g @ x @ g.inverse()


@dataclass(frozen=True)
class NilpotentWitness:
    """A matrix certified to satisfy ``x**p == 0`` at construction."""

    matrix: SquareMatrix

    def __post_init__(self):
        if not is_p_nilpotent(self.matrix):
            raise DomainError("matrix is not p-nilpotent over F_%d" % self.matrix.p)

    @property
    def checked_power(self) -> int:
        return self.matrix.p


@dataclass(frozen=True)
class CommutingTuple:
    """Pairwise-commuting p-nilpotent matrices ``(X_0, ..., X_{r-1})``."""

    layers: tuple[SquareMatrix, ...]

    def __init__(self, layers: Iterable[SquareMatrix]):
        layers = tuple(layers)
        if not layers:
            raise UsageError("a commuting tuple needs at least one layer")
        first = layers[0]
        for m in layers[1:]:
            first._check(m)
        for idx, m in enumerate(layers):
            if not is_p_nilpotent(m):
                raise DomainError("layer %d is not p-nilpotent" % idx)
        for i in range(len(layers)):
            for j in range(i + 1, len(layers)):
                if not commutator(layers[i], layers[j]).is_zero():
                    raise DomainError("layers %d and %d do not commute" % (i, j))
        object.__setattr__(self, "layers", layers)

    @property
    def elements(self) -> tuple[NilpotentWitness, ...]:
        return tuple(NilpotentWitness(m) for m in self.layers)

    @property
    def r(self) -> int:
        return len(self.layers)

    @property
    def n(self) -> int:
        return self.layers[0].n

    @property
    def field(self) -> Field:
        return self.layers[0].field

    def __iter__(self):
        return iter(self.layers)

    def __len__(self):
        return len(self.layers)

    def __getitem__(self, i):
        return self.layers[i]

    def conjugate(self, g: SquareMatrix) -> "CommutingTuple":
        ginv = g.inverse()
        return CommutingTuple(g @ x @ ginv for x in self.layers)

    def to_json(self) -> dict:
        return {
            "p": self.field.p,
            "r": self.r,
            "n": self.n,
            "field": self.field.to_json(),
            "layers": [m.to_json() for m in self.layers],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CommutingTuple":
        field = Field.from_json(obj["field"]) if "field" in obj else prime_field(int(obj["p"]))
        if "p" in obj and int(obj["p"]) != field.p:
            raise UsageError("p disagrees with field")
        layers = []
        for layer in obj["layers"]:
            if isinstance(layer, dict):
                layers.append(SquareMatrix.from_json(layer, field))
            else:
                layers.append(SquareMatrix(field, layer))
        t = cls(layers)
        if "r" in obj and int(obj["r"]) != t.r:
            raise UsageError("declared r=%s but %d layers given" % (obj["r"], t.r))
        if "n" in obj and int(obj["n"]) != t.n:
            raise UsageError("declared n=%s but layers have n=%d" % (obj["n"], t.n))
        return t


# random generation


def _rng(seed) -> SplitMix64:
    return seed if isinstance(seed, SplitMix64) else SplitMix64(int(seed))


def random_matrix(field, n: int, seed) -> SquareMatrix:
    field = _as_prime_field(field)
    rng = _rng(seed)
    return SquareMatrix(field, [[rng.below(field.p) for _ in range(n)] for _ in range(n)])


def random_invertible(field, n: int, seed) -> SquareMatrix:
    rng = _rng(seed)
    while True:
        g = random_matrix(field, n, rng)
        if g.is_invertible():
            return g


def random_strictly_upper(field, n: int, seed, density: tuple[int, int] = (1, 1)) -> SquareMatrix:
    """Strictly upper-triangular sample; each entry is drawn with odds ``density``."""
    field = _as_prime_field(field)
    rng = _rng(seed)
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.chance(*density):
                a[i, j] = rng.below(field.p)
    return SquareMatrix._wrap(field, a)


_FILTER_ATTEMPTS = 64


def random_commuting_tuple(field, n: int, r: int, seed, conjugate: bool = False) -> CommutingTuple:
    """Seeded sample of ``r`` commuting p-nilpotent ``n x n`` matrices.

    Two strategies, picked by the generator:

    * polynomials without constant term in one random strictly upper
      triangular matrix;
    * sparse random strictly upper triangular matrices, resampled until they
      commute pairwise (after ``_FILTER_ATTEMPTS`` failures the remaining
      draws use the abelian corner ``rows < a <= cols``).

    ``n <= p`` makes every strictly upper triangular matrix p-nilpotent. With
    ``conjugate=True`` the tuple is moved by a random invertible matrix so
    samples are not confined to the upper triangle.
    """
    field = _as_prime_field(field)
    p = field.p
    if n > p:
        raise UsageError("random_commuting_tuple needs n <= p (got n=%d, p=%d)" % (n, p))
    if r < 1:
        raise UsageError("r must be positive")
    rng = _rng(seed)
    if rng.below(2) == 0:
        base = random_strictly_upper(field, n, rng)
        powers = [base**k for k in range(1, n)]
        layers = []
        for _ in range(r):
            acc = SquareMatrix.zeros(field, n)
            for pw in powers:
                acc = acc + pw * rng.below(p)
            layers.append(acc)
    else:
        density = (1, max(2, n - 1))
        layers = None
        for _ in range(_FILTER_ATTEMPTS):
            cand = [random_strictly_upper(field, n, rng, density) for _ in range(r)]
            if all(
                commutator(cand[i], cand[j]).is_zero()
                for i in range(r)
                for j in range(i + 1, r)
            ):
                layers = cand
                break
        if layers is None:
            cut = 1 + rng.below(max(1, n - 1))
            layers = []
            for _ in range(r):
                a = np.zeros((n, n), dtype=np.int64)
                for i in range(cut):
                    for j in range(cut, n):
                        a[i, j] = rng.below(p)
                layers.append(SquareMatrix._wrap(field, a))
    tup = CommutingTuple(layers)
    if conjugate:
        tup = tup.conjugate(random_invertible(field, n, rng))
    return tup
