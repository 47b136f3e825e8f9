"""Unipotent radicals of standard parabolics of GL_n and their BCH group law.

A composition ``blocks`` of n fixes the parabolic ``P`` of block upper
triangular matrices. Its radical's Lie algebra ``u`` is the block strictly
upper part, of nilpotence class ``len(blocks) - 1``. When that class is
below p, truncated exp/log identify ``u`` with the unipotent radical ``U``
and the group law on ``u`` is::

    x * y = log_p(exp_p(x) exp_p(y))

which is the Baker-Campbell-Hausdorff series with all denominators
invertible mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, DomainError, UsageError
from .fields import Field, inv_mod, prime_field
from .matrices import SquareMatrix, commutator, random_invertible
from .oneparam import exp_line, exp_p, log_p
from .report import Report
from .rng import SplitMix64


@dataclass(frozen=True)
class UnipotentRadicalModel:
    field: Field
    blocks: tuple[int, ...]

    def __init__(self, field, blocks: Sequence[int]):
        field = prime_field(field) if isinstance(field, int) else field
        blocks = tuple(int(b) for b in blocks)
        if not blocks or any(b < 1 for b in blocks):
            raise UsageError("blocks must be a composition of n into positive parts")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "blocks", blocks)
        if self.nilpotence_class >= field.p:
            raise DomainError(
                "nilpotence class %d is not below p=%d" % (self.nilpotence_class, field.p)
            )

    @property
    def n(self) -> int:
        return sum(self.blocks)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nilpotence_class(self) -> int:
        return len(self.blocks) - 1

    @property
    def block_index(self) -> tuple[int, ...]:
        return tuple(b for b, size in enumerate(self.blocks) for _ in range(size))

    @property
    def radical_mask(self) -> np.ndarray:
        idx = np.array(self.block_index)
        return idx[:, None] < idx[None, :]

    @property
    def parabolic_mask(self) -> np.ndarray:
        idx = np.array(self.block_index)
        return idx[:, None] <= idx[None, :]

    def root_positions(self) -> list[tuple[int, int]]:
        """Positions ``(i, j)`` of the elementary root vectors spanning ``u``."""
        return [(int(i), int(j)) for i, j in np.argwhere(self.radical_mask)]

    def contains(self, x: SquareMatrix) -> bool:
        return x.n == self.n and not x.array[~self.radical_mask].any()

    def in_radical_group(self, g: SquareMatrix) -> bool:
        return self.contains(g - SquareMatrix.identity(self.field, self.n))

    def in_parabolic(self, g: SquareMatrix) -> bool:
        return g.n == self.n and not g.array[~self.parabolic_mask].any() and g.is_invertible()

    def _require(self, x: SquareMatrix):
        if x.field != self.field or not self.contains(x):
            raise UsageError("matrix is not in the radical of blocks %r" % (self.blocks,))

    def bch_mul(self, x: SquareMatrix, y: SquareMatrix) -> SquareMatrix:
        self._require(x)
        self._require(y)
        z = log_p(exp_p(x) @ exp_p(y))
        if not self.contains(z):
            raise ConsistencyError("BCH product left the radical")
        return z

    def epsilon(self, x: SquareMatrix) -> SquareMatrix:
        """The isomorphism ``u -> U`` (truncated exponential)."""
        self._require(x)
        u = exp_p(x)
        if not self.in_radical_group(u):
            raise ConsistencyError("exp_p(x) is not block unipotent")
        return u

    def epsilon_inverse(self, u: SquareMatrix) -> SquareMatrix:
        if not self.in_radical_group(u):
            raise DomainError("matrix is not in the unipotent radical")
        x = log_p(u)
        if not self.contains(x):
            raise ConsistencyError("log_p(u) is not in the radical")
        return x

    def random_element(self, rng: SplitMix64) -> SquareMatrix:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.root_positions():
            a[i, j] = rng.below(self.p)
        return SquareMatrix(self.field, a)

    def random_parabolic(self, rng: SplitMix64) -> SquareMatrix:
        """Block-diagonal invertible Levi part times a random radical element."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        start = 0
        for size in self.blocks:
            a[start : start + size, start : start + size] = random_invertible(self.field, size, rng).array
            start += size
        levi = SquareMatrix(self.field, a)
        return levi @ exp_p(self.random_element(rng))

    def to_json(self) -> dict:
        return {"n": self.n, "blocks": list(self.blocks), "field": self.field.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "UnipotentRadicalModel":
        model = cls(Field.from_json(obj["field"]), obj["blocks"])
        if "n" in obj and int(obj["n"]) != model.n:
            raise UsageError("declared n disagrees with the blocks")
        return model


def bch_class2(x: SquareMatrix, y: SquareMatrix) -> SquareMatrix:
    """``x + y + [x, y]/2``, the full BCH product in class two."""
    return x + y + commutator(x, y) * inv_mod(2, x.p)


def check_group_axioms(model: UnipotentRadicalModel, samples: int = 100, seed: int = 0) -> Report:
    rng = SplitMix64(seed)
    report = Report("bch-group", {"blocks": list(model.blocks), "p": model.p, "samples": samples, "seed": seed})
    zero = SquareMatrix.zeros(model.field, model.n)
    for idx in range(samples):
        x, y, z = (model.random_element(rng) for _ in range(3))
        mul = model.bch_mul
        report.check("associativity", mul(mul(x, y), z) == mul(x, mul(y, z)), idx, x=x.rows(), y=y.rows(), z=z.rows())
        report.check("identity", mul(x, zero) == x and mul(zero, x) == x, idx, x=x.rows())
        report.check("inverse", mul(x, -x).is_zero() and mul(-x, x).is_zero(), idx, x=x.rows())
        report.check("exp_homomorphism", model.epsilon(mul(x, y)) == model.epsilon(x) @ model.epsilon(y), idx)
        report.check("log_inverts_exp", model.epsilon_inverse(model.epsilon(x)) == x, idx, x=x.rows())
        if model.nilpotence_class <= 2:
            report.check("class2_closed_form", mul(x, y) == bch_class2(x, y), idx, x=x.rows(), y=y.rows())
        line = exp_line(x, 1)
        report.check("tangent_identity", line.coefficient_matrix(1) == x, idx, x=x.rows())
    for i, j in model.root_positions():
        e = SquareMatrix.unit(model.field, model.n, i, j)
        eye = SquareMatrix.identity(model.field, model.n)
        for s in range(model.p):
            report.check("root_homomorphism", model.epsilon(e * s) == eye + e * s, None, position=[i, j], s=s)
    return report


def check_P_equivariance(model: UnipotentRadicalModel, samples: int = 100, seed: int = 0) -> Report:
    """``epsilon(g x g^-1) == g epsilon(x) g^-1`` for ``g`` in P and ``x`` in u."""
    rng = SplitMix64(seed)
    report = Report("bch-equivariance", {"blocks": list(model.blocks), "p": model.p, "samples": samples, "seed": seed})
    for idx in range(samples):
        g = model.random_parabolic(rng)
        x = model.random_element(rng)
        ginv = g.inverse()
        y = g @ x @ ginv
        report.check("conjugate_stays_in_u", model.contains(y), idx, g=g.rows(), x=x.rows())
        report.check(
            "P_equivariance",
            model.epsilon(y) == g @ model.epsilon(x) @ ginv,
            idx,
            g=g.rows(),
            x=x.rows(),
        )
    return report


def _random_permutation(n: int, rng: SplitMix64) -> list[int]:
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def sample_cross_pair(model_i: UnipotentRadicalModel, model_j: UnipotentRadicalModel, rng: SplitMix64):
    """Draw ``g`` in GL_n and ``x`` in ``u_J`` with ``g x g^-1`` in ``u_I``.

    ``g = a w b`` with ``a`` in ``P_I``, ``b`` in ``P_J`` and ``w`` a random
    permutation; ``x = b^-1 x0 b`` where ``x0`` is supported on root
    positions of ``u_J`` that ``w`` carries into ``u_I``.
    """
    n, field = model_j.n, model_j.field
    perm = _random_permutation(n, rng)
    w = SquareMatrix.permutation(field, perm)
    mask_i = model_i.radical_mask
    x0 = np.zeros((n, n), dtype=np.int64)
    for i, j in model_j.root_positions():
        if mask_i[perm[i], perm[j]]:
            x0[i, j] = rng.below(field.p)
    x0 = SquareMatrix(field, x0)
    a = model_i.random_parabolic(rng)
    b = model_j.random_parabolic(rng)
    return a @ w @ b, b.inverse() @ x0 @ b


def check_cross_parabolic(
    model_i: UnipotentRadicalModel, model_j: UnipotentRadicalModel, samples: int = 100, seed: int = 0
) -> Report:
    """``epsilon_I(g x g^-1) == g epsilon_J(x) g^-1`` whenever both sides are defined."""
    if model_i.field != model_j.field or model_i.n != model_j.n:
        raise UsageError("models must share field and n")
    rng = SplitMix64(seed)
    report = Report(
        "bch-cross-parabolic",
        {"blocks_I": list(model_i.blocks), "blocks_J": list(model_j.blocks), "p": model_i.p, "samples": samples, "seed": seed},
    )
    for idx in range(samples):
        g, x = sample_cross_pair(model_i, model_j, rng)
        ginv = g.inverse()
        y = g @ x @ ginv
        ok_domain = model_j.contains(x) and model_i.contains(y)
        report.check("pair_in_domain", ok_domain, idx, g=g.rows(), x=x.rows())
        if ok_domain:
            report.check(
                "cross_parabolic_agreement",
                model_i.epsilon(y) == g @ model_j.epsilon(x) @ ginv,
                idx,
                g=g.rows(),
                x=x.rows(),
            )
    return report
