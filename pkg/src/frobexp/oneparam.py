"""Infinitesimal one-parameter subgroups of GL_n and the truncated exponential.

A height-r one-parameter subgroup is a ``PolyMatrix`` ``phi`` over
``F_p[t]/(t^(p^r))`` with ``phi(0) = I`` and ``phi(s+t) = phi(s) phi(t)``.
Its value on the divided power ``gamma_m`` is the coefficient matrix
``A_m``, so ``d phi(u_j)`` is ``A_{p^j}``.

``lift`` sends a commuting tuple ``(X_0, ..., X_{r-1})`` of p-nilpotent
matrices to ``exp(t X_0) exp(t^p X_1) ... exp(t^(p^(r-1)) X_{r-1})``;
``decompose`` inverts it by peeling off one layer at a time::

    X_0 = A_1(phi)
    X_i = A_{p^i}(phi) - A_{p^i}(lift(X_0, ..., X_{i-1}, 0, ..., 0))
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConsistencyError, DomainError, UsageError
from .fields import Field, inv_factorial_mod_p, inv_mod, prime_field
from .matrices import (
    CommutingTuple,
    SquareMatrix,
    centralizer_basis,
    commutator,
    is_p_nilpotent,
    is_p_unipotent,
    random_commuting_tuple,
    random_invertible,
    random_strictly_upper,
)
from .report import Report
from .rng import SplitMix64, sample_stream
from .truncpoly import PolyMatrix

JOBS_ENV = "FROBEXP_JOBS"


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


# homomorphism law


def homomorphism_defect(phi: PolyMatrix) -> list[tuple[int, int]]:
    """Bidegrees ``(a, b)`` where ``phi(s+t)`` and ``phi(s) phi(t)`` differ."""
    return (phi.subst_sum() - phi.tensor(phi)).support()


def verify_homomorphism(phi) -> bool:
    if isinstance(phi, OneParamSubgroup):
        phi = phi.phi
    if not phi.coefficient_matrix(0).is_identity():
        return False
    return phi.subst_sum() == phi.tensor(phi)


@dataclass(frozen=True, eq=True)
class OneParamSubgroup:
    """A PolyMatrix certified to satisfy the homomorphism law."""

    phi: PolyMatrix

    def __post_init__(self):
        if not verify_homomorphism(self.phi):
            raise DomainError("not a one-parameter subgroup: homomorphism law fails")

    @property
    def p(self) -> int:
        return self.phi.p

    @property
    def r(self) -> int:
        return self.phi.r

    @property
    def n(self) -> int:
        return self.phi.n

    @property
    def field(self) -> Field:
        return self.phi.field

    def coefficient_matrix(self, m: int) -> SquareMatrix:
        return self.phi.coefficient_matrix(m)

    def differential(self, j: int) -> SquareMatrix:
        """Image of ``u_j``."""
        return self.phi.coefficient_matrix(self.p**j)

    def evaluate(self, c) -> SquareMatrix:
        return self.phi.evaluate(c)

    def conjugate(self, g: SquareMatrix) -> "OneParamSubgroup":
        return OneParamSubgroup(self.phi.conjugate(g))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "r": self.r,
            "n": self.n,
            "field": self.field.to_json(),
            "phi": self.phi.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "OneParamSubgroup":
        return cls(_polymatrix_from_file(obj))


def _polymatrix_from_file(obj: dict) -> PolyMatrix:
    phi = PolyMatrix.from_json(obj["phi"] if "phi" in obj else obj)
    for key, val in (("p", phi.p), ("r", phi.r), ("n", phi.n)):
        if key in obj and int(obj[key]) != val:
            raise UsageError("declared %s=%s disagrees with the matrix" % (key, obj[key]))
    return phi


# truncated exponential and logarithm


def _require_nilpotent(x: SquareMatrix):
    if not is_p_nilpotent(x):
        raise DomainError("exp_p needs x^p = 0 over F_%d" % x.p)


def _exp_terms(x: SquareMatrix) -> list[SquareMatrix]:
    """``x^i / i!`` for ``0 <= i < p``."""
    p = x.p
    terms = [SquareMatrix.identity(x.field, x.n)]
    power = terms[0]
    for i in range(1, p):
        power = power @ x
        terms.append(power * inv_factorial_mod_p(i, p))
    return terms


def exp_p(x: SquareMatrix) -> SquareMatrix:
    """``1 + x + x^2/2 + ... + x^(p-1)/(p-1)!`` for p-nilpotent ``x``."""
    _require_nilpotent(x)
    out = SquareMatrix.zeros(x.field, x.n)
    for term in _exp_terms(x):
        out = out + term
    return out


def _exp_series(x: SquareMatrix, r: int) -> PolyMatrix:
    return PolyMatrix.from_terms(x.p, r, x.n, dict(enumerate(_exp_terms(x))))


def exp_line(x: SquareMatrix, r: int = 1) -> OneParamSubgroup:
    """``t -> exp_p(t x)`` as a height-r one-parameter subgroup."""
    _require_nilpotent(x)
    return OneParamSubgroup(_exp_series(x, r))


def log_p(g: SquareMatrix) -> SquareMatrix:
    """``(g-1) - (g-1)^2/2 + ... + (-1)^p (g-1)^(p-1)/(p-1)`` for p-unipotent ``g``."""
    if not is_p_unipotent(g):
        raise DomainError("log_p needs (g-1)^p = 0 over F_%d" % g.p)
    p = g.p
    y = g - SquareMatrix.identity(g.field, g.n)
    out = SquareMatrix.zeros(g.field, g.n)
    power = SquareMatrix.identity(g.field, g.n)
    for i in range(1, p):
        power = power @ y
        coeff = inv_mod(i, p) if i % 2 else -inv_mod(i, p)
        out = out + power * coeff
    return out


# the bijection and its inverse


def _lift_matrices(layers: Sequence[SquareMatrix], r: int) -> PolyMatrix:
    x0 = layers[0]
    phi = PolyMatrix.identity(x0.p, r, x0.n)
    for i, x in enumerate(layers):
        if i >= r:
            break
        if x.is_zero():
            continue
        phi = phi @ _exp_series(x, r).frobenius_twist(i)
    return phi


def lift(tup: CommutingTuple, r: int | None = None) -> OneParamSubgroup:
    """The map from commuting p-nilpotent r-tuples to height-r one-parameter subgroups."""
    if not isinstance(tup, CommutingTuple):
        tup = CommutingTuple(tup)
    r = tup.r if r is None else r
    if r < tup.r:
        raise UsageError("height %d is smaller than the tuple length %d" % (r, tup.r))
    phi = _lift_matrices(tup.layers, r)
    try:
        return OneParamSubgroup(phi)
    except DomainError as exc:
        raise ConsistencyError("lift produced a non-homomorphism") from exc


def decompose(phi) -> CommutingTuple:
    """Recover the unique commuting tuple whose lift is ``phi``."""
    if isinstance(phi, OneParamSubgroup):
        phi = phi.phi
    elif not verify_homomorphism(phi):
        raise DomainError("decompose needs a one-parameter subgroup; homomorphism law fails")
    p, r, n = phi.p, phi.r, phi.n
    zero = SquareMatrix.zeros(phi.field, n)
    layers: list[SquareMatrix] = []
    for i in range(r):
        degree = p**i
        partial = _lift_matrices(layers + [zero] * (r - i), r)
        x = phi.coefficient_matrix(degree) - partial.coefficient_matrix(degree)
        if not is_p_nilpotent(x):
            raise ConsistencyError("layer %d is not p-nilpotent" % i)
        for j, y in enumerate(layers):
            if not commutator(x, y).is_zero():
                raise ConsistencyError("layer %d does not commute with layer %d" % (i, j))
        layers.append(x)
    tup = CommutingTuple(layers)
    if _lift_matrices(tup.layers, r) != phi:
        raise ConsistencyError("lift(decompose(phi)) differs from phi")
    return tup


# exponential-map axioms


def _vandermonde_inverse(p: int) -> np.ndarray:
    field = prime_field(p)
    v = SquareMatrix(field, [[pow(s, m, p) for m in range(p)] for s in range(p)])
    return v.inverse().array


@dataclass(frozen=True)
class ExponentialCandidate:
    """A map on p-nilpotent matrices offered as an exponential map for GL_n."""

    field: Field
    n: int
    map: Callable[[SquareMatrix], SquareMatrix] = exp_p
    name: str = "truncated-series"

    def __call__(self, x: SquareMatrix) -> SquareMatrix:
        _require_nilpotent(x)
        return self.map(x)

    def line(self, x: SquareMatrix, r: int = 2) -> PolyMatrix:
        """``s -> E(s x)`` recovered by interpolation over all ``s`` in F_p.

        Exact when ``E(s x)`` has degree below p in ``s``. Height 2 is the
        default because then ``2p - 2 < p^2`` and the homomorphism check sees
        every cross term.
        """
        p = self.field.p
        values = np.stack([self(x * s).array for s in range(p)])
        coeffs = np.tensordot(_vandermonde_inverse(p), values, axes=1) % p
        return PolyMatrix(p, r, coeffs)


def _nilpotent_samples(field: Field, n: int, count: int, rng: SplitMix64) -> list[SquareMatrix]:
    samples = [SquareMatrix.zeros(field, n), SquareMatrix.jordan_block(field, n)]
    while len(samples) < count:
        samples.append(random_commuting_tuple(field, n, 1, rng, conjugate=True)[0])
    return samples[:count]


def verify_exponential_axioms(
    cand: ExponentialCandidate,
    samples: int = 20,
    seed: int = 0,
    s_values: int = 20,
    group_samples: int = 50,
    pair_samples: int = 100,
) -> Report:
    field, n, p = cand.field, cand.n, cand.field.p
    rng = SplitMix64(seed)
    report = Report(
        "axioms",
        {"p": p, "n": n, "candidate": cand.name, "samples": samples, "seed": seed},
    )
    xs = _nilpotent_samples(field, n, samples, rng)
    images: dict[SquareMatrix, int] = {}
    for idx, x in enumerate(xs):
        line = cand.line(x)
        report.check(
            "one_parameter_law",
            verify_homomorphism(line),
            idx,
            x=x.rows(),
            defect=homomorphism_defect(line)[:8],
        )
        report.check(
            "differential_u0",
            line.coefficient_matrix(1) == x,
            idx,
            x=x.rows(),
            coefficient=line.coefficient_matrix(1).rows(),
        )
        basis = centralizer_basis(x)
        for _ in range(s_values):
            s = rng.below(p)
            e = cand(x * s)
            einv = e.inverse()
            for b in basis:
                report.check(
                    "trivial_adjoint_action",
                    e @ b @ einv == b,
                    idx,
                    x=x.rows(),
                    s=s,
                    centralizer_element=b.rows(),
                )
        ex = cand(x)
        other = images.setdefault(ex, idx)
        report.check("injectivity", xs[other] == x, idx, x=x.rows(), collides_with=other)
    for gi in range(group_samples):
        g = random_invertible(field, n, rng)
        ginv = g.inverse()
        for idx, x in enumerate(xs):
            lhs = cand(g @ x @ ginv)
            rhs = g @ cand(x) @ ginv
            report.check("equivariance", lhs == rhs, idx, g_index=gi, g=g.rows(), x=x.rows())
    for pi in range(pair_samples):
        x, y = random_commuting_tuple(field, n, 2, rng, conjugate=True).layers
        ex, ey = cand(x), cand(y)
        report.check("commuting_lemma", ex @ ey == ey @ ex, pi, x=x.rows(), y=y.rows())
    return report


# bijection property suite


def _bijection_sample(args) -> list:
    p, n, r, seed, index = args
    field = prime_field(p)
    tup = random_commuting_tuple(field, n, r, sample_stream(seed, index), conjugate=bool(index % 2))
    payload = {"layers": [x.rows() for x in tup.layers]}
    phi = _lift_matrices(tup.layers, r)
    results = [("homomorphism", verify_homomorphism(phi), index, payload)]
    try:
        back = decompose(phi)
        ok = back == tup
    except (ConsistencyError, DomainError):
        ok = False
    results.append(("round_trip", ok, index, payload))
    return results


def _run_batch(fn, args: list, jobs: int) -> list:
    if jobs <= 1 or len(args) < 2:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, args, chunksize=max(1, len(args) // (4 * jobs))))


def verify_bijection(field, n: int, r: int, samples: int = 200, seed: int = 0, jobs: int = 1) -> Report:
    """Round trip ``decompose(lift(T)) == T`` and the homomorphism law on seeded tuples.

    Sample ``i`` is drawn from its own derived stream, and odd samples are
    conjugated off the upper triangle. Results do not depend on ``jobs``.
    """
    field = prime_field(field) if isinstance(field, int) else field
    report = Report("bijection", {"p": field.p, "n": n, "r": r, "samples": samples, "seed": seed})
    args = [(field.p, n, r, seed, i) for i in range(samples)]
    for results in _run_batch(_bijection_sample, args, jobs):
        report.absorb(results)
    return report


# the SL_2 example and SL_n checks


def sl2_example_check(p: int = 3) -> Report:
    """phi_1 = 1 + sX, phi_2 = 1 + s^p X, phi_3 = phi_1 phi_2 for X = E_12 in sl_2, height 2."""
    field = prime_field(p)
    x = SquareMatrix.unit(field, 2, 0, 1)
    eye = SquareMatrix.identity(field, 2)
    phi1 = PolyMatrix.from_terms(p, 2, 2, {0: eye, 1: x})
    phi2 = PolyMatrix.from_terms(p, 2, 2, {0: eye, p: x})
    phi3 = phi1 @ phi2
    report = Report("sl2-example", {"p": p})
    for name, phi in (("phi1", phi1), ("phi2", phi2), ("phi3", phi3)):
        report.check("homomorphism_" + name, verify_homomorphism(phi))
        report.check(
            "determinant_one_" + name,
            all(phi.evaluate(c).det() == 1 for c in range(p)),
        )
    report.check("phi3_is_phi1_times_phi2", phi3 == lift(CommutingTuple([x, x])).phi)
    report.check("d_phi1_u0_is_X", phi1.coefficient_matrix(1) == x)
    report.check("d_phi1_u0_eq_d_phi3_u0", phi1.coefficient_matrix(1) == phi3.coefficient_matrix(1))
    report.check("d_phi1_u1_is_zero", phi1.coefficient_matrix(p).is_zero())
    report.check("d_phi2_u1_is_X", phi2.coefficient_matrix(p) == x)
    diff = phi3.coefficient_matrix(p) - phi1.coefficient_matrix(p)
    report.check("d_phi3_u1_minus_d_phi1_u1_is_X", diff == x, difference=diff.rows())
    report.check("difference_trace_zero", diff.trace() == 0, trace=diff.trace())
    report.check("decompose_phi3", decompose(phi3) == CommutingTuple([x, x]))
    return report


def sl_n_compatibility_check(field, n: int, samples: int = 20, seed: int = 0) -> Report:
    """Determinant-one and trace-zero consequences for nilpotents of sl_n."""
    field = prime_field(field) if isinstance(field, int) else field
    p = field.p
    rng = SplitMix64(seed)
    report = Report("sl-n", {"p": p, "n": n, "samples": samples, "seed": seed})
    for idx, x in enumerate(_nilpotent_samples(field, n, samples, rng)):
        report.check("nilpotent_trace_zero", x.trace() == 0, idx, x=x.rows())
        report.check("det_exp_is_one", exp_p(x).det() == 1, idx, x=x.rows())
    for idx in range(samples):
        x0, x1 = random_commuting_tuple(field, n, 2, rng, conjugate=True).layers
        phi = lift(CommutingTuple([x0, x1])).phi
        report.check(
            "det_lift_is_one",
            all(phi.evaluate(c).det() == 1 for c in range(p)),
            idx,
            layers=[x0.rows(), x1.rows()],
        )
        # two height-2 subgroups that agree below degree p
        base = lift(CommutingTuple([x0]), r=2).phi
        agree = all(base.coefficient_matrix(m) == phi.coefficient_matrix(m) for m in range(p))
        report.check("agree_below_p", agree, idx)
        diff = phi.coefficient_matrix(p) - base.coefficient_matrix(p)
        report.check("lemma_difference_trace_zero", diff.trace() == 0, idx, difference=diff.rows())
    return report


# saturation


def saturate(g: SquareMatrix, r: int = 1) -> OneParamSubgroup:
    """``s -> exp_p(s log_p(g))``, the canonical one-parameter subgroup through ``g``."""
    if g.n > g.p:
        raise UsageError("saturation is implemented for n <= p (got n=%d, p=%d)" % (g.n, g.p))
    return exp_line(log_p(g), r)


def random_p_unipotent(field, n: int, seed) -> SquareMatrix:
    """``h (I + U) h^-1`` with ``U`` strictly upper triangular; p-unipotent when n <= p."""
    rng = seed if isinstance(seed, SplitMix64) else SplitMix64(int(seed))
    field = prime_field(field) if isinstance(field, int) else field
    u = random_strictly_upper(field, n, rng)
    h = random_invertible(field, n, rng)
    return h @ (SquareMatrix.identity(field, n) + u) @ h.inverse()


def verify_saturation(field, n: int, samples: int = 100, seed: int = 0, conj_samples: int = 20) -> Report:
    field = prime_field(field) if isinstance(field, int) else field
    rng = SplitMix64(seed)
    report = Report("saturation", {"p": field.p, "n": n, "samples": samples, "seed": seed})
    for idx in range(samples):
        g = random_p_unipotent(field, n, rng)
        phi = saturate(g)
        report.check("passes_through_g", phi.evaluate(1) == g, idx, g=g.rows())
        report.check("homomorphism", verify_homomorphism(phi), idx, g=g.rows())
        for _ in range(conj_samples):
            h = random_invertible(field, n, rng)
            lhs = saturate(h @ g @ h.inverse()).phi
            report.check("conjugation_equivariance", lhs == phi.phi.conjugate(h), idx, h=h.rows())
    return report
