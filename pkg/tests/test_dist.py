import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobexp.dist import (
    DistElement,
    dist_coproduct,
    dist_mul,
    is_primitive,
    padic_digits,
    padic_monomial,
    primitive_subspace,
    trivial_part,
    u_generator,
    verify_dist,
)
from frobexp.errors import UsageError
from frobexp.rng import SplitMix64
from frobexp.truncpoly import TruncPoly

g = DistElement.gamma


def test_product_examples():
    assert g(3, 1, 1) * g(3, 1, 1) == g(3, 1, 2, 2)
    assert (g(3, 1, 1) * g(3, 1, 2)).is_zero()
    assert g(3, 2, 3) * g(3, 2, 3) == g(3, 2, 6, math.comb(6, 3) % 3)


def test_generators():
    assert u_generator(3, 2, 0) == g(3, 2, 1)
    assert u_generator(3, 2, 1) == g(3, 2, 3)
    assert (u_generator(3, 1, 0) ** 3).is_zero()
    with pytest.raises(UsageError):
        u_generator(3, 2, 2)


@pytest.mark.parametrize("m,expected", [(5, g(3, 2, 5)), (1, g(3, 2, 1)), (4, g(3, 2, 4))])
def test_padic_examples(m, expected):
    assert padic_monomial(3, 2, m) == expected


def test_padic_digits():
    assert padic_digits(5, 3) == [2, 1]
    assert padic_digits(0, 7) == [0]


def test_coproduct_examples():
    def terms(a):
        d = dist_coproduct(a).grid
        return {(int(i), int(j)): int(d[i, j]) for i, j in zip(*np.nonzero(d))}

    assert terms(g(3, 2, 1)) == {(1, 0): 1, (0, 1): 1}
    assert terms(g(3, 2, 2)) == {(2, 0): 1, (1, 1): 1, (0, 2): 1}
    middle = dist_coproduct(u_generator(3, 2, 1)) - trivial_part(u_generator(3, 2, 1))
    assert middle.support() == [(1, 2), (2, 1)]
    # the cross terms live in Dist of the height-1 kernel: both indices below p
    assert all(i < 3 and j < 3 for i, j in middle.support())


def test_primitivity_examples():
    assert is_primitive(u_generator(3, 2, 0))
    assert not is_primitive(g(3, 2, 2))
    assert is_primitive(DistElement(3, 2, []))
    # the higher generators carry cross terms, so they are not primitive
    assert not is_primitive(u_generator(3, 2, 1))
    assert not is_primitive(u_generator(5, 2, 1))


@pytest.mark.parametrize("p,r", [(3, 2), (3, 3), (5, 2)])
def test_primitive_subspace_is_one_dimensional(p, r):
    basis = primitive_subspace(p, r)
    assert basis == [g(p, r, 1)]


def test_primitive_subspace_brute_force_3_2():
    count = 0
    for coeffs in np.ndindex(*([3] * 9)):
        if is_primitive(DistElement(3, 2, coeffs)):
            count += 1
    assert count == 3


@pytest.mark.parametrize("p,r", [(3, 3), (5, 2), (7, 2)])
def test_verify_dist_suite(p, r):
    assert verify_dist(p, r).passed


def rand_dist(p, r, seed):
    rng = SplitMix64(seed)
    return DistElement(p, r, [rng.below(p) for _ in range(p**r)])


@given(st.sampled_from([(3, 1), (3, 2), (5, 1), (5, 2)]), st.integers(0, 2**32))
def test_algebra_laws(pr, seed):
    p, r = pr
    a, b, c = (rand_dist(p, r, seed + k) for k in range(3))
    assert dist_mul(dist_mul(a, b), c) == dist_mul(a, dist_mul(b, c))
    assert dist_mul(a, b) == dist_mul(b, a)
    assert dist_mul(a, b + c) == dist_mul(a, b) + dist_mul(a, c)
    assert dist_mul(DistElement.unit(p, r), a) == a
    d = dist_coproduct(a).grid
    assert np.array_equal(d, d.T)


@given(st.sampled_from([(3, 2), (5, 1)]), st.integers(0, 2**32))
def test_coproduct_is_multiplicative(pr, seed):
    p, r = pr
    a, b = rand_dist(p, r, seed), rand_dist(p, r, seed + 7)
    da, db = dist_coproduct(a).grid, dist_coproduct(b).grid
    n = p**r
    # (a (x) b)(c (x) d) = ac (x) bd, expanded on the gamma basis
    prod = np.zeros((n, n), dtype=np.int64)
    basis = [g(p, r, m) for m in range(n)]
    mul = [[dist_mul(basis[i], basis[j]).coeffs for j in range(n)] for i in range(n)]
    for i1, j1 in zip(*np.nonzero(da)):
        for i2, j2 in zip(*np.nonzero(db)):
            prod += da[i1, j1] * db[i2, j2] * np.outer(mul[i1][i2], mul[j1][j2])
    assert np.array_equal(prod % p, dist_coproduct(dist_mul(a, b)).grid)


def test_pairing_is_dual_basis():
    for m in range(9):
        for i in range(9):
            assert g(3, 2, m).pair(TruncPoly.monomial(3, 2, i)) == int(m == i)


def test_json_round_trip():
    a = rand_dist(5, 2, 3)
    assert DistElement.from_json(a.to_json()) == a
