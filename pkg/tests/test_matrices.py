import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobexp.errors import DomainError, UsageError
from frobexp.fields import prime_field
from frobexp.matrices import (
    CommutingTuple,
    NilpotentWitness,
    SquareMatrix,
    ad_matrix,
    centralizer_basis,
    commutator,
    conjugate,
    is_p_nilpotent,
    is_p_unipotent,
    kernel_basis,
    random_commuting_tuple,
    random_invertible,
    random_matrix,
    rref,
)
from frobexp.rng import SplitMix64

from oracles import centralizer_size, det_leibniz, kernel_size

F2, F3, F5, F7 = (prime_field(p) for p in (2, 3, 5, 7))


def E(field, n, i, j):
    """One-based elementary matrix, as in the usual E_ij notation."""
    return SquareMatrix.unit(field, n, i - 1, j - 1)


def test_commutator_examples():
    assert commutator(E(F5, 3, 1, 2), E(F5, 3, 2, 3)) == E(F5, 3, 1, 3)
    assert commutator(E(F5, 3, 1, 2), E(F5, 3, 1, 2)).is_zero()
    assert commutator(SquareMatrix.diag(F5, [1, 2]), E(F5, 2, 1, 2)) == E(F5, 2, 1, 2) * 4


def test_nilpotency_examples():
    j3 = SquareMatrix.jordan_block(F5, 3)
    assert is_p_nilpotent(j3)
    assert not is_p_nilpotent(SquareMatrix.jordan_block(F2, 3))
    assert is_p_nilpotent(SquareMatrix.zeros(F7, 4))


def test_unipotency_examples():
    for f in (F2, F3, F5):
        assert is_p_unipotent(SquareMatrix.identity(f, 2) + E(f, 2, 1, 2))
        assert is_p_unipotent(SquareMatrix.identity(f, 3))
    assert not is_p_unipotent(SquareMatrix.identity(F2, 3) + SquareMatrix.jordan_block(F2, 3))


def test_conjugate_examples():
    x = E(F5, 2, 1, 2)
    assert conjugate(SquareMatrix.identity(F5, 2), x) == x
    assert conjugate(SquareMatrix.diag(F5, [2, 1]), x) == x * 2
    swap = SquareMatrix.permutation(F5, [1, 0])
    assert conjugate(swap, x) == E(F5, 2, 2, 1)


def test_centralizer_examples():
    basis = centralizer_basis(E(F5, 2, 1, 2))
    assert len(basis) == 2
    # every element has the shape [[a, b], [0, a]]
    for b in basis:
        assert b[1, 0] == 0 and b[0, 0] == b[1, 1]
    assert len(centralizer_basis(SquareMatrix.zeros(F5, 2))) == 4
    assert len(centralizer_basis(SquareMatrix.jordan_block(F5, 3))) == 3


@pytest.mark.parametrize(
    "rows",
    [[[0, 1], [0, 0]], [[1, 2], [0, 1]], [[0, 1, 0], [0, 0, 1], [0, 0, 0]], [[1, 0, 0], [0, 1, 0], [0, 0, 2]], [[0, 1, 1], [0, 0, 0], [0, 0, 0]]],
)
def test_centralizer_dimension_against_brute_force(rows):
    x = SquareMatrix(F3, rows)
    basis = centralizer_basis(x)
    assert 3 ** len(basis) == centralizer_size(rows, 3)
    for b in basis:
        assert commutator(x, b).is_zero()


def test_kernel_examples():
    assert kernel_basis(np.eye(3, dtype=np.int64), F5) == []
    assert len(kernel_basis(np.zeros((2, 3), dtype=np.int64), F5)) == 3
    basis = kernel_basis(np.array([[1, 2], [2, 4]]), F5)
    assert basis == [(3, 1)]


@given(st.integers(0, 2**32), st.integers(1, 3), st.integers(1, 4))
def test_kernel_against_brute_force(seed, rows, cols):
    rng = SplitMix64(seed)
    a = [[rng.below(3) for _ in range(cols)] for _ in range(rows)]
    basis = kernel_basis(np.array(a), F3)
    assert 3 ** len(basis) == kernel_size(a, 3)
    for v in basis:
        assert not (np.array(a) @ np.array(v) % 3).any()


def test_rref_is_reduced():
    red, piv = rref(np.array([[2, 4, 1], [1, 2, 3], [0, 0, 1]]), 5)
    assert piv == [0, 2]
    assert red.tolist() == [[1, 2, 0], [0, 0, 1], [0, 0, 0]]


@given(st.integers(0, 2**32), st.sampled_from([2, 3, 5, 7]), st.integers(1, 4))
def test_det_rank_inverse(seed, p, n):
    f = prime_field(p)
    m = random_matrix(f, n, seed)
    assert m.det() == det_leibniz(m.rows()) % p
    assert (m.rank() == n) == (m.det() != 0)
    if m.is_invertible():
        assert (m @ m.inverse()).is_identity()
        assert (m**-2 @ m**2).is_identity()
    else:
        with pytest.raises(DomainError):
            m.inverse()


@given(st.integers(0, 2**32), st.sampled_from([3, 5]), st.integers(1, 4))
def test_conjugation_is_algebra_automorphism(seed, p, n):
    f = prime_field(p)
    rng = SplitMix64(seed)
    g = random_invertible(f, n, rng)
    x, y = random_matrix(f, n, rng), random_matrix(f, n, rng)
    assert conjugate(g, x @ y) == conjugate(g, x) @ conjugate(g, y)
    assert conjugate(g, x + y) == conjugate(g, x) + conjugate(g, y)


@given(st.integers(0, 2**32), st.sampled_from([3, 5]), st.integers(1, 3))
def test_centralizer_dimension_formula(seed, p, n):
    x = random_matrix(prime_field(p), n, seed)
    basis = centralizer_basis(x)
    rank = len(rref(ad_matrix(x), p)[1])
    assert len(basis) == n * n - rank
    for b in basis:
        assert commutator(x, b).is_zero()


def test_square_matrix_validation():
    with pytest.raises(UsageError):
        SquareMatrix(F5, [[1, 2, 3]])
    with pytest.raises(UsageError):
        SquareMatrix(F5, [[1]]) + SquareMatrix(F3, [[1]])
    with pytest.raises(UsageError):
        SquareMatrix(F5, [[1]]) @ SquareMatrix(F5, [[1, 0], [0, 1]])
    with pytest.raises(UsageError):
        SquareMatrix.permutation(F5, [0, 0])


def test_matrix_json_round_trip():
    m = SquareMatrix(F7, [[1, 2], [3, 4]])
    assert SquareMatrix.from_json(m.to_json()) == m
    assert SquareMatrix.from_json({"rows": [[1, 2], [3, 4]]}, F7) == m
    with pytest.raises(UsageError):
        SquareMatrix.from_json({"rows": [[1]]})


def test_nilpotent_witness():
    NilpotentWitness(SquareMatrix.jordan_block(F5, 3))
    with pytest.raises(DomainError):
        NilpotentWitness(SquareMatrix.identity(F5, 2))


def test_commuting_tuple_rejects_noncommuting():
    with pytest.raises(DomainError):
        CommutingTuple([E(F5, 3, 1, 2), E(F5, 3, 2, 3)])
    with pytest.raises(DomainError):
        CommutingTuple([SquareMatrix.identity(F5, 2)])


def test_commuting_tuple_json():
    t = CommutingTuple([E(F5, 3, 1, 2), E(F5, 3, 1, 3)])
    assert CommutingTuple.from_json(t.to_json()) == t
    plain = {"p": 5, "layers": [[[0, 1, 0], [0, 0, 0], [0, 0, 0]], [[0, 0, 1], [0, 0, 0], [0, 0, 0]]]}
    assert CommutingTuple.from_json(plain) == t
    with pytest.raises(UsageError):
        CommutingTuple.from_json(dict(plain, r=3))


def test_random_tuple_shape_in_n2():
    for seed in range(20):
        t = random_commuting_tuple(F3, 2, 2, seed)
        for x in t.layers:
            assert x[0, 0] == x[1, 0] == x[1, 1] == 0


@given(st.integers(0, 2**32), st.integers(1, 3), st.booleans())
def test_random_tuple_postconditions(seed, r, conj):
    t = random_commuting_tuple(F5, 3, r, seed, conjugate=conj)
    assert t.r == r and t.n == 3
    for i, x in enumerate(t.layers):
        assert is_p_nilpotent(x)
        for y in t.layers[i + 1 :]:
            assert commutator(x, y).is_zero()


def test_random_tuple_is_seed_deterministic():
    a = random_commuting_tuple(F7, 3, 2, 123, conjugate=True)
    b = random_commuting_tuple(F7, 3, 2, 123, conjugate=True)
    assert a == b


def test_random_tuple_needs_n_at_most_p():
    with pytest.raises(UsageError):
        random_commuting_tuple(F3, 4, 2, 0)
