import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobexp.errors import DomainError, UsageError
from frobexp.fields import (
    Field,
    binom_mod_p,
    factorial_mod_p,
    inv_factorial_mod_p,
    inv_mod,
    is_prime,
    prime_field,
)
from frobexp.rng import SplitMix64, sample_stream

from oracles import pascal_mod

F9 = Field(3, 2, (1, 0, 1))
FIELDS = [prime_field(3), prime_field(5), prime_field(7), F9]


def test_basic_arithmetic():
    F5, F3 = prime_field(5), prime_field(3)
    assert F5(3) * F5(4) == F5(2)
    assert F3(2) + F3(2) == F3(1)
    x = F9.gen
    assert x * x == F9(2)


@pytest.mark.parametrize("p,a,expected", [(5, 2, 3), (3, 2, 2), (7, 3, 5)])
def test_inverse(p, a, expected):
    F = prime_field(p)
    assert F(a).inv() == F(expected)
    assert inv_mod(a, p) == expected


def test_zero_has_no_inverse():
    with pytest.raises(DomainError):
        prime_field(5).zero.inv()
    with pytest.raises(DomainError):
        F9.zero.inv()


@pytest.mark.parametrize("m,i,p,expected", [(3, 1, 3, 0), (2, 1, 3, 2), (4, 2, 5, 1)])
def test_binom_examples(m, i, p, expected):
    assert binom_mod_p(m, i, p) == expected


@pytest.mark.parametrize("p", [3, 5, 7])
def test_binom_matches_pascal(p):
    table = pascal_mod(200, p)
    for m in range(201):
        for i in range(m + 1):
            assert binom_mod_p(m, i, p) == table[m][i]
        assert binom_mod_p(m, m + 1, p) == 0


@pytest.mark.parametrize("m,p,fact,inv", [(4, 5, 4, 4), (0, 3, 1, 1), (2, 7, 2, 4)])
def test_factorials(m, p, fact, inv):
    assert factorial_mod_p(m, p) == fact
    assert inv_factorial_mod_p(m, p) == inv


def test_factorial_needs_m_below_p():
    with pytest.raises(DomainError):
        factorial_mod_p(5, 5)


def test_field_validation():
    with pytest.raises(UsageError):
        prime_field(4)
    with pytest.raises(UsageError):
        prime_field(101)
    with pytest.raises(UsageError):
        Field(3, 2, (2, 0, 1))  # x^2 + 2 = (x-1)(x+1) over F_3
    with pytest.raises(UsageError):
        Field(3, 4, (2, 0, 0, 0, 1))


def test_mixed_fields_rejected():
    with pytest.raises(UsageError):
        prime_field(3)(1) + prime_field(5)(1)


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: "F%d^%d" % (f.p, f.k))
def test_frobenius_fixes_everything(field):
    q = field.p**field.k
    elems = list(field.elements())
    assert len(elems) == q == len(set(elems))
    for a in elems:
        assert a**q == a
        if field.k == 1:
            assert a**field.p == a


def test_frobenius_moves_generator_of_extension():
    assert F9.gen**3 != F9.gen


def test_json_round_trip():
    assert Field.from_json(F9.to_json()) == F9
    assert Field.from_json(prime_field(7).to_json()) == prime_field(7)


field_st = st.sampled_from([prime_field(3), prime_field(5), prime_field(7), F9])


@given(field_st, st.data())
def test_field_axioms(field, data):
    elems = list(field.elements())
    a, b, c = (data.draw(st.sampled_from(elems)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == field.zero
    if a:
        assert a * a.inv() == field.one
        assert (b / a) * a == b


def test_splitmix_reference_value():
    # first output of SplitMix64 seeded with 0
    assert SplitMix64(0).next() == 0xE220A8397B1DCDAF


def test_sample_streams_are_stable_and_distinct():
    a = [sample_stream(42, i).next() for i in range(5)]
    assert a == [sample_stream(42, i).next() for i in range(5)]
    assert len(set(a)) == 5
    rng = SplitMix64(9)
    state = rng.state
    rng.fork(3)
    assert rng.state == state
