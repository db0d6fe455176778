from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from sblob.scalars import (
    CANONICAL_SIGMA,
    PRIMES,
    QQ,
    ModScalar,
    PrimeField,
    SigmaParams,
    field_of,
    laurent_power,
    quantum_integer,
    reduce_fraction,
    specialize,
)

P = PRIMES[0]
nonzero_fracs = st.fractions(min_value=-50, max_value=50, max_denominator=40).filter(lambda q: q != 0)
fracs = st.fractions(min_value=-50, max_value=50, max_denominator=40)
residues = st.integers(min_value=0, max_value=P - 1)


def test_quantum_integer_examples():
    q = Fraction(7, 3)
    assert quantum_integer(2, q) == q + 1 / q
    assert quantum_integer(1, Fraction(5)) == 1
    assert quantum_integer(3, Fraction(2)) == Fraction(21, 4)


def test_quantum_integer_total_at_units():
    assert quantum_integer(4, Fraction(1)) == 4
    assert quantum_integer(3, Fraction(-1)) == 3
    assert quantum_integer(2, Fraction(-1)) == -2


def test_quantum_integer_rejects_bad_n():
    with pytest.raises(ValueError):
        quantum_integer(0, Fraction(2))


def test_laurent_power_examples():
    assert laurent_power(Fraction(3), 0) == 1
    assert laurent_power(Fraction(3), -1) == Fraction(1, 3)
    assert laurent_power(Fraction(2, 5), 2) == Fraction(4, 25)
    with pytest.raises(ZeroDivisionError):
        laurent_power(Fraction(0), 1)


def test_specialize_contract():
    assert specialize(0).as_tuple() == CANONICAL_SIGMA
    s1 = specialize(1).as_tuple()
    assert len(set(s1)) == 8 and all(v != 0 for v in s1)
    assert specialize(0) == specialize(0)
    assert specialize(1) == specialize(1)
    assert specialize(1) != specialize(2)


def test_sigma_rejects_zero():
    with pytest.raises(ValueError):
        SigmaParams(1, 1, 1, 1, 0, 1, 1, 1)


def test_primes_are_large_and_distinct():
    assert len(set(PRIMES)) == len(PRIMES)
    for p in PRIMES:
        assert p > 2**30
        assert all(p % k for k in range(2, 2000))
        assert pow(3, p - 1, p) == 1


def test_rational_invariants():
    assert QQ.convert(Fraction(6, -4)) == Fraction(-3, 2)
    z = QQ.convert(0)
    assert (z.numerator, z.denominator) == (0, 1)


def test_modscalar_mismatch_and_small_prime():
    a, b = ModScalar(3, PRIMES[0]), ModScalar(3, PRIMES[1])
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        ModScalar(1, 101)
    with pytest.raises(ZeroDivisionError):
        ModScalar(0, P).inverse()


def test_field_of():
    assert field_of(None) is QQ and field_of("rational") is QQ
    assert field_of(P) == PrimeField(P)


@given(fracs, fracs, fracs)
def test_rational_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if a:
        assert a * QQ.inv(a) == 1


@given(residues, residues, residues)
def test_mod_field_axioms(x, y, z):
    a, b, c = ModScalar(x, P), ModScalar(y, P), ModScalar(z, P)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if x:
        assert a * a.inverse() == 1
        assert a / a == 1


@given(nonzero_fracs, st.integers(min_value=1, max_value=9))
def test_quantum_integer_identity(q, n):
    assume(q * q != 1)
    assert quantum_integer(n, q) * (q - 1 / q) == q**n - q**-n


@given(fracs, fracs, nonzero_fracs)
def test_reduction_commutes(a, b, c):
    expr = (a * b + c) / c - a
    lhs = reduce_fraction(expr, P)
    ma, mb, mc = (ModScalar(reduce_fraction(t, P), P) for t in (a, b, c))
    assert (ma * mb + mc) / mc - ma == ModScalar(lhs, P)


@given(st.integers(min_value=-3, max_value=3), nonzero_fracs)
def test_quantum_integer_mod_matches_rational(n, q):
    n = abs(n) + 1
    lhs = quantum_integer(n, ModScalar(reduce_fraction(q, P), P))
    assert lhs == ModScalar(reduce_fraction(quantum_integer(n, q), P), P)
