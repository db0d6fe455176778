from __future__ import annotations

import csv
import io
from math import comb

import pytest
from golden import V_VALUES
from hypothesis import given
from hypothesis import strategies as st

from sblob.combinatorics import (
    AB,
    D,
    chebyshev_U,
    d_expected,
    dim_delta,
    k_of,
    labels,
    poset_leq,
    sequences_csv,
    v,
    v_closed,
)


def test_labels():
    assert labels(1) == [-1, 0]
    assert labels(3) == [-3, -2, -1, 0, 1, 2]
    with pytest.raises(ValueError):
        labels(0)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_poset_extremes(n):
    for lam in labels(n):
        assert poset_leq(n, -n, lam)
        assert poset_leq(n, lam, 0)


def test_poset_incomparable_pairs():
    assert not poset_leq(3, -1, 1) and not poset_leq(3, 1, -1)
    assert poset_leq(3, 2, 1) and poset_leq(3, -2, 1) and not poset_leq(3, 1, 2)
    with pytest.raises(ValueError):
        poset_leq(2, 2, 0)


@given(st.integers(min_value=1, max_value=7), st.data())
def test_poset_is_partial_order(n, data):
    lam, mu, nu = (data.draw(st.sampled_from(labels(n))) for _ in range(3))
    assert poset_leq(n, lam, lam)
    if poset_leq(n, lam, mu) and poset_leq(n, mu, lam):
        assert lam == mu
    if poset_leq(n, lam, mu) and poset_leq(n, mu, nu):
        assert poset_leq(n, lam, nu)


def test_k_examples():
    assert k_of(1, 0) == 1
    assert k_of(3, -1) == 1
    assert k_of(1, 1) == -1


@pytest.mark.parametrize("n", range(1, 8))
def test_dim_delta_examples(n):
    assert dim_delta(n, -n) == 1
    assert dim_delta(n, 0) == 2**n


def test_dim_delta_small():
    assert dim_delta(1, 0) == 2
    assert dim_delta(2, 0) == 4
    with pytest.raises(ValueError):
        dim_delta(2, 2)


def test_D_examples():
    assert [D(n, 0) for n in range(6)] == [1, 2, 4, 8, 16, 32]
    assert D(0, 1) == 0
    assert D(1, 1) == 1
    assert D(3, 5) == 0


@pytest.mark.parametrize("n", range(1, 13))
def test_D_recurrence(n):
    for r in range(1, n + 1):
        assert D(n + 1, r) == D(n, r - 1) + D(n, r + 1)


def test_v_values():
    assert tuple(v(m) for m in range(5)) == V_VALUES
    assert v(3) == 16 * 224 - 14 and v(4) == 16 * 3570 - 224


def test_chebyshev():
    assert chebyshev_U(0, 8) == 1
    assert chebyshev_U(1, 8) == 16
    assert chebyshev_U(2, 8) == 255
    assert v_closed(1) == 14 and v_closed(2) == 224 and v_closed(3) == 3570
    for m in range(13):
        assert v_closed(m) == v(m)


@pytest.mark.parametrize("n", range(1, 11))
def test_total_dimension_identity(n):
    assert sum(v(r) * D(n, r) for r in range(n + 1)) == 16**n


@pytest.mark.parametrize("n", range(1, 9))
def test_standard_dimension_identity(n):
    assert sum(v(abs(lam)) * dim_delta(n, lam) for lam in labels(n)) == 16**n


@pytest.mark.parametrize("n", range(2, 11))
def test_AB_identities(n):
    a, b = AB(n)
    assert b == sum(v(r) for r in range(n - 1))
    assert a + 2 * b == 16**n - v(n - 1) - v(n) == d_expected(n)


def test_AB_examples():
    assert AB(1) == (1, 0)
    assert AB(2) == (16, 1)
    assert AB(3) == (272, 15)
    assert 272 + 2 * 15 == 302 == 16**3 - v(2) - v(3)


def test_d_expected_values():
    assert [d_expected(n) for n in (1, 2, 3, 4)] == [1, 18, 302, 5070]


def test_sequences_csv():
    rows = list(csv.DictReader(io.StringIO(sequences_csv(3))))
    assert list(rows[0]) == ["n", "r", "D", "v", "A", "B"]
    assert len(rows) == 2 + 3 + 4
    last = rows[-1]
    assert (last["n"], last["r"], last["D"], last["v"], last["A"], last["B"]) == ("3", "3", str(D(3, 3)), "3570", "272", "15")


def test_class_counts_agree_with_binomials():
    # the dimension bookkeeping of a permutation class uses these binomials
    for n in range(1, 6):
        assert sum(comb(4 * n, 2 * n + r) for r in range(-2 * n, 2 * n + 1)) == 16**n
