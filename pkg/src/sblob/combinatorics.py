"""Label poset, standard-module dimensions and the integer sequences v, D, A, B."""
from __future__ import annotations

import csv
import io
from fractions import Fraction
from functools import lru_cache
from math import comb


def labels(n: int) -> list[int]:
    """Lambda_n = {-n, ..., n-1}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return list(range(-n, n))


def _level(n: int, lam: int) -> int:
    # height in the Hasse diagram: 0 on top, -n alone at the bottom
    return n if lam == -n else abs(lam)


def poset_leq(n: int, lam: int, mu: int) -> bool:
    """lam <= mu in Lambda_n.

    Levels are {0}, {-1, 1}, ..., {-(n-1), n-1}, {-n}; every element of one
    level lies below every element of the level above, and the two elements
    of a level are incomparable.
    """
    for v in (lam, mu):
        if not -n <= v <= n - 1:
            raise ValueError(f"{v} not in Lambda_{n}")
    if lam == mu:
        return True
    return _level(n, lam) > _level(n, mu)


def k_of(n: int, lam: int) -> int:
    """Upper summation limit of the dimension formula; -1 means an empty sum."""
    if lam == 0:
        return n
    if (n + lam) % 2 == 0:
        return (n + lam) // 2 if lam < 0 else (n - lam - 2) // 2
    return (n - abs(lam) - 1) // 2


def _binom_prefix(n: int, k: int) -> int:
    return sum(comb(n, i) for i in range(k + 1))


def dim_delta(n: int, lam: int) -> int:
    if not -n <= lam <= n - 1:
        raise ValueError(f"{lam} not in Lambda_{n}")
    return _binom_prefix(n, k_of(n, lam))


@lru_cache(maxsize=None)
def D(n: int, r: int) -> int:
    if r < 0:
        raise ValueError("D needs r >= 0")
    if r == 0:
        return 2**n
    if n == 0 or r > n + 1:
        return 0
    return _binom_prefix(n, k_of(n, r)) + _binom_prefix(n, k_of(n, -r))


@lru_cache(maxsize=None)
def v(m: int) -> int:
    if m < 0:
        raise ValueError("v needs m >= 0")
    if m <= 2:
        return (1, 14, 224)[m]
    return 16 * v(m - 1) - v(m - 2)


def chebyshev_U(k: int, x) -> Fraction:
    """Chebyshev polynomial of the second kind by the three-term recurrence."""
    if k < 0:
        raise ValueError("k must be >= 0")
    x = Fraction(x)
    prev, cur = Fraction(1), 2 * x
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def v_closed(m: int) -> int:
    if m == 0:
        return 1
    val = 14 * chebyshev_U(m - 1, 8)
    assert val.denominator == 1
    return int(val)


@lru_cache(maxsize=None)
def AB(n: int) -> tuple[int, int]:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 1, 0
    if n == 2:
        return 16, 1
    a1, b1 = AB(n - 1)
    a2, b2 = AB(n - 2)
    return 16 * (a1 + b1), 16 ** (n - 2) - a2 - b2


def d_expected(n: int) -> int:
    """Dimension of the counit image predicted by the sequences."""
    return 16**n - v(n - 1) - v(n)


def sequences_csv(max_n: int) -> str:
    """Rows n, r, D(n, r), v(r), A_n, B_n for 1 <= n <= max_n, 0 <= r <= n."""
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["n", "r", "D", "v", "A", "B"])
    for n in range(1, max_n + 1):
        a, b = AB(n)
        for r in range(n + 1):
            wr.writerow([n, r, D(n, r), v(r), a, b])
    return buf.getvalue()
