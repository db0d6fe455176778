"""Exact scalars: rationals, prime-field residues, and parameter specialisation.

Rationals are plain :class:`fractions.Fraction`.  Prime-field elements come in
two flavours: :class:`ModScalar` is the user-facing immutable value, while the
hot loops work with bare ``int`` residues through a :class:`PrimeField`.
Both fields expose the same handful of operations so that operator and
elimination code can be written once.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Iterator, Union

# 31-bit primes above 2**30, largest first.  Products of two residues fit in
# 62 bits, which the compiled kernels rely on.
PRIMES = (
    2147483647,
    2147483629,
    2147483587,
    2147483579,
    2147483563,
    2147483549,
    2147483543,
    2147483497,
)


class ModScalar:
    """An element of Z/pZ for one of the large primes."""

    __slots__ = ("residue", "prime")

    def __init__(self, value: int | Fraction, prime: int):
        if prime <= 2**30:
            raise ValueError(f"prime {prime} too small for rank probes")
        if isinstance(value, Fraction):
            value = reduce_fraction(value, prime)
        object.__setattr__(self, "residue", int(value) % prime)
        object.__setattr__(self, "prime", prime)

    def __setattr__(self, name, value):
        raise AttributeError("ModScalar is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, ModScalar):
            if other.prime != self.prime:
                raise ValueError("mismatched primes")
            return other.residue
        if isinstance(other, (int, Fraction)):
            return reduce_fraction(Fraction(other), self.prime)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModScalar(self.residue + o, self.prime)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModScalar(self.residue - o, self.prime)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModScalar(o - self.residue, self.prime)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModScalar(self.residue * o, self.prime)

    __rmul__ = __mul__

    def __neg__(self):
        return ModScalar(-self.residue, self.prime)

    def inverse(self) -> ModScalar:
        if self.residue == 0:
            raise ZeroDivisionError("inverse of zero mod p")
        return ModScalar(pow(self.residue, -1, self.prime), self.prime)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero mod p")
        return ModScalar(self.residue * pow(o, -1, self.prime), self.prime)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModScalar(o, self.prime) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return ModScalar(pow(self.residue, k, self.prime), self.prime)

    def __eq__(self, other):
        if isinstance(other, ModScalar):
            return self.prime == other.prime and self.residue == other.residue
        if isinstance(other, (int, Fraction)):
            try:
                return self.residue == reduce_fraction(Fraction(other), self.prime)
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.prime))

    def __bool__(self):
        return self.residue != 0

    def __repr__(self):
        return f"ModScalar({self.residue}, {self.prime})"


Scalar = Union[Fraction, ModScalar]


def reduce_fraction(x: Fraction, p: int) -> int:
    """Image of a rational in Z/pZ; raises if p divides the denominator."""
    den = x.denominator % p
    if den == 0:
        raise ZeroDivisionError(f"denominator of {x} divisible by {p}")
    return x.numerator * pow(den, -1, p) % p


class RationalField:
    """Field operations on ``Fraction`` coefficients."""

    prime = None
    zero = Fraction(0)
    one = Fraction(1)

    def convert(self, x) -> Fraction:
        if isinstance(x, ModScalar):
            raise TypeError("cannot lift a residue to a rational")
        return Fraction(x)

    def inv(self, x: Fraction) -> Fraction:
        return 1 / x

    def normalize(self, x: Fraction) -> Fraction:
        return x

    def to_scalar(self, x: Fraction) -> Fraction:
        return x

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """Field operations on ``int`` residues modulo ``prime``."""

    zero = 0
    one = 1

    def __init__(self, prime: int):
        self.prime = prime

    def convert(self, x) -> int:
        if isinstance(x, ModScalar):
            if x.prime != self.prime:
                raise ValueError("mismatched primes")
            return x.residue
        return reduce_fraction(Fraction(x), self.prime)

    def inv(self, x: int) -> int:
        return pow(x, -1, self.prime)

    def normalize(self, x: int) -> int:
        return x % self.prime

    def to_scalar(self, x: int) -> ModScalar:
        return ModScalar(x, self.prime)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.prime == self.prime

    def __hash__(self):
        return hash(("GF", self.prime))

    def __repr__(self):
        return f"GF({self.prime})"


QQ = RationalField()


def field_of(backend: str | int | None):
    """``None``/``"rational"`` gives QQ; an integer prime gives GF(p)."""
    if backend is None or backend == "rational":
        return QQ
    return PrimeField(int(backend))


def laurent_power(q: Scalar, k: int) -> Scalar:
    if q == 0:
        raise ZeroDivisionError("laurent_power of zero")
    if isinstance(q, ModScalar):
        return q**k
    return Fraction(q) ** k


def quantum_integer(n: int, q: Scalar) -> Scalar:
    """Balanced quantum integer q^(n-1) + q^(n-3) + ... + q^(1-n).

    Equal to (q^n - q^-n)/(q - q^-1) whenever q^2 != 1, and defined at q = +-1.
    """
    if n < 1:
        raise ValueError("quantum_integer needs n >= 1")
    total = laurent_power(q, 1 - n)
    for k in range(3 - n, n, 2):
        total = total + laurent_power(q, k)
    return total


@dataclass(frozen=True)
class SigmaParams:
    """The eight R-matrix parameters (a, b, c, d, x, y, z, w)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    x: Fraction
    y: Fraction
    z: Fraction
    w: Fraction

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, ModScalar):
                v = Fraction(v)
                object.__setattr__(self, f.name, v)
            if v == 0:
                raise ValueError(f"sigma parameter {f.name} must be nonzero")

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.as_tuple())

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def to_field(self, field) -> dict:
        return {f.name: field.convert(getattr(self, f.name)) for f in fields(self)}

    def as_strings(self) -> list[str]:
        return [str(v) for v in self.as_tuple()]


CANONICAL_SIGMA = (2, 3, 5, 7, 11, 13, 17, 19)


def specialize(seed: int) -> SigmaParams:
    """A deterministic generic parameter point.

    Seed 0 is the canonical point (2, 3, 5, 7, 11, 13, 17, 19); other seeds draw
    eight distinct positive rationals from ``random.Random(seed)``.
    """
    if seed == 0:
        return SigmaParams(*CANONICAL_SIGMA)
    rng = random.Random(seed)
    seen: set[Fraction] = set()
    out = []
    while len(out) < 8:
        v = Fraction(rng.randint(2, 97), rng.randint(1, 13))
        # stay away from 1, where q and 1/q collide
        if v in seen or v == 1:
            continue
        seen.add(v)
        out.append(v)
    return SigmaParams(*out)
