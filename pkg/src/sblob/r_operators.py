"""The R^q_i operators and the tensor-space representation of e, U_i, f.

Operators are applied word by word and never stored as matrices.  Each
R^q_i couples two array offsets (j, k); on the ordered letter pair at (j, k)
it acts by

    12 -> q 12 + 21,    21 -> 12 + q^-1 21,    11, 22 -> 0,

which is the symmetric rank-one matrix [[q, 1], [1, 1/q]].
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from sblob.scalars import QQ, SigmaParams
from sblob.tensor_space import SparseVector, offset

_SYMBOL = re.compile(r"^(e|f|U(\d+))$")


@dataclass(frozen=True)
class ROp:
    """R^q_i on V(n); ``i`` is a position in I_n."""

    q: object
    i: int
    n: int

    def __post_init__(self):
        if self.q == 0:
            raise ValueError("R^q needs q != 0")
        if not -2 * self.n + 1 <= self.i <= 2 * self.n:
            raise ValueError(f"R index {self.i} outside I_{self.n}")

    def offsets(self) -> tuple[int, int]:
        return coupled_offsets(self.n, self.i)


def coupled_offsets(n: int, i: int) -> tuple[int, int]:
    """Ordered offset pair coupled by R_i; R_{2n} wraps to position -2n+1."""
    if i == 2 * n:
        return 4 * n - 1, 0
    return offset(n, i), offset(n, i + 1)


def _apply_pair(terms: dict, L: int, j: int, k: int, q, qinv, norm) -> dict:
    bj = 1 << (L - 1 - j)
    bk = 1 << (L - 1 - k)
    both = bj | bk
    out: dict = {}
    get = out.get
    for w, c in terms.items():
        pair = w & both
        if pair == 0 or pair == both:
            continue
        base = w & ~both
        w12 = base | bk
        w21 = base | bj
        if pair == bk:  # letters (1, 2)
            a, b = c * q, c
        else:
            a, b = c, c * qinv
        s = norm(get(w12, 0) + a)
        if s:
            out[w12] = s
        else:
            out.pop(w12, None)
        s = norm(get(w21, 0) + b)
        if s:
            out[w21] = s
        else:
            out.pop(w21, None)
    return out


def apply_R(op: ROp, v: SparseVector) -> SparseVector:
    if op.n != v.n:
        raise ValueError("operator and vector live in different V(n)")
    f = v.field
    q = f.convert(op.q)
    j, k = op.offsets()
    return SparseVector._raw(v.n, _apply_pair(v.terms, 4 * v.n, j, k, q, f.inv(q), f.normalize), f)


@dataclass(frozen=True)
class GeneratorOp:
    """A word in the generators e, U_1, ..., U_{n-1}, f (empty word = identity).

    The word is read as an operator product, so the rightmost symbol acts
    first.
    """

    symbols: tuple[str, ...]
    n: int

    def __post_init__(self):
        for s in self.symbols:
            m = _SYMBOL.match(s)
            if not m:
                raise ValueError(f"unknown generator {s!r}")
            if m.group(2) is not None:
                i = int(m.group(2))
                if not 1 <= i <= self.n - 1:
                    raise ValueError(f"U_{i} out of range for n={self.n}")

    @classmethod
    def parse(cls, text: str, n: int) -> GeneratorOp:
        """``"f U1 e"`` or ``"1"`` for the identity."""
        toks = text.replace("*", " ").split()
        toks = [t.replace("_", "") for t in toks if t != "1"]
        return cls(tuple(toks), n)

    @classmethod
    def identity(cls, n: int) -> GeneratorOp:
        return cls((), n)

    def __mul__(self, other: GeneratorOp) -> GeneratorOp:
        if self.n != other.n:
            raise ValueError("generator words for different n")
        return GeneratorOp(self.symbols + other.symbols, self.n)

    def __str__(self):
        return " ".join(self.symbols) if self.symbols else "1"


def generator_pairs(symbol: str, n: int, sigma: SigmaParams) -> list[tuple[int, int, object]]:
    """Offset pairs and parameters of the R factors making up one generator."""
    if symbol == "e":
        spec = [(sigma.x, -n), (sigma.y, n)]
    elif symbol == "f":
        spec = [(sigma.z, 0), (sigma.w, 2 * n)]
    else:
        i = int(symbol[1:])
        if not 1 <= i <= n - 1:
            raise ValueError(f"U_{i} out of range for n={n}")
        spec = [(sigma.a, -n - i), (sigma.b, -n + i), (sigma.c, n - i), (sigma.d, n + i)]
    return [(*coupled_offsets(n, pos), q) for q, pos in spec]


class Representation:
    """The action of b'_n on V(n) at one parameter point, in one field.

    Images of basis words under single generators are memoised; applying a
    generator word to a vector is a sequence of sparse scatter passes.
    """

    def __init__(self, n: int, sigma: SigmaParams, field=QQ):
        self.n = n
        self.sigma = sigma
        self.field = field
        self.L = 4 * n
        self._pairs = {}
        self._memo: dict[str, dict[int, tuple]] = {}
        for s in self.symbols():
            pairs = []
            for j, k, q in generator_pairs(s, n, sigma):
                qn = field.convert(q)
                pairs.append((j, k, qn, field.inv(qn)))
            self._pairs[s] = pairs
            self._memo[s] = {}

    def symbols(self) -> list[str]:
        return ["e"] + [f"U{i}" for i in range(1, self.n)] + ["f"]

    def pairs(self, symbol: str) -> list:
        return self._pairs[symbol]

    def word_image(self, symbol: str, w: int) -> tuple:
        """Image of one basis word as a tuple of (word, coeff)."""
        memo = self._memo[symbol]
        img = memo.get(w)
        if img is None:
            terms = {w: self.field.one}
            norm = self.field.normalize
            for j, k, q, qinv in self._pairs[symbol]:
                terms = _apply_pair(terms, self.L, j, k, q, qinv, norm)
                if not terms:
                    break
            img = tuple(terms.items())
            memo[w] = img
        return img

    def apply_symbol(self, symbol: str, terms: dict) -> dict:
        norm = self.field.normalize
        out: dict = {}
        get = out.get
        image = self.word_image
        for w, c in terms.items():
            for w2, c2 in image(symbol, w):
                out[w2] = get(w2, 0) + c * c2
        return {w: c for w, c in ((w, norm(c)) for w, c in out.items()) if c}

    def apply_terms(self, g: GeneratorOp | tuple[str, ...], terms: dict) -> dict:
        symbols = g.symbols if isinstance(g, GeneratorOp) else g
        for s in reversed(symbols):
            if not terms:
                break
            terms = self.apply_symbol(s, terms)
        return terms

    def apply(self, g: GeneratorOp | str, v: SparseVector) -> SparseVector:
        if isinstance(g, str):
            g = GeneratorOp.parse(g, self.n)
        if v.n != self.n or g.n != self.n:
            raise ValueError("size mismatch between operator and vector")
        if v.field != self.field:
            v = v.to_field(self.field)
        return SparseVector._raw(self.n, self.apply_terms(g, v.terms), self.field)

    def apply_word(self, g: GeneratorOp | str, w: int) -> SparseVector:
        return self.apply(g, SparseVector.basis(self.n, w, self.field))


@lru_cache(maxsize=64)
def representation(n: int, sigma: SigmaParams, field=QQ) -> Representation:
    return Representation(n, sigma, field)


def rep(g: GeneratorOp | str, sigma: SigmaParams, v: SparseVector) -> SparseVector:
    """Image of ``v`` under the generator word ``g``."""
    return representation(v.n, sigma, v.field).apply(g, v)


def rank_of_generator(g: GeneratorOp | str, sigma: SigmaParams, n: int, backend: str = "rational", primes=3) -> int:
    """Rank of the operator of a generator word on V(n)."""
    from sblob.rank_engine import rank_of

    if isinstance(g, str):
        g = GeneratorOp.parse(g, n)

    def images(field):
        R = representation(n, sigma, field)
        for w in range(1 << (4 * n)):
            terms = R.apply_terms(g, {w: field.one})
            if terms:
                yield SparseVector._raw(n, terms, field)

    report = rank_of(images, n, backend, primes)
    if not report.agreement:
        raise ArithmeticError(f"backends disagree: {report.ranks}")
    return report.rank


def is_symmetric(g: GeneratorOp | str, sigma: SigmaParams, n: int) -> bool:
    """True iff the matrix of g in the word basis equals its transpose."""
    R = representation(n, sigma)
    if isinstance(g, str):
        g = GeneratorOp.parse(g, n)
    cols = {w: R.apply_terms(g, {w: QQ.one}) for w in range(1 << (4 * n))}
    return all(cols[w2].get(w, 0) == c for w, col in cols.items() for w2, c in col.items())
