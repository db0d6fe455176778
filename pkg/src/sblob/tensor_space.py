"""Words over {1, 2}, sparse vectors in V(n) = V_2^{(x)4n}, and special vectors.

A word of V(n) has 4n letters labelled by the positions -2n+1, ..., 2n.
Position ``i`` lives at array offset ``i + 2n - 1``.  Words are encoded as
integers with offset 0 in the most significant bit and letter ``2`` as a set
bit, so integer order is lexicographic order and ``1...1`` encodes to 0.
"""
from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

from sblob.scalars import QQ, ModScalar


def length(n: int) -> int:
    return 4 * n


def offset(n: int, position: int) -> int:
    """Array offset of a position in I_n = {-2n+1, ..., 2n}."""
    if not -2 * n + 1 <= position <= 2 * n:
        raise ValueError(f"position {position} outside I_{n}")
    return position + 2 * n - 1


def position(n: int, off: int) -> int:
    return off - 2 * n + 1


def encode(letters: Sequence[int] | str, n: int | None = None) -> int:
    """Integer code of a word given as letters (or a string of 1s and 2s)."""
    if isinstance(letters, str):
        letters = [int(ch) for ch in letters]
    if n is not None and len(letters) != 4 * n:
        raise ValueError(f"word length {len(letters)} != {4 * n}")
    if len(letters) % 4:
        raise ValueError("word length must be a multiple of 4")
    code = 0
    for ch in letters:
        if ch not in (1, 2):
            raise ValueError(f"bad letter {ch!r}")
        code = (code << 1) | (ch - 1)
    return code


def decode(code: int, n: int) -> tuple[int, ...]:
    L = 4 * n
    if not 0 <= code < 1 << L:
        raise ValueError(f"code {code} out of range for n={n}")
    return tuple(((code >> (L - 1 - j)) & 1) + 1 for j in range(L))


def word_str(code: int, n: int) -> str:
    return "".join(str(ch) for ch in decode(code, n))


def letter_at(code: int, n: int, off: int) -> int:
    return ((code >> (4 * n - 1 - off)) & 1) + 1


def perm_class(code: int, n: int) -> int:
    """r such that the word has 2n + r ones."""
    ones = 4 * n - bin(code).count("1")
    return ones - 2 * n


def class_dim(n: int, r: int) -> int:
    if not -2 * n <= r <= 2 * n:
        return 0
    return comb(4 * n, 2 * n + r)


def class_words(n: int, r: int) -> list[int]:
    """Codes of all words in permutation class r, increasing."""
    L = 4 * n
    twos = 2 * n - r
    out = []
    for pos in combinations(range(L), twos):
        code = 0
        for j in pos:
            code |= 1 << (L - 1 - j)
        out.append(code)
    out.sort()
    return out


def all_words(n: int) -> range:
    return range(1 << (4 * n))


class SparseVector:
    """A finitely supported linear combination of words of V(n).

    ``terms`` maps word codes to coefficients native to ``field`` (``Fraction``
    for QQ, ``int`` residues for a prime field).  Zero coefficients are never
    stored.
    """

    __slots__ = ("n", "terms", "field")

    def __init__(self, n: int, terms: Mapping[int, object] | None = None, field=QQ):
        self.n = n
        self.field = field
        clean = {}
        if terms:
            for w, c in terms.items():
                c = field.normalize(c)
                if c:
                    clean[w] = c
        self.terms = clean

    @classmethod
    def _raw(cls, n: int, terms: dict, field) -> SparseVector:
        # terms already normalised and zero-free
        v = cls.__new__(cls)
        v.n = n
        v.terms = terms
        v.field = field
        return v

    @classmethod
    def basis(cls, n: int, word: int | str | Sequence[int], field=QQ) -> SparseVector:
        code = word if isinstance(word, int) else encode(word, n)
        return cls._raw(n, {code: field.one}, field)

    @classmethod
    def zero(cls, n: int, field=QQ) -> SparseVector:
        return cls._raw(n, {}, field)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[int]:
        return iter(self.terms)

    def items(self):
        return self.terms.items()

    def __getitem__(self, word) -> object:
        code = word if isinstance(word, int) else encode(word, self.n)
        c = self.terms.get(code, self.field.zero)
        return self.field.to_scalar(c)

    def _check(self, other: SparseVector):
        if self.n != other.n:
            raise ValueError("vectors live in different V(n)")
        if self.field != other.field:
            raise ValueError("vectors use different backends")

    def __add__(self, other: SparseVector) -> SparseVector:
        self._check(other)
        return self.axpy(self.field.one, other)

    def __sub__(self, other: SparseVector) -> SparseVector:
        self._check(other)
        return self.axpy(-self.field.one, other)

    def __neg__(self) -> SparseVector:
        return self.scale(-self.field.one)

    def axpy(self, c, other: SparseVector) -> SparseVector:
        """self + c * other."""
        self._check(other)
        c = self.field.convert(c)
        norm = self.field.normalize
        out = dict(self.terms)
        for w, v in other.terms.items():
            s = norm(out.get(w, 0) + c * v)
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return SparseVector._raw(self.n, out, self.field)

    def scale(self, c) -> SparseVector:
        c = self.field.convert(c)
        norm = self.field.normalize
        if not norm(c):
            return SparseVector.zero(self.n, self.field)
        return SparseVector._raw(
            self.n, {w: norm(c * v) for w, v in self.terms.items()}, self.field
        )

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def support(self) -> list[int]:
        return sorted(self.terms)

    def leading(self) -> tuple[int, object]:
        w = min(self.terms)
        return w, self.terms[w]

    def perm_classes(self) -> set[int]:
        return {perm_class(w, self.n) for w in self.terms}

    def to_field(self, field) -> SparseVector:
        """Reduce a rational vector into another field."""
        if field == self.field:
            return self
        if self.field != QQ:
            raise TypeError("can only convert rational vectors")
        return SparseVector(self.n, {w: field.convert(c) for w, c in self.terms.items()}, field)

    def to_json(self) -> str:
        rows = [
            {"word": word_str(w, self.n), "coeff": _coeff_str(c)}
            for w, c in sorted(self.terms.items())
        ]
        return json.dumps(rows)

    @classmethod
    def from_json(cls, text: str, field=QQ, n: int | None = None) -> SparseVector:
        rows = json.loads(text)
        if n is None:
            if not rows:
                raise ValueError("cannot infer n from an empty vector; pass n")
            n = len(rows[0]["word"]) // 4
        return cls(n, {encode(r["word"], n): field.convert(Fraction(r["coeff"])) for r in rows}, field)

    def __repr__(self):
        body = " + ".join(
            f"{_coeff_str(c)}*{word_str(w, self.n)}" for w, c in sorted(self.terms.items())
        )
        return f"SparseVector(n={self.n}, {body or '0'})"


def _coeff_str(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


# --- fragments ---------------------------------------------------------------
#
# A fragment is a small linear combination of letter strings, kept as a list
# of (letters, coefficient) pairs.  Tensoring fragments concatenates letters.

Fragment = list  # list[tuple[tuple[int, ...], coeff]]


def letters(s: str | Sequence[int]) -> Fragment:
    if isinstance(s, str):
        s = tuple(int(ch) for ch in s)
    return [(tuple(s), Fraction(1))]


def tilde_pair(q) -> Fragment:
    """q|12> + |21>."""
    if q == 0:
        raise ValueError("tilde_pair needs q != 0")
    return [((1, 2), q), ((2, 1), Fraction(1) if not isinstance(q, ModScalar) else q ** 0)]


def bracket(q, p) -> Fragment:
    """[1122]^{q,p} = q 1122 + (q/p) 1212 + p 2121 + 2211."""
    if q == 0 or p == 0:
        raise ValueError("bracket needs nonzero parameters")
    one = q ** 0 if isinstance(q, ModScalar) else Fraction(1)
    return [((1, 1, 2, 2), q), ((1, 2, 1, 2), q / p), ((2, 1, 2, 1), p), ((2, 2, 1, 1), one)]


def tensor(*frags: Fragment) -> Fragment:
    out: Fragment = [((), Fraction(1))]
    for frag in frags:
        out = [(a + b, ca * cb) for a, ca in out for b, cb in frag]
    return out


def vector_from_fragment(frag: Fragment, field=QQ) -> SparseVector:
    L = len(frag[0][0])
    if L % 4:
        raise ValueError("fragment does not fill a whole word")
    n = L // 4
    acc: dict[int, object] = {}
    for lets, c in frag:
        w = encode(lets, n)
        acc[w] = acc.get(w, 0) + field.convert(c)
    return SparseVector(n, acc, field)


def wrapped_bracket(q, p, middle: Fragment, field=QQ) -> SparseVector:
    """22]^{q,p} w [11 = 11w22 + (q/p) 12w12 + p 21w21 + q 22w11.

    The outer letter pairs sit at the first two and last two offsets.
    """
    if q == 0 or p == 0:
        raise ValueError("bracket needs nonzero parameters")
    outer = [((1, 1), (2, 2), Fraction(1)), ((1, 2), (1, 2), q / p), ((2, 1), (2, 1), p), ((2, 2), (1, 1), q)]
    frag = [(head + m + tail, c * cm) for head, tail, c in outer for m, cm in middle]
    return vector_from_fragment(frag, field)


def bracket_vectors(q, p, middle: Fragment | None = None, wrapped: bool = False, field=QQ) -> SparseVector:
    """Contiguous [1122]^{q,p} (optionally flanked by nothing) or the wrapped form."""
    if wrapped:
        return wrapped_bracket(q, p, middle if middle is not None else [((), Fraction(1))], field)
    frag = bracket(q, p)
    if middle is not None:
        frag = tensor(frag, middle)
    return vector_from_fragment(frag, field)


def u_of(v: SparseVector) -> int:
    """Lexicographically least word with nonzero coefficient."""
    if not v.terms:
        raise ValueError("u undefined on zero")
    return min(v.terms)


def iter_words(n: int) -> Iterable[int]:
    return range(1 << (4 * n))
