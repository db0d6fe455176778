"""Exact rank of spans of sparse vectors, over QQ or several large primes.

A :class:`SpanBasis` keeps one elimination block per permutation class as
long as every inserted vector is class-homogeneous (the generators never mix
classes, so almost every workload qualifies).  A vector touching two classes
collapses the blocks into a single global one.

Rational blocks hold primitive integer rows (fraction-free elimination with
content removal).  Modular blocks use the compiled echelon when it is
available, indexed by a word's position inside its class.
"""
from __future__ import annotations

import hashlib
import heapq
import json
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Callable, Iterable

from sblob.kernels import ModEchelon, PyModEchelon
from sblob.scalars import PRIMES, QQ, PrimeField, SigmaParams
from sblob.tensor_space import SparseVector, class_words, perm_class

GLOBAL = None  # block key of the merged, unblocked block


@lru_cache(maxsize=None)
def _class_index(n: int, r: int) -> tuple[tuple[int, ...], dict[int, int]]:
    words = tuple(class_words(n, r))
    return words, {w: i for i, w in enumerate(words)}


def _homogeneous_class(v: SparseVector):
    it = iter(v.terms)
    r = perm_class(next(it), v.n)
    for w in it:
        if perm_class(w, v.n) != r:
            return GLOBAL
    return r


# --- rational block ----------------------------------------------------------


def _primitive(terms: dict) -> dict[int, int]:
    """Clear denominators and content of a Fraction-valued dict."""
    den = reduce(lcm, (Fraction(c).denominator for c in terms.values()), 1)
    ints = {w: int(Fraction(c) * den) for w, c in terms.items()}
    g = reduce(gcd, ints.values(), 0)
    return {w: c // g for w, c in ints.items()}


class _RationalBlock:
    def __init__(self):
        self.rows: dict[int, dict[int, int]] = {}

    def _reduce(self, work: dict[int, int]):
        heap = list(work)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = work.get(c)
            if not a:
                continue
            row = self.rows.get(c)
            if row is None:
                return work, c
            pv = row[c]
            g = gcd(a, pv)
            ma, mb = pv // g, a // g
            out = {j: ma * x for j, x in work.items()}
            for j, x in row.items():
                s = out.get(j, 0) - mb * x
                if s:
                    if j not in out:
                        heapq.heappush(heap, j)
                    out[j] = s
                else:
                    out.pop(j, None)
            if out:
                g = reduce(gcd, out.values(), 0)
                if g > 1:
                    out = {j: x // g for j, x in out.items()}
            work = out
        return work, None

    def insert(self, terms: dict) -> bool:
        if not terms:
            return False
        work, c = self._reduce(_primitive(terms))
        if c is None:
            return False
        if work[c] < 0:
            work = {j: -x for j, x in work.items()}
        self.rows[c] = work
        return True

    def contains(self, terms: dict) -> bool:
        return not terms or self._reduce(_primitive(terms))[1] is None

    @property
    def rank(self) -> int:
        return len(self.rows)

    def vectors(self):
        for c in sorted(self.rows):
            row = self.rows[c]
            pv = row[c]
            yield c, {j: Fraction(x, pv) for j, x in row.items()}


# --- modular block -----------------------------------------------------------


class _ModBlock:
    def __init__(self, n: int, r, prime: int):
        self.prime = prime
        if r is GLOBAL:
            # dense rows over all 16^n columns would not fit at n = 4
            self.words = None
            self.index = None
            self.ech = PyModEchelon(1 << (4 * n), prime)
        else:
            self.words, self.index = _class_index(n, r)
            self.ech = ModEchelon(len(self.words), prime)

    def _cols(self, terms: dict):
        if self.index is None:
            return list(terms), list(terms.values())
        idx = self.index
        return [idx[w] for w in terms], list(terms.values())

    def insert(self, terms: dict) -> bool:
        return bool(terms) and self.ech.insert(*self._cols(terms))

    def contains(self, terms: dict) -> bool:
        return not terms or self.ech.contains(*self._cols(terms))

    @property
    def rank(self) -> int:
        return self.ech.rank

    def vectors(self):
        words = self.words
        for c in self.ech.pivots():
            row = self.ech.row_for_pivot(c)
            if words is None:
                yield c, dict(row)
            else:
                yield words[c], {words[j]: x for j, x in row}


# --- span basis --------------------------------------------------------------


class SpanBasis:
    """Incremental echelon basis of a subspace of V(n).

    ``backend`` is ``"rational"`` or a prime from :data:`PRIMES`.
    """

    def __init__(self, n: int, backend="rational", blocked: bool = True):
        self.n = n
        self.backend = backend
        self.field = QQ if backend == "rational" else PrimeField(int(backend))
        self.blocked = blocked
        self._blocks: dict = {}
        self._history: list[dict] | None = None if blocked else []

    def _new_block(self, r):
        if self.field is QQ:
            return _RationalBlock()
        return _ModBlock(self.n, r, self.field.prime)

    def _prepare(self, v: SparseVector) -> dict:
        if v.n != self.n:
            raise ValueError(f"vector in V({v.n}) offered to a basis of V({self.n})")
        if v.field != self.field:
            if v.field != QQ:
                raise ValueError(f"backend mismatch: {v.field!r} vs {self.field!r}")
            v = v.to_field(self.field)
        return v.terms

    def _key(self, terms: dict):
        if not self.blocked:
            return GLOBAL
        return _homogeneous_class(SparseVector._raw(self.n, terms, self.field))

    def _unblock(self):
        # replay stored rows into one global block
        rows = [terms for blk in self._blocks.values() for _, terms in blk.vectors()]
        self.blocked = False
        g = self._new_block(GLOBAL)
        for terms in rows:
            if self.field is QQ:
                g.insert(terms)
            else:
                g.insert({w: int(x) for w, x in terms.items()})
        self._blocks = {GLOBAL: g}

    def insert(self, v: SparseVector) -> bool:
        """Reduce ``v`` against the basis and keep the remainder.

        Returns True when ``v`` was absorbed (already in the span).
        """
        terms = self._prepare(v)
        if not terms:
            return True
        key = self._key(terms)
        if key is GLOBAL and self.blocked:
            self._unblock()
        blk = self._blocks.get(key)
        if blk is None:
            blk = self._blocks[key] = self._new_block(key)
        return not blk.insert(terms)

    def in_span(self, v: SparseVector) -> bool:
        terms = self._prepare(v)
        if not terms:
            return True
        if self.blocked:
            key = self._key(terms)
            if key is GLOBAL:
                # split by class; each piece must lie in its block
                parts: dict[int, dict] = {}
                for w, c in terms.items():
                    parts.setdefault(perm_class(w, self.n), {})[w] = c
                return all(self._part_in_span(r, t) for r, t in parts.items())
            return self._part_in_span(key, terms)
        return self._blocks[GLOBAL].contains(terms) if GLOBAL in self._blocks else False

    def _part_in_span(self, r, terms) -> bool:
        blk = self._blocks.get(r)
        return blk is not None and blk.contains(terms)

    @property
    def rank(self) -> int:
        return sum(b.rank for b in self._blocks.values())

    def block_ranks(self) -> dict:
        return {k: b.rank for k, b in sorted(self._blocks.items(), key=lambda kv: (kv[0] is None, kv[0] or 0))}

    def vectors(self) -> list[SparseVector]:
        """Basis vectors with leading coefficient 1, sorted by pivot word."""
        out = []
        for blk in self._blocks.values():
            for c, terms in blk.vectors():
                out.append((c, SparseVector(self.n, terms, self.field)))
        out.sort(key=lambda t: t[0])
        return [v for _, v in out]

    def pivots(self) -> list[int]:
        return [v.leading()[0] for v in self.vectors()]


def insert(basis: SpanBasis, v: SparseVector) -> tuple[SpanBasis, bool]:
    return basis, basis.insert(v)


def in_span(basis: SpanBasis, v: SparseVector) -> bool:
    return basis.in_span(v)


# --- rank reports ------------------------------------------------------------


@dataclass
class RankReport:
    rank: int | None
    backend: str
    primes: list[int] = field(default_factory=list)
    ranks: dict[str, int] = field(default_factory=dict)
    agreement: bool = True
    elapsed: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("elapsed")
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> RankReport:
        return cls(**d)


VectorSource = Callable[[object], Iterable[SparseVector]]


def _source(vectors) -> VectorSource:
    if callable(vectors):
        return vectors
    vecs = list(vectors)
    return lambda field: (v.to_field(field) for v in vecs)


def _block_task(args) -> int:
    n, backend, r, term_list = args
    basis = SpanBasis(n, backend, blocked=r is not GLOBAL)
    f = basis.field
    for terms in term_list:
        basis.insert(SparseVector._raw(n, terms, f))
    return basis.rank


def _rank_one(n: int, backend, source: VectorSource, jobs: int) -> int:
    f = QQ if backend == "rational" else PrimeField(int(backend))
    if jobs <= 1:
        basis = SpanBasis(n, backend)
        for v in source(f):
            basis.insert(v)
        return basis.rank
    groups: dict = {}
    for v in source(f):
        if not v:
            continue
        groups.setdefault(_homogeneous_class(v), []).append(v.terms)
    if GLOBAL in groups:
        allterms = [t for g in groups.values() for t in g]
        return _block_task((n, backend, GLOBAL, allterms))
    tasks = [(n, backend, r, g) for r, g in sorted(groups.items())]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(_block_task, tasks))


def rank_of(
    vectors,
    n: int | None = None,
    backend: str = "rational",
    primes: int | list[int] = 3,
    jobs: int = 1,
) -> RankReport:
    """Rank of a family of vectors.

    ``vectors`` is either an iterable of rational vectors or a callable
    ``field -> iterable`` that generates the family directly in a field (the
    fast path for modular runs).  ``backend`` is rational, modular or both;
    modular ranks are computed separately for each prime and compared.
    """
    if backend not in ("rational", "modular", "both"):
        raise ValueError(f"unknown backend {backend!r}")
    plist = list(PRIMES[:primes]) if isinstance(primes, int) else list(primes)
    if backend != "rational" and not plist:
        raise ValueError("modular backend needs at least one prime")
    source = _source(vectors)
    if n is None:
        first = next(iter(source(QQ)), None)
        if first is None:
            return RankReport(0, backend, [] if backend == "rational" else plist, {}, True, 0.0)
        n = first.n
    t0 = time.perf_counter()
    ranks: dict[str, int] = {}
    if backend in ("rational", "both"):
        ranks["rational"] = _rank_one(n, "rational", source, jobs)
    if backend in ("modular", "both"):
        for p in plist:
            ranks[str(p)] = _rank_one(n, p, source, jobs)
    values = set(ranks.values())
    agreement = len(values) == 1
    rank = ranks["rational"] if "rational" in ranks else (values.pop() if agreement else None)
    return RankReport(
        rank=rank,
        backend=backend,
        primes=[] if backend == "rational" else plist,
        ranks=ranks,
        agreement=agreement,
        elapsed=time.perf_counter() - t0,
    )


# --- result cache ------------------------------------------------------------


def sigma_hash(sigma: SigmaParams) -> str:
    text = ",".join(sigma.as_strings())
    return hashlib.sha256(text.encode()).hexdigest()[:16]


class RankCache:
    """On-disk JSON cache of rank reports; writes are atomic."""

    def __init__(self, directory: str | os.PathLike | None):
        self.directory = None if directory is None else os.fspath(directory)

    @staticmethod
    def key(workload: str, n: int, sigma: SigmaParams, backend: str, primes=()) -> str:
        raw = json.dumps([workload, n, sigma_hash(sigma), backend, list(primes)])
        return hashlib.sha256(raw.encode()).hexdigest()

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, f"{key}.json")

    def get(self, key: str) -> RankReport | None:
        if self.directory is None:
            return None
        try:
            with open(self._path(key)) as fh:
                return RankReport.from_dict(json.load(fh))
        except (FileNotFoundError, json.JSONDecodeError, TypeError):
            return None

    def put(self, key: str, report: RankReport) -> None:
        if self.directory is None:
            return
        os.makedirs(self.directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(report.to_dict(timing=True), fh, sort_keys=True)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def cached_rank(
    cache: RankCache | None,
    workload: str,
    n: int,
    sigma: SigmaParams,
    vectors,
    backend: str = "rational",
    primes: int | list[int] = 3,
    jobs: int = 1,
) -> RankReport:
    plist = list(PRIMES[:primes]) if isinstance(primes, int) else list(primes)
    if cache is None:
        return rank_of(vectors, n, backend, plist, jobs)
    key = RankCache.key(workload, n, sigma, backend, plist if backend != "rational" else [])
    hit = cache.get(key)
    if hit is not None:
        return hit
    report = rank_of(vectors, n, backend, plist, jobs)
    cache.put(key, report)
    return report
