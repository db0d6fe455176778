"""Permutation modules, localisation, the counit image, the E_n basis and
standard multiplicities of the permutation modules.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from sblob.algebra import (
    RelationReport,
    RelationResult,
    corner_generators,
    first_witness,
    pi_from_sigma,
    sigma_L,
    sigma_R,
    x_elements,
)
from sblob.combinatorics import AB, d_expected, dim_delta, labels, v
from sblob.r_operators import GeneratorOp, representation
from sblob.rank_engine import PRIMES, RankCache, SpanBasis, cached_rank
from sblob.scalars import QQ, SigmaParams, quantum_integer
from sblob.tensor_space import (
    SparseVector,
    all_words,
    bracket,
    class_dim,
    class_words,
    decode,
    encode,
    letters,
    perm_class,
    tensor,
    tilde_pair,
    u_of,
    vector_from_fragment,
    word_str,
    wrapped_bracket,
)


class GenericityError(RuntimeError):
    """Backends or recursion routes disagree: the parameter point is not generic."""


class MultiplicityError(GenericityError):
    pass


@dataclass(frozen=True)
class PermModule:
    n: int
    r: int

    def __post_init__(self):
        if not -2 * self.n <= self.r <= 2 * self.n:
            raise ValueError(f"class {self.r} outside [-{2 * self.n}, {2 * self.n}]")

    @property
    def dim(self) -> int:
        return class_dim(self.n, self.r)

    def words(self) -> list[int]:
        return class_words(self.n, self.r)


def check_perm_invariance(n: int, sigma: SigmaParams) -> bool:
    """Every generator image of every basis word stays in the word's class."""
    R = representation(n, sigma)
    for s in R.symbols():
        for w in all_words(n):
            r = perm_class(w, n)
            if any(perm_class(w2, n) != r for w2, _ in R.word_image(s, w)):
                return False
    return True


# --- localisation ------------------------------------------------------------


def idempotent_image(n: int, sigma: SigmaParams, side: str, field=QQ):
    """Generator of the images of the normalised idempotent on basis words."""
    if side not in ("e", "f"):
        raise ValueError("side must be 'e' or 'f'")
    R = representation(n, sigma, field)
    a, b = (sigma.x, sigma.y) if side == "e" else (sigma.z, sigma.w)
    scale = field.convert(1 / (quantum_integer(2, a) * quantum_integer(2, b)))
    norm = field.normalize
    for w in all_words(n):
        img = R.word_image(side, w)
        if img:
            yield SparseVector._raw(n, {k: norm(c * scale) for k, c in img}, field)


def localize_basis(n: int, sigma: SigmaParams, side: str = "e", backend="rational") -> SpanBasis:
    """Echelon basis of (idempotent) . V(n)."""
    basis = SpanBasis(n, backend)
    for vec in idempotent_image(n, sigma, side, basis.field):
        basis.insert(vec)
    return basis


def theta_embed(n: int, sigma: SigmaParams, vec: SparseVector) -> SparseVector:
    """Embed V(n-1) into V(n) by inserting tilde pairs at positions
    (-n, -n+1) and (n, n+1)."""
    if n < 2:
        raise ValueError("theta needs n >= 2")
    if vec.n != n - 1:
        raise ValueError("theta takes a vector of V(n-1)")
    m = n - 1
    tx, ty = tilde_pair(sigma.x), tilde_pair(sigma.y)
    out: dict = {}
    for w, c in vec.terms.items():
        lets = decode(w, m)
        frag = tensor(_frag(lets[:m]), tx, _frag(lets[m : 3 * m]), ty, _frag(lets[3 * m :]))
        for word, cc in frag:
            k = encode(word, n)
            out[k] = out.get(k, 0) + c * cc
    return SparseVector(n, out, vec.field)


def _frag(lets):
    return letters(lets) if lets else [((), Fraction(1))]


def verify_theta_intertwines(n: int, sigma: SigmaParams) -> RelationReport:
    """theta(g . alpha) = eta(g) theta(alpha) for every generator g of the
    level-(n-1) algebra at the left-twisted point and every basis word alpha."""
    pi = pi_from_sigma(sigma, n)
    _, eta = corner_generators(n, pi, "e")
    small = representation(n - 1, sigma_L(sigma))
    big = representation(n, sigma)
    report = RelationReport(n)
    for g in small.symbols():
        coeff, word = eta[g]
        bad = None
        for alpha in all_words(n - 1):
            lhs = theta_embed(n, sigma, small.apply(GeneratorOp((g,), n - 1), SparseVector.basis(n - 1, alpha)))
            rhs = big.apply_terms(word, theta_embed(n, sigma, SparseVector.basis(n - 1, alpha)).terms)
            rhs = {k: c * coeff for k, c in rhs.items()}
            if lhs.terms != rhs:
                bad = alpha
                break
        report.results.append(
            RelationResult(f"theta[{g}]", "holds" if bad is None else "fails", None if bad is None else word_str(bad, n - 1))
        )
    return report


# --- counit image ------------------------------------------------------------


def counit_vectors(n: int, sigma: SigmaParams):
    """Field -> stream of x_k . w for every x_k and basis word w."""
    xs = [x.symbols for x in x_elements(n)]

    def gen(field):
        R = representation(n, sigma, field)
        for syms in xs:
            for w in all_words(n):
                terms = R.apply_terms(syms, {w: field.one})
                if terms:
                    yield SparseVector._raw(n, terms, field)

    return gen


def counit_basis(n: int, sigma: SigmaParams, backend="rational") -> SpanBasis:
    basis = SpanBasis(n, backend)
    for vec in counit_vectors(n, sigma)(basis.field):
        basis.insert(vec)
    return basis


def domain_dim(n: int) -> int:
    """Dimension of the globalised localisation of V(n), from standard-module
    bookkeeping: each Delta_(n-1)(mu) layer of V(n-1) becomes Delta_n(-mu)."""
    if n == 1:
        return dim_delta(1, 0)
    return sum(v(abs(mu)) * dim_delta(n, -mu) for mu in labels(n - 1))


@dataclass
class CounitCertificate:
    n: int
    sigma: list[str]
    seed: int | None
    backend: str
    primes: list[int]
    d_expected: int
    d_domain: int
    d_observed: int | None
    ranks: dict[str, int]
    agreement: bool
    injective: bool
    probabilistic: bool = False
    E_stats: dict | None = None
    certified: bool = False
    failures: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def counit_image(
    n: int,
    sigma: SigmaParams,
    backend: str = "rational",
    primes: int | list[int] = 3,
    seed: int | None = None,
    cache: RankCache | None = None,
    jobs: int = 1,
) -> CounitCertificate:
    """Rank of the counit image; raises GenericityError if backends disagree."""
    rep = cached_rank(cache, "counit", n, sigma, counit_vectors(n, sigma), backend, primes, jobs)
    if not rep.agreement:
        raise GenericityError(f"backends disagree on the counit rank: {rep.ranks}")
    cert = CounitCertificate(
        n=n,
        sigma=sigma.as_strings(),
        seed=seed,
        backend=backend,
        primes=rep.primes,
        d_expected=d_expected(n),
        d_domain=domain_dim(n),
        d_observed=rep.rank,
        ranks=rep.ranks,
        agreement=rep.agreement,
        injective=rep.rank == d_expected(n),
        probabilistic=backend == "modular",
    )
    if not cert.injective:
        cert.failures.append(f"counit rank {rep.rank} != {cert.d_expected}")
    return cert


# --- the E_n basis -----------------------------------------------------------


def _normalize_leading(vec: SparseVector) -> SparseVector:
    _, c = vec.leading()
    return vec.scale(vec.field.inv(c))


def _words_of_length(k: int):
    return product((1, 2), repeat=k)


def _decorate(vec: SparseVector, s: tuple[int, int, int, int]) -> SparseVector:
    """s1 v_L s2 s3 v_R s4 from a vector of V(n-1) split into halves."""
    m = vec.n
    half = 2 * m
    s1, s2, s3, s4 = s
    out = {}
    for w, c in vec.terms.items():
        lets = decode(w, m)
        out[encode((s1,) + lets[:half] + (s2, s3) + lets[half:] + (s4,))] = c
    return SparseVector._raw(m + 1, out, vec.field)


def _b_shape(n: int, sigma: SigmaParams, vl, vr) -> SparseVector:
    frag = tensor(tilde_pair(sigma.a), _frag(vl), tilde_pair(sigma.b), tilde_pair(sigma.c), _frag(vr), tilde_pair(sigma.d))
    return vector_from_fragment(frag)


def c_closed_form(n: int, sigma: SigmaParams, vl, vr) -> SparseVector:
    """22]^(ad, w) v_L [1122]^(bc, z) v_R [11."""
    a, b, c, d, x, y, z, w = sigma.as_tuple()
    middle = tensor(_frag(vl), bracket(b * c, z), _frag(vr))
    return wrapped_bracket(a * d, w, middle)


def _middle_pairs(n: int, sigma: SigmaParams):
    """(v_L, v_R) pairs allowed in the B and C families at level n."""
    k = 2 * n - 4
    if n >= 3:
        EA, EB, _ = construct_E(n - 2, sigma)
        excluded = {u_of(vec) for vec in EA + EB}
    else:
        excluded = set()
    for word in _words_of_length(2 * k):
        if word and encode(word) in excluded:
            continue
        yield word[:k], word[k:]


@lru_cache(maxsize=16)
def _construct_E(n: int, sigma: SigmaParams):
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        a_vec = vector_from_fragment(tensor(tilde_pair(sigma.x), tilde_pair(sigma.y)))
        c_vec = _normalize_leading(vector_from_fragment(bracket(sigma.z / sigma.w, sigma.z)))
        return (a_vec,), (), (c_vec,)
    prevA, prevB, _ = _construct_E(n - 1, sigma)
    EA = tuple(_decorate(vec, s) for vec in prevA + prevB for s in product((1, 2), repeat=4))
    R = representation(n, sigma)
    EB, EC = [], []
    for vl, vr in _middle_pairs(n, sigma):
        b_vec = _b_shape(n, sigma, vl, vr)
        EB.append(b_vec)
        EC.append(_normalize_leading(R.apply("f", b_vec)))
    return EA, tuple(EB), tuple(EC)


def construct_E(n: int, sigma: SigmaParams) -> tuple[list, list, list]:
    """The three families (A, B, C) of the candidate basis of the counit image."""
    EA, EB, EC = _construct_E(n, sigma)
    return list(EA), list(EB), list(EC)


def _proportional(u: SparseVector, w: SparseVector) -> bool:
    if set(u.terms) != set(w.terms):
        return False
    k = next(iter(u.terms))
    ratio = u.terms[k] / w.terms[k]
    return all(u.terms[j] == ratio * w.terms[j] for j in u.terms)


def certify_E(
    n: int,
    sigma: SigmaParams,
    cert: CounitCertificate | None = None,
    backend: str = "rational",
    primes: int | list[int] = 3,
) -> CounitCertificate:
    """Check cardinalities, independence and span equality of E_n against the
    counit image; updates and returns the certificate."""
    if cert is None:
        cert = counit_image(n, sigma, backend, primes)
    EA, EB, EC = construct_E(n, sigma)
    E = EA + EB + EC
    if backend == "rational":
        runs = ["rational"]
    elif backend == "modular":
        runs = list(PRIMES[:primes]) if isinstance(primes, int) else list(primes)
    else:
        runs = ["rational"] + (list(PRIMES[:primes]) if isinstance(primes, int) else list(primes))
    ranks, span_equal = {}, True
    for be in runs:
        eb = SpanBasis(n, be)
        for vec in E:
            eb.insert(vec)
        ranks[str(be)] = eb.rank
        pb = counit_basis(n, sigma, be)
        span_equal &= all(pb.in_span(vec) for vec in E)
        span_equal &= all(eb.in_span(vec) for vec in pb.vectors())
    if len(set(ranks.values())) != 1:
        raise GenericityError(f"backends disagree on rank(E_{n}): {ranks}")
    rank = next(iter(ranks.values()))
    A, B = AB(n)
    expected_sizes = (1, 0, 1) if n == 1 else (A, B, B)
    closed = True
    if n >= 2:
        pairs = list(_middle_pairs(n, sigma))
        closed = all(_proportional(c, c_closed_form(n, sigma, vl, vr)) for c, (vl, vr) in zip(EC, pairs))
    stats = {
        "sizes": [len(EA), len(EB), len(EC)],
        "expected_sizes": list(expected_sizes),
        "rank": rank,
        "ranks": ranks,
        "size": len(E),
        "span_equal": span_equal,
        "closed_form_C": closed,
    }
    cert.E_stats = stats
    checks = [
        (tuple(stats["sizes"]) == expected_sizes, f"|E| = {tuple(stats['sizes'])}, expected {expected_sizes}"),
        (rank == len(E), f"rank(E) = {rank} < |E| = {len(E)}"),
        (rank == cert.d_expected, f"rank(E) = {rank} != d_n = {cert.d_expected}"),
        (span_equal, "span(E) differs from the counit image"),
        (closed, "C family differs from the wrapped bracket form"),
    ]
    cert.failures.extend(msg for ok, msg in checks if not ok)
    cert.certified = cert.injective and all(ok for ok, _ in checks)
    return cert


# --- action table ------------------------------------------------------------


def action_table_identities(n: int, pi) -> list[tuple[str, tuple, tuple]]:
    """Generator action on x_j written as operator identities on V(n)."""
    one = Fraction(1)
    X = [x.symbols for x in x_elements(n)]
    dl = pi.delta_L
    out = [("e.x0", (one, ("e",) + X[0]), (dl, X[0]))]
    for j in range(1, n):
        out.append((f"U{j}.x{j}", (one, (f"U{j}",) + X[j]), (pi.delta, X[j])))
    out.append((f"f.x{n}", (one, ("f",) + X[n]), (pi.delta_R, X[n])))
    for j in range(1, n):
        out.append((f"U{j}.x{j - 1}", (one, (f"U{j}",) + X[j - 1]), (one, X[j])))
    out.append((f"f.x{n - 1}", (one, ("f",) + X[n - 1]), (one, X[n])))
    for j in range(1, n - 1):
        out.append((f"U{j}.x{j + 1}", (one, (f"U{j}",) + X[j + 1]), (one, X[j])))
    for j in range(0, n):
        for k in range(j + 2, n):
            out.append((f"U{k}.x{j}", (one, (f"U{k}",) + X[j]), (one / dl**2, X[j] + ("e", f"U{k}", "e"))))
    for j in range(0, n - 1):
        out.append((f"f.x{j}", (one, ("f",) + X[j]), (one / dl**2, X[j] + ("e", "f", "e"))))
    for j in range(1, n):
        chain = tuple(f"U{i}" for i in range(j, 0, -1))
        out.append((f"e.x{j}", (one, ("e",) + X[j]), (one / dl, X[0] + ("e",) + chain + ("e",))))
    for j in range(1, n):
        for k in range(1, j - 1):
            chain = tuple(f"U{i}" for i in range(j, k + 1, -1))
            out.append((f"U{k}.x{j}", (one, (f"U{k}",) + X[j]), (one, chain + X[k])))
    return out


def action_table_check(n: int, sigma: SigmaParams) -> RelationReport:
    pi = pi_from_sigma(sigma, n)
    R = representation(n, sigma)
    report = RelationReport(n)
    for name, lhs, rhs in action_table_identities(n, pi):
        w = first_witness(R, lhs, rhs)
        report.results.append(RelationResult(name, "holds" if w is None else "fails", None if w is None else word_str(w, n)))
    return report


# --- standard multiplicities -------------------------------------------------


@dataclass
class MultTable:
    """m[lam][r] = (M_n(r) : Delta_n(lam)) for lam in Lambda_n, -2n <= r <= 2n."""

    n: int
    m: dict[tuple[int, int], int]
    route_checks: int = 0

    def get(self, lam: int, r: int) -> int:
        return self.m.get((lam, r), 0)

    def by_abs(self, k: int, r: int) -> int:
        # lam and -lam carry the same multiplicity whenever both are labels
        return self.get(-k, r)

    def rows(self) -> list[list[int | None]]:
        """Layout with rows r = 0..2n and columns |lam| = 0..n; None marks
        the structurally empty cells r > 2|lam|."""
        return [[self.by_abs(k, r) if r <= 2 * k else None for k in range(self.n + 1)] for r in range(2 * self.n + 1)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["r"] + [f"|lambda|={k}" for k in range(self.n + 1)])
        for r, row in enumerate(self.rows()):
            wr.writerow([r] + ["" if x is None else x for x in row])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [{"n": self.n, "lambda": lam, "r": r, "m": val} for (lam, r), val in sorted(self.m.items())]
        return json.dumps(rows)


def _base_table(sigma: SigmaParams) -> dict[tuple[int, int], int]:
    R = representation(1, sigma)
    out = {}
    for r in range(-2, 3):
        basis = SpanBasis(1)
        for w in class_words(1, r):
            img = R.word_image("e", w)
            if img:
                basis.insert(SparseVector._raw(1, dict(img), QQ))
        m0 = basis.rank
        out[(0, r)] = m0
        out[(-1, r)] = class_dim(1, r) - 2 * m0
    return out


@lru_cache(maxsize=None)
def _table(n: int, sigma: SigmaParams) -> tuple[tuple, int]:
    if n == 1:
        m = _base_table(sigma)
        checks = 0
    else:
        left, c1 = _table(n - 1, sigma_L(sigma))
        right, c2 = _table(n - 1, sigma_R(sigma))
        left, right = dict(left), dict(right)
        checks = c1 + c2
        m = {}
        for r in range(-2 * n, 2 * n + 1):
            for lam in labels(n):
                if lam == -n:
                    continue
                vals = []
                if -lam in labels(n - 1):
                    vals.append(left.get((-lam, r), 0))
                if lam in labels(n - 1):
                    vals.append(right.get((lam, r), 0))
                if len(set(vals)) != 1:
                    raise MultiplicityError(f"routes disagree at n={n}, lambda={lam}, r={r}: {vals}")
                checks += len(vals) - 1
                m[(lam, r)] = vals[0]
            rest = class_dim(n, r) - sum(m[(lam, r)] * dim_delta(n, lam) for lam in labels(n) if lam != -n)
            m[(-n, r)] = rest
    for key, val in m.items():
        if val < 0:
            raise MultiplicityError(f"negative multiplicity at n={n}, (lambda, r)={key}: {val}")
    return tuple(sorted(m.items())), checks


def multiplicities(n: int, sigma: SigmaParams) -> MultTable:
    """Standard multiplicities of the permutation modules of V(n).

    The level-1 values come from ranks of e on each class; each later level
    is read off the level below through both localisation functors (which
    must agree), and the bottom label takes the remaining dimension.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    m, checks = _table(n, sigma)
    return MultTable(n, dict(m), checks)


def full_tilting_bookkeeping(table: MultTable, previous: MultTable | None = None) -> RelationReport:
    """Dimension and multiplicity identities a full tilting decomposition needs."""
    n = table.n
    report = RelationReport(n)

    def add(name, ok, detail=None):
        report.results.append(RelationResult(name, "holds" if ok else "fails", None if ok else detail))

    for lam in labels(n):
        total = sum(table.get(lam, r) for r in range(-2 * n, 2 * n + 1))
        add(f"column-sum[{lam}]", total == v(abs(lam)), f"{total} != {v(abs(lam))}")
        add(f"present[{lam}]", total > 0, "label missing from V(n)")
    for r in range(-2 * n, 2 * n + 1):
        total = sum(table.get(lam, r) * dim_delta(n, lam) for lam in labels(n))
        add(f"row-dim[{r}]", total == class_dim(n, r), f"{total} != {class_dim(n, r)}")
        sym = all(table.get(lam, r) == table.get(lam, -r) for lam in labels(n))
        add(f"symmetry[{r}]", sym, f"M({r}) and M({-r}) differ")
    extreme = all(table.get(lam, 2 * n) == (1 if lam == -n else 0) for lam in labels(n))
    add("extreme-class", extreme, f"M({2 * n}) is not Delta({-n})")
    for lam in labels(n):
        if -lam in labels(n):
            same = all(table.get(lam, r) == table.get(-lam, r) for r in range(-2 * n, 2 * n + 1))
            add(f"sign[{lam}]", same, f"lambda={lam} and {-lam} differ")
    if previous is not None:
        assert previous.n == n - 1
        stable = all(
            table.get(lam, r) == previous.get(lam, r)
            for lam in labels(n - 1)
            for r in range(-2 * (n - 1), 2 * (n - 1) + 1)
        )
        add("stability", stable, "differs from the previous level")
    return report
