"""Parameters, relation checks and distinguished elements of b'_n.

Relations are checked on the tensor representation: both sides of an
identity are applied to every basis word of V(n) and compared exactly.  An
identity side is a short sum of terms ``coeff * word`` where ``word`` is a
tuple of generator symbols (rightmost acts first).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from sblob.r_operators import GeneratorOp, Representation, representation
from sblob.scalars import QQ, SigmaParams, quantum_integer
from sblob.tensor_space import all_words, word_str

__all__ = [
    "SigmaParams",
    "PiParams",
    "pi_from_sigma",
    "sigma_L",
    "sigma_R",
    "RelationResult",
    "RelationReport",
    "relation_instances",
    "verify_relations",
    "corner_relations_check",
    "x_elements",
    "heredity_elements",
]

PI_NAMES = ("delta", "delta_L", "delta_R", "kappa_L", "kappa_R", "kappa")


@dataclass(frozen=True)
class PiParams:
    delta: Fraction
    delta_L: Fraction
    delta_R: Fraction
    kappa_L: Fraction
    kappa_R: Fraction
    kappa: Fraction

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, k) for k in PI_NAMES)

    def all_nonzero(self) -> bool:
        return all(v != 0 for v in self.as_tuple())

    def perturbed(self, name: str, by=1) -> PiParams:
        if name not in PI_NAMES:
            raise ValueError(f"unknown parameter {name!r}")
        return replace(self, **{name: getattr(self, name) + by})

    def left(self) -> PiParams:
        """Parameters of the e-corner: delta_L and kappa_L trade places."""
        return replace(self, delta_L=self.kappa_L, kappa_L=self.delta_L)

    def right(self) -> PiParams:
        """Parameters of the f-corner: delta_R and kappa_R trade places."""
        return replace(self, delta_R=self.kappa_R, kappa_R=self.delta_R)

    def as_strings(self) -> dict[str, str]:
        return {k: str(getattr(self, k)) for k in PI_NAMES}


def _parity(parity) -> str:
    if isinstance(parity, int) and not isinstance(parity, bool):
        return "odd" if parity % 2 else "even"
    if parity not in ("odd", "even"):
        raise ValueError(f"parity must be 'odd', 'even' or an integer, got {parity!r}")
    return parity


def _t(q):
    return q + 1 / q


def pi_from_sigma(sigma: SigmaParams, parity) -> PiParams:
    """The six algebra parameters realised by the tensor representation."""
    a, b, c, d, x, y, z, w = sigma.as_tuple()
    if _parity(parity) == "odd":
        ratio = x * y / (z * w)
    else:
        ratio = a * b * c * d / (x * y * z * w)
    two = quantum_integer
    return PiParams(
        delta=two(2, a) * two(2, b) * two(2, c) * two(2, d),
        delta_L=two(2, x) * two(2, y),
        delta_R=two(2, z) * two(2, w),
        kappa_L=_t(a * b / x) * _t(c * d / y),
        kappa_R=_t(a * d / w) * _t(b * c / z),
        kappa=ratio + 2 + 1 / ratio,
    )


def sigma_L(sigma: SigmaParams) -> SigmaParams:
    a, b, c, d, x, y, z, w = sigma.as_tuple()
    return SigmaParams(a, b, c, d, a * b / x, c * d / y, z, w)


def sigma_R(sigma: SigmaParams) -> SigmaParams:
    a, b, c, d, x, y, z, w = sigma.as_tuple()
    return SigmaParams(a, b, c, d, x, y, b * c / z, a * d / w)


# --- operator identities -----------------------------------------------------

Term = tuple  # (coeff, tuple of symbols)


def _expr(side) -> list[Term]:
    if isinstance(side, tuple) and len(side) == 2 and isinstance(side[1], tuple):
        return [side]
    return list(side)


def evaluate(R: Representation, side, w: int) -> dict:
    """Apply a sum of scaled generator words to the basis word ``w``."""
    f = R.field
    norm = f.normalize
    out: dict = {}
    for coeff, syms in _expr(side):
        c = f.convert(coeff)
        if not c:
            continue
        for k, v in R.apply_terms(syms, {w: f.one}).items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in ((k, norm(v)) for k, v in out.items()) if v}


def first_witness(R: Representation, lhs, rhs, words: Iterable[int] | None = None) -> int | None:
    """Least basis word on which the two sides differ, or None."""
    for w in all_words(R.n) if words is None else words:
        if evaluate(R, lhs, w) != evaluate(R, rhs, w):
            return w
    return None


@dataclass
class RelationResult:
    relation: str
    status: str  # holds | fails | vacuous
    witness: str | None = None


@dataclass
class RelationReport:
    n: int
    results: list[RelationResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != "fails" for r in self.results)

    def failures(self) -> list[RelationResult]:
        return [r for r in self.results if r.status == "fails"]

    def statuses(self) -> dict[str, str]:
        return {r.relation: r.status for r in self.results}

    def to_list(self) -> list[dict]:
        return [{"relation": r.relation, "status": r.status, "witness": r.witness} for r in self.results]

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    def extend(self, other: RelationReport) -> RelationReport:
        self.results.extend(other.results)
        return self


def _I_J(m: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """The words I and J of the level-m presentation."""
    if m % 2:
        I = tuple(f"U{i}" for i in range(1, m - 1, 2)) + ("f",)
        J = ("e",) + tuple(f"U{i}" for i in range(2, m, 2))
    else:
        I = tuple(f"U{i}" for i in range(1, m, 2))
        J = ("e",) + tuple(f"U{i}" for i in range(2, m - 1, 2)) + ("f",)
    return I, J


def relation_instances(m: int, pi: PiParams) -> list[tuple[str, Term | None, Term | None]]:
    """Every relation instance at level m as (name, lhs, rhs).

    Families with no instance at this m appear once with lhs = rhs = None.
    """
    one = Fraction(1)
    U = [f"U{i}" for i in range(1, m)]
    out: list = []

    def fam(name, items):
        items = list(items)
        if not items:
            out.append((name, None, None))
        out.extend(items)

    fam("rel1", ((f"rel1[{u}]", (one, (u, u)), (pi.delta, (u,))) for u in U))
    fam(
        "rel9",
        (
            (f"rel9[U{i}U{j}U{i}]", (one, (f"U{i}", f"U{j}", f"U{i}")), (one, (f"U{i}",)))
            for i in range(1, m)
            for j in range(1, m)
            if abs(i - j) == 1
        ),
    )
    fam(
        "rel8",
        (
            (f"rel8[U{i},U{j}]", (one, (f"U{i}", f"U{j}")), (one, (f"U{j}", f"U{i}")))
            for i in range(1, m)
            for j in range(i + 2, m)
        ),
    )
    out.append(("rel2", (one, ("e", "e")), (pi.delta_L, ("e",))))
    out.append(("rel3", (one, ("f", "f")), (pi.delta_R, ("f",))))
    if m >= 2:
        out.append(("rel4", (one, ("U1", "e", "U1")), (pi.kappa_L, ("U1",))))
        u = f"U{m - 1}"
        out.append(("rel5", (one, (u, "f", u)), (pi.kappa_R, (u,))))
    else:
        out.append(("rel4", None, None))
        out.append(("rel5", None, None))
    fam("rel10", ((f"rel10[{u}]", (one, ("e", u)), (one, (u, "e"))) for u in U[1:]))
    fam("rel11", ((f"rel11[{u}]", (one, ("f", u)), (one, (u, "f"))) for u in U[:-1]))
    if m > 1:
        out.append(("rel12", (one, ("e", "f")), (one, ("f", "e"))))
    else:
        out.append(("rel12", None, None))
    I, J = _I_J(m)
    out.append(("rel6", (one, I + J + I), (pi.kappa, I)))
    out.append(("rel7", (one, J + I + J), (pi.kappa, J)))
    return out


def _substitute(term: Term, gens: dict[str, Term]) -> Term:
    coeff, syms = term
    out: tuple = ()
    for s in syms:
        c, word = gens[s]
        coeff = coeff * c
        out = out + word
    return coeff, out


def _check_instances(R: Representation, m: int, pi: PiParams, gens: dict[str, Term] | None) -> RelationReport:
    report = RelationReport(R.n)
    for name, lhs, rhs in relation_instances(m, pi):
        if lhs is None:
            report.results.append(RelationResult(name, "vacuous"))
            continue
        if gens is not None:
            lhs, rhs = _substitute(lhs, gens), _substitute(rhs, gens)
        w = first_witness(R, lhs, rhs)
        if w is None:
            report.results.append(RelationResult(name, "holds"))
        else:
            report.results.append(RelationResult(name, "fails", word_str(w, R.n)))
    return report


def verify_relations(n: int, sigma: SigmaParams, pi: PiParams | None = None, field=QQ) -> RelationReport:
    """Check every defining relation on V(n).

    ``pi`` defaults to the parameters the representation is known to satisfy;
    passing a perturbed tuple is how negative controls are run.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if pi is None:
        pi = pi_from_sigma(sigma, n)
    return _check_instances(representation(n, sigma, field), n, pi, None)


def corner_generators(n: int, pi: PiParams, side: str = "e") -> tuple[Term, dict[str, Term]]:
    """Unit and generator images of the level-(n-1) algebra inside a corner.

    For the e-corner: e -> eU1e/dL, U_(i-1) -> eU_ie/dL^2, f -> efe/dL^2,
    with unit e/dL.  The f-corner is the mirror image.
    """
    if n < 2:
        raise ValueError("corner algebras need n >= 2")
    one = Fraction(1)
    if side == "e":
        dl = pi.delta_L
        unit = (one / dl, ("e",))
        gens = {"e": (one / dl, ("e", "U1", "e")), "f": (one / dl**2, ("e", "f", "e"))}
        for i in range(2, n):
            gens[f"U{i - 1}"] = (one / dl**2, ("e", f"U{i}", "e"))
    elif side == "f":
        dr = pi.delta_R
        u = f"U{n - 1}"
        unit = (one / dr, ("f",))
        gens = {"f": (one / dr, ("f", u, "f")), "e": (one / dr**2, ("f", "e", "f"))}
        for j in range(1, n - 1):
            gens[f"U{j}"] = (one / dr**2, ("f", f"U{j}", "f"))
    else:
        raise ValueError("side must be 'e' or 'f'")
    return unit, gens


def corner_relations_check(n: int, sigma: SigmaParams, side: str | None = None, field=QQ) -> RelationReport:
    """Check that a corner of b'_n acts on V(n) as b'_(n-1) with twisted parameters.

    Also checks that the normalised idempotent is a two-sided unit for the
    corner generators.  Both corners are checked unless ``side`` is given.
    """
    pi = pi_from_sigma(sigma, n)
    R = representation(n, sigma, field)
    report = RelationReport(n)
    for s in ("e", "f") if side is None else (side,):
        unit, gens = corner_generators(n, pi, s)
        twisted = pi.left() if s == "e" else pi.right()
        sub = _check_instances(R, n - 1, twisted, gens)
        checks = [("unit", _mul(unit, unit), unit)]
        for g, t in sorted(gens.items()):
            checks.append((f"unit-left[{g}]", _mul(unit, t), t))
            checks.append((f"unit-right[{g}]", _mul(t, unit), t))
        for name, lhs, rhs in checks:
            w = first_witness(R, lhs, rhs)
            sub.results.append(RelationResult(name, "holds" if w is None else "fails", None if w is None else word_str(w, n)))
        for r in sub.results:
            r.relation = f"{s}-corner:{r.relation}"
        report.extend(sub)
    return report


def _mul(s: Term, t: Term) -> Term:
    return s[0] * t[0], s[1] + t[1]


# --- distinguished elements --------------------------------------------------


def x_elements(n: int) -> list[GeneratorOp]:
    """x_0 = e, x_i = U_i x_(i-1) for 1 <= i < n, x_n = f x_(n-1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    xs = [GeneratorOp(("e",), n)]
    for i in range(1, n):
        xs.append(GeneratorOp((f"U{i}",) + xs[-1].symbols, n))
    xs.append(GeneratorOp(("f",) + xs[-1].symbols, n))
    return xs


@dataclass
class HeredityEntry:
    label: int
    word: GeneratorOp | None
    note: str = ""


def heredity_elements(n: int) -> dict[int, HeredityEntry]:
    """The elements g_lambda, lambda in {-n, ..., n-1}, as generator words.

    The recursion can call for U_i with i outside 1..n-1 and, for small n,
    assigns one label twice.  Ill-formed words are reported absent; on a
    clash the first assignment is kept, except that g_0 = I always wins.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    labels = range(-n, n)
    entries: dict[int, HeredityEntry] = {}
    notes: dict[int, list[str]] = {lam: [] for lam in labels}

    def word(syms: Sequence[str]) -> tuple[GeneratorOp | None, str]:
        for s in syms:
            if s.startswith("U") and not 1 <= int(s[1:]) <= n - 1:
                return None, f"needs {s}, outside U_1..U_{n - 1}"
        return GeneratorOp(tuple(syms), n), ""

    def assign(lam: int, syms, how: str, force: bool = False):
        if lam not in notes:
            return
        if syms is None:
            g, why = None, "depends on an absent element"
        else:
            g, why = word(syms)
        cur = entries.get(lam)
        if cur is not None and not force:
            if cur.word != g:
                notes[lam].append(f"{how} gives {g if g is not None else 'nothing'}; kept earlier value")
            return
        if cur is not None and cur.word != g:
            notes[lam].append(f"overrides {cur.word if cur.word is not None else 'absent'}")
        if why:
            notes[lam].append(f"{how}: {why}")
        entries[lam] = HeredityEntry(lam, g)

    assign(-n, (), "g_-n = 1")
    assign(-(n - 1), ("f",), "g_-(n-1) = f")
    assign(n - 1, ("e",), "g_(n-1) = e")
    assign(n - 2, ("e", "f"), "g_(n-2) = ef")
    for m in range(n, 2, -1):
        src = entries.get(-m)
        syms = None if src is None or src.word is None else (f"U{2 * m - 1}",) + src.word.symbols
        assign(-(m - 2), syms, f"g_-({m}-2) = U_{2 * m - 1} g_-{m}")
    for m in range(n - 1, 2, -1):
        src = entries.get(m)
        syms = None if src is None or src.word is None else (f"U{2 * (m - 1)}",) + src.word.symbols
        assign(m - 2, syms, f"g_({m}-2) = U_{2 * (m - 1)} g_{m}")
    I, _ = _I_J(n)
    assign(0, I, "g_0 = I", force=True)
    for lam in labels:
        if lam not in entries:
            entries[lam] = HeredityEntry(lam, None, "no defining rule reaches this label")
        entries[lam].note = "; ".join(notes[lam]) or entries[lam].note
    return dict(sorted(entries.items()))
