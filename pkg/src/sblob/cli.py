"""Command-line front end: ``sblob <command> [options]``.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input,
3 backends or recursion routes disagree.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

from sblob import __version__
from sblob.algebra import (
    PI_NAMES,
    RelationReport,
    RelationResult,
    corner_relations_check,
    pi_from_sigma,
    verify_relations,
)
from sblob.combinatorics import d_expected, sequences_csv, v
from sblob.kernels import KERNEL
from sblob.module_theory import (
    GenericityError,
    action_table_check,
    certify_E,
    check_perm_invariance,
    counit_image,
    full_tilting_bookkeeping,
    localize_basis,
    multiplicities,
    verify_theta_intertwines,
)
from sblob.rank_engine import PRIMES, RankCache
from sblob.scalars import SigmaParams, specialize

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int = 2
    seed: int = 0
    sigma: list[str] | None = None
    backend: str = "rational"
    primes: int = 3
    format: str | None = None
    cache_dir: str | None = None
    jobs: int = 1
    max_n: int | None = None

    def validate(self):
        if self.n < 1:
            raise InputError("--n must be >= 1")
        if self.backend not in ("rational", "modular", "both"):
            raise InputError(f"unknown backend {self.backend!r}")
        if not 1 <= self.primes <= len(PRIMES):
            raise InputError(f"--primes must be between 1 and {len(PRIMES)}")
        if self.format not in (None, "text", "json", "csv"):
            raise InputError(f"unknown format {self.format!r}")
        if self.jobs < 1:
            raise InputError("--jobs must be >= 1")
        self.sigma_params()

    def sigma_params(self) -> SigmaParams:
        if self.sigma is None:
            return specialize(self.seed)
        if len(self.sigma) != 8:
            raise InputError("--sigma takes exactly eight values a b c d x y z w")
        try:
            vals = [Fraction(s) for s in self.sigma]
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad sigma entry: {exc}") from None
        try:
            return SigmaParams(*vals)
        except ValueError as exc:
            raise InputError(str(exc)) from None

    def cache(self) -> RankCache | None:
        return RankCache(self.cache_dir) if self.cache_dir else None


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file with option values; flags override it")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--sigma", nargs=8, metavar="P/Q", help="explicit a b c d x y z w")
    p.add_argument("--backend", choices=["rational", "modular", "both"])
    p.add_argument("--primes", type=int)
    p.add_argument("--format", choices=["text", "json", "csv"])
    p.add_argument("--cache-dir", dest="cache_dir")
    p.add_argument("--jobs", type=int)
    p.add_argument("--max-n", dest="max_n", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sblob", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({KERNEL} kernel)")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "params": "print the parameters and the derived algebra parameters",
        "verify": "check the defining relations on V(n)",
        "localize": "ranks of the idempotent images and the theta check",
        "certify": "counit injectivity and the E_n basis certificate",
        "table": "standard multiplicities of the permutation modules",
        "sequences": "CSV of the integer sequences",
        "selftest": "quick end-to-end consistency run",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        _common(p)
        if name == "verify":
            p.add_argument(
                "--perturb",
                metavar="NAME[=AMOUNT]",
                help=f"shift one of {', '.join(PI_NAMES)} (default amount 1) as a negative control",
            )
            p.add_argument("--extended", action="store_true", help="also run corner, action-table and invariance checks")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    known = {f.name for f in fields(RunConfig)}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config: {exc}") from None
        if not isinstance(data, dict):
            raise InputError("config must be a JSON object")
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        for k, val in data.items():
            setattr(cfg, k, [str(s) for s in val] if k == "sigma" else val)
    for k in known:
        val = getattr(args, k, None)
        if val is not None:
            setattr(cfg, k, val)
    cfg.validate()
    return cfg


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _report_text(title: str, report: RelationReport) -> str:
    lines = [title]
    for r in report.results:
        extra = f"  witness {r.witness}" if r.witness else ""
        lines.append(f"  {r.relation:<28} {r.status}{extra}")
    return "\n".join(lines)


# --- commands ----------------------------------------------------------------


def cmd_params(cfg: RunConfig, args) -> int:
    sigma = cfg.sigma_params()
    out = {"sigma": dict(zip("abcdxyzw", sigma.as_strings()))}
    ok = True
    for parity in ("odd", "even"):
        pi = pi_from_sigma(sigma, parity)
        out[f"pi_{parity}"] = pi.as_strings()
        out[f"nonzero_{parity}"] = pi.all_nonzero()
        ok &= pi.all_nonzero()
    if (cfg.format or "text") == "json":
        _emit(json.dumps(out, sort_keys=True))
    else:
        lines = ["sigma: " + " ".join(f"{k}={val}" for k, val in out["sigma"].items())]
        for parity in ("odd", "even"):
            body = " ".join(f"{k}={val}" for k, val in out[f"pi_{parity}"].items())
            lines.append(f"pi (n {parity}): {body}")
        lines.append("all six parameters nonzero (quasi-hereditary regime)" if ok else "some parameter vanishes")
        _emit("\n".join(lines))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> int:
    limit = cfg.max_n or 3
    if cfg.n > limit:
        raise InputError(f"n={cfg.n} exceeds the configured maximum {limit} (raise --max-n)")
    sigma = cfg.sigma_params()
    pi = pi_from_sigma(sigma, cfg.n)
    if args.perturb:
        name, _, amount = args.perturb.partition("=")
        if name not in PI_NAMES:
            raise InputError(f"--perturb expects one of {PI_NAMES}")
        try:
            pi = pi.perturbed(name, Fraction(amount) if amount else 1)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    report = verify_relations(cfg.n, sigma, pi)
    sections = [("relations", report)]
    if args.extended:
        inv = RelationReport(cfg.n)
        inv.results.append(RelationResult("class-invariance", "holds" if check_perm_invariance(cfg.n, sigma) else "fails"))
        sections.append(("class invariance", inv))
        if cfg.n >= 2:
            sections.append(("corner relations", corner_relations_check(cfg.n, sigma)))
            sections.append(("action table", action_table_check(cfg.n, sigma)))
    ok = all(rep.ok for _, rep in sections)
    if (cfg.format or "text") == "json":
        _emit(json.dumps({name: rep.to_list() for name, rep in sections}, sort_keys=True))
    else:
        _emit("\n".join(_report_text(f"{name} (n={cfg.n})", rep) for name, rep in sections))
        for _, rep in sections:
            for r in rep.failures():
                print(f"{r.relation} fails", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_localize(cfg: RunConfig, args) -> int:
    sigma = cfg.sigma_params()
    n = cfg.n
    if n > (cfg.max_n or 3) and cfg.backend == "rational":
        raise InputError(f"n={n} needs --backend modular or a larger --max-n")
    backends = ["rational"] if cfg.backend == "rational" else list(PRIMES[: cfg.primes])
    if cfg.backend == "both":
        backends = ["rational"] + backends
    ranks = {}
    for side in ("e", "f"):
        ranks[side] = {str(be): localize_basis(n, sigma, side, be).rank for be in backends}
    values = {r for side in ranks.values() for r in side.values()}
    out = {"n": n, "expected": 16 ** (n - 1), "ranks": ranks}
    theta = verify_theta_intertwines(n, sigma) if n >= 2 else None
    if theta is not None:
        out["theta"] = theta.to_list()
    if (cfg.format or "text") == "json":
        _emit(json.dumps(out, sort_keys=True))
    else:
        lines = [f"n={n}: expected rank {16 ** (n - 1)}"]
        for side, rs in ranks.items():
            lines.append(f"  {side}-side: " + ", ".join(f"{be}: {r}" for be, r in rs.items()))
        if theta is not None:
            lines.append(_report_text("theta intertwining", theta))
        _emit("\n".join(lines))
    if any(len(set(rs.values())) > 1 for rs in ranks.values()):
        return EXIT_DISAGREE
    ok = values == {16 ** (n - 1)} and (theta is None or theta.ok)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_certify(cfg: RunConfig, args) -> int:
    sigma = cfg.sigma_params()
    n = cfg.n
    limit = cfg.max_n or 4
    if n > limit:
        raise InputError(f"n={n} exceeds the configured maximum {limit}")
    if n >= 4 and cfg.backend != "modular":
        raise InputError("n >= 4 is certified with --backend modular only")
    if cfg.backend == "modular":
        print(
            f"probabilistic: ranks computed modulo {cfg.primes} large primes, not over QQ",
            file=sys.stderr,
        )
    try:
        cert = counit_image(n, sigma, cfg.backend, cfg.primes, cfg.seed if cfg.sigma is None else None, cfg.cache(), cfg.jobs)
        cert = certify_E(n, sigma, cert, cfg.backend, cfg.primes)
    except GenericityError as exc:
        print(f"disagreement: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    if (cfg.format or "text") == "json":
        _emit(cert.to_json())
    else:
        st = cert.E_stats
        lines = [
            f"n={n}  backend={cert.backend}" + ("  (probabilistic)" if cert.probabilistic else ""),
            f"  counit rank d_observed = {cert.d_observed}   formula d_n = {cert.d_expected}   domain dimension = {cert.d_domain}",
            f"  injective (rank == d_n): {cert.injective}",
            f"  |E^A|, |E^B|, |E^C| = {tuple(st['sizes'])}  expected {tuple(st['expected_sizes'])}",
            f"  rank(E) = {st['rank']}  span equal to counit image: {st['span_equal']}  C closed form: {st['closed_form_C']}",
            f"  certified: {cert.certified}",
        ]
        lines += [f"  failed: {msg}" for msg in cert.failures]
        _emit("\n".join(lines))
    return EXIT_OK if cert.certified else EXIT_FAIL


def cmd_table(cfg: RunConfig, args) -> int:
    max_n = cfg.max_n or 4
    if not 1 <= max_n <= 6:
        raise InputError("--max-n must be between 1 and 6 for the table")
    sigma = cfg.sigma_params()
    try:
        tables = [multiplicities(k, sigma) for k in range(1, max_n + 1)]
    except GenericityError as exc:
        print(f"disagreement: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    checks = RelationReport(max_n)
    for k, t in enumerate(tables):
        sub = full_tilting_bookkeeping(t, tables[k - 1] if k else None)
        for r in sub.results:
            r.relation = f"n={t.n} {r.relation}"
        checks.extend(sub)
    top = tables[-1]
    col_sums = {k: sum(top.by_abs(k, r) for r in range(-2 * max_n, 2 * max_n + 1)) for k in range(max_n + 1)}
    fmt = cfg.format or "csv"
    if fmt == "json":
        _emit(
            json.dumps(
                {
                    "table": json.loads(top.to_json()),
                    "route_checks": top.route_checks,
                    "column_sums": {str(k): s for k, s in col_sums.items()},
                    "checks": checks.to_list(),
                },
                sort_keys=True,
            )
        )
    elif fmt == "csv":
        lines = [top.to_csv().rstrip("\n")]
        for k, s in col_sums.items():
            lines.append(f"# column |lambda|={k}: sum over r in [-{2 * max_n},{2 * max_n}] = {s}, v({k}) = {v(k)}")
        lines.append(f"# route agreements: {top.route_checks}; bookkeeping checks passed: {sum(r.status == 'holds' for r in checks.results)}/{len(checks.results)}")
        _emit("\n".join(lines))
    else:
        rows = top.rows()
        width = max(len(str(x)) for row in rows for x in row if x is not None) + 2
        lines = ["r \\ |lambda|" + "".join(f"{k:>{width}}" for k in range(max_n + 1))]
        for r, row in enumerate(rows):
            lines.append(f"{r:<12}" + "".join(f"{'' if x is None else x:>{width}}" for x in row))
        lines.append("column sums: " + ", ".join(f"{s} (v({k})={v(k)})" for k, s in col_sums.items()))
        lines.append(f"route agreements: {top.route_checks}; bookkeeping checks: {'all hold' if checks.ok else 'FAILED'}")
        _emit("\n".join(lines))
    for r in checks.failures():
        print(f"{r.relation} fails: {r.witness}", file=sys.stderr)
    return EXIT_OK if checks.ok else EXIT_FAIL


def cmd_sequences(cfg: RunConfig, args) -> int:
    max_n = cfg.max_n or 10
    if max_n < 1:
        raise InputError("--max-n must be >= 1")
    if cfg.format == "json":
        rows = list(csv.DictReader(io.StringIO(sequences_csv(max_n))))
        _emit(json.dumps([{k: int(val) for k, val in row.items()} for row in rows]))
    else:
        _emit(sequences_csv(max_n))
    return EXIT_OK


def cmd_selftest(cfg: RunConfig, args) -> int:
    sigma = cfg.sigma_params()
    results = []

    def check(name, ok):
        results.append((name, bool(ok)))

    for n in (1, 2):
        check(f"relations n={n}", verify_relations(n, sigma).ok)
    check("perturbed delta fails n=2", not verify_relations(2, sigma, pi_from_sigma(sigma, 2).perturbed("delta")).ok)
    check("corner n=2", corner_relations_check(2, sigma).ok)
    check("action table n=2", action_table_check(2, sigma).ok)
    check("theta n=2", verify_theta_intertwines(2, sigma).ok)
    check("localisation n=2", localize_basis(2, sigma, "e").rank == 16 == localize_basis(2, sigma, "f").rank)
    try:
        cert = certify_E(2, sigma, counit_image(2, sigma, "both", cfg.primes), "rational")
        check("certificate n=2", cert.certified and cert.d_observed == d_expected(2))
        t = multiplicities(4, sigma)
        check("table n=4 corner entry", t.by_abs(4, 0) == 10906)
    except GenericityError:
        check("backends agree", False)
    if (cfg.format or "text") == "json":
        _emit(json.dumps([{"check": k, "ok": ok} for k, ok in results]))
    else:
        _emit("\n".join(f"{'PASS' if ok else 'FAIL'}  {k}" for k, ok in results) + f"\nkernel: {KERNEL}")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FAIL


COMMANDS = {
    "params": cmd_params,
    "verify": cmd_verify,
    "localize": cmd_localize,
    "certify": cmd_certify,
    "table": cmd_table,
    "sequences": cmd_sequences,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
