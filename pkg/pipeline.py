"""
Multisegment -> standard module -> Langlands quotient -> K-type table.

Labels follow the library's dictionary: the Specht module of the row
partition (n) is the sign-type character T_i -> -1 and carries the
minimal label; (1,…,1) is the trivial-type character T_i -> q.
"""
import csv
import io
import json
import logging
import math
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from itertools import product
from typing import Optional, Sequence, Union

import linalg
import settings
import sweep_runner
from affhecke import (
    NormalFormElement,
    bl_commute,
    bl_denominator,
    induced_standard_module,
)
from combin import (
    Partition,
    count_syt,
    dominance_leq,
    enumerate_partitions,
    hook_length_count,
    kostka_number,
    max_label,
    min_label,
)
from errors import ConsistencyError, HeckeError, UsageError
from finhecke import HeckeElement, HeckeParams, multiplicity, specht_module
from modlab import cosocle, envelope, nilpotency_index, radical
from scalar import LaurentPoly, format_rational, laurent_mul, to_rational
from segments import Multisegment, enumerate_multisegments, is_generic, langlands_sort
from symgroup import all_permutations

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)

GL3_EXAMPLE = "[0];[2];[4]"
PASS = "pass"
FAIL = "fail"
CERTIFICATE_CSV_HEADER = ["multisegment", "generic", "sign_multiplicity", "verdict", "error"]


@dataclass(frozen=True)
class MultiplicityTable:
    """dim Hom(S^λ, module) for every partition λ of n, in descending lexicographic order."""
    n: int
    q: Fraction
    multisegment: str
    entries: tuple[tuple[Partition, int], ...]
    quotient_dim: int
    generic: bool
    kind: str = "quotient"

    def __post_init__(self):
        accounted = sum(mult * count_syt(label) for label, mult in self.entries)
        if accounted != self.quotient_dim:
            logger.error(f"Table for {self.multisegment} accounts for {accounted} of {self.quotient_dim} dimensions")
            raise ConsistencyError(
                f"Multiplicities of {self.multisegment} account for dimension {accounted}, module has {self.quotient_dim}"
            )
        if self.kind == "quotient" and self.multiplicity(min_label(self.n)) > 1:
            logger.error(f"Sign-type multiplicity {self.multiplicity(min_label(self.n))} for {self.multisegment}")
            raise ConsistencyError(f"Sign-type multiplicity of {self.multisegment} exceeds 1")

    def multiplicity(self, label: Partition) -> int:
        return dict(self.entries).get(label, 0)

    @property
    def min_multiplicity(self) -> int:
        return self.multiplicity(min_label(self.n))

    @property
    def verdict(self) -> str:
        if self.kind == "standard":
            lengths = langlands_sort(Multisegment.parse(self.multisegment)).lengths
            expected = all(mult == kostka_number(label, lengths) for label, mult in self.entries)
            return PASS if expected else FAIL
        return PASS if self.min_multiplicity == (1 if self.generic else 0) else FAIL

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q": format_rational(self.q),
            "multisegment": self.multisegment,
            "quotient_dim": self.quotient_dim,
            "multiplicities": {str(label): mult for label, mult in self.entries},
            "generic": self.generic,
            "verdict": self.verdict,
        }

    @classmethod
    def from_dict(cls, data: dict, kind: str = "quotient") -> "MultiplicityTable":
        try:
            entries = tuple((Partition.parse(label), int(mult)) for label, mult in data["multiplicities"].items())
            return cls(
                int(data["n"]),
                to_rational(data["q"]),
                str(data["multisegment"]),
                entries,
                int(data["quotient_dim"]),
                bool(data["generic"]),
                kind,
            )
        except KeyError as e:
            raise UsageError(f"Table data is missing the key {e}") from e

    def text_lines(self) -> list[str]:
        width = max(len(str(label)) for label, _ in self.entries)
        lines = [
            f"n={self.n} q={format_rational(self.q)} multisegment={self.multisegment}",
            f"{'quotient' if self.kind == 'quotient' else 'standard module'} dimension={self.quotient_dim} "
            f"generic={str(self.generic).lower()} verdict={self.verdict}",
            f"{'K-type':<{width}}  multiplicity",
        ]
        lines.extend(f"{str(label):<{width}}  {mult}" for label, mult in self.entries)
        return lines

    def csv_rows(self) -> list[list]:
        rows: list[list] = [["partition", "multiplicity", "dimension"]]
        rows.extend([str(label), mult, count_syt(label)] for label, mult in self.entries)
        return rows


@dataclass(frozen=True)
class Certificate:
    """Sign-type multiplicity against the linking criterion for one multisegment."""
    multisegment: str
    generic: bool
    sign_multiplicity: Optional[int]
    error: str = ""

    @property
    def verdict(self) -> str:
        if self.error or self.sign_multiplicity is None:
            return FAIL
        return PASS if self.sign_multiplicity == (1 if self.generic else 0) else FAIL

    def to_dict(self) -> dict:
        data = {
            "multisegment": self.multisegment,
            "generic": self.generic,
            "sign_multiplicity": self.sign_multiplicity,
            "verdict": self.verdict,
        }
        if self.error:
            data["error"] = self.error
        return data

    def text_line(self) -> str:
        mult = "-" if self.sign_multiplicity is None else str(self.sign_multiplicity)
        line = f"{self.verdict.upper():<4}  {self.multisegment:<24}  generic={str(self.generic).lower():<5}  sign={mult}"
        return f"{line}  error: {self.error}" if self.error else line

    def text_lines(self) -> list[str]:
        return [self.text_line()]

    def csv_rows(self) -> list[list]:
        return [
            CERTIFICATE_CSV_HEADER,
            self.csv_row(),
        ]

    def csv_row(self) -> list:
        mult = "" if self.sign_multiplicity is None else self.sign_multiplicity
        return [self.multisegment, str(self.generic).lower(), mult, self.verdict, self.error]


@dataclass(frozen=True)
class SweepReport:
    n: int
    q: Fraction
    window: tuple[int, int]
    certificates: tuple[Certificate, ...]

    @property
    def passed(self) -> int:
        return sum(1 for c in self.certificates if c.verdict == PASS)

    @property
    def failed(self) -> int:
        return len(self.certificates) - self.passed

    @property
    def generic_count(self) -> int:
        return sum(1 for c in self.certificates if c.generic)

    @property
    def max_sign_multiplicity(self) -> int:
        return max((c.sign_multiplicity or 0 for c in self.certificates), default=0)

    @property
    def verdict(self) -> str:
        return PASS if self.failed == 0 else FAIL

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q": format_rational(self.q),
            "window": list(self.window),
            "certificates": [c.to_dict() for c in self.certificates],
            "summary": {
                "total": len(self.certificates),
                "passed": self.passed,
                "failed": self.failed,
                "generic": self.generic_count,
            },
            "verdict": self.verdict,
        }

    def text_lines(self) -> list[str]:
        lines = [c.text_line() for c in self.certificates]
        lines.append(
            f"n={self.n} q={format_rational(self.q)} window=[{self.window[0]},{self.window[1]}]: "
            f"{len(self.certificates)} multisegments, {self.passed} passed, {self.failed} failed, "
            f"{self.generic_count} generic"
        )
        return lines

    def csv_rows(self) -> list[list]:
        rows: list[list] = [CERTIFICATE_CSV_HEADER]
        rows.extend(c.csv_row() for c in self.certificates)
        return rows


@dataclass(frozen=True)
class LineCheck:
    """Sign-type multiplicity of the whole quotient against the product over cuspidal lines."""
    multisegment: str
    full: int
    per_line: tuple[tuple[int, int], ...]

    @property
    def product(self) -> int:
        out = 1
        for _, mult in self.per_line:
            out *= mult
        return out

    @property
    def verdict(self) -> str:
        return PASS if self.full == self.product else FAIL

    def to_dict(self) -> dict:
        return {
            "multisegment": self.multisegment,
            "sign_multiplicity": self.full,
            "per_line": {str(line): mult for line, mult in self.per_line},
            "product": self.product,
            "verdict": self.verdict,
        }

    def text_lines(self) -> list[str]:
        lines = [f"multisegment={self.multisegment} sign multiplicity={self.full}"]
        lines.extend(f"  line {line}: {mult}" for line, mult in self.per_line)
        lines.append(f"product={self.product} verdict={self.verdict}")
        return lines

    def csv_rows(self) -> list[list]:
        rows: list[list] = [["line", "sign_multiplicity"]]
        rows.extend([line, mult] for line, mult in self.per_line)
        rows.append(["all", self.full])
        return rows


@dataclass(frozen=True)
class SelftestReport:
    checks: tuple[tuple[str, bool, str], ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    @property
    def verdict(self) -> str:
        return PASS if self.passed else FAIL

    def to_dict(self) -> dict:
        return {
            "checks": [{"name": name, "ok": ok, "detail": detail} for name, ok, detail in self.checks],
            "verdict": self.verdict,
        }

    def text_lines(self) -> list[str]:
        lines = [f"{'ok  ' if ok else 'FAIL'}  {name}{f'  ({detail})' if detail else ''}" for name, ok, detail in self.checks]
        lines.append(f"{sum(ok for _, ok, _ in self.checks)}/{len(self.checks)} checks passed")
        return lines

    def csv_rows(self) -> list[list]:
        rows: list[list] = [["check", "ok", "detail"]]
        rows.extend([name, str(ok).lower(), detail] for name, ok, detail in self.checks)
        return rows


Result = Union[MultiplicityTable, Certificate, SweepReport, LineCheck, SelftestReport]


def _resolve_q(q) -> Fraction:
    return settings.default_q() if q is None else to_rational(q)


def _table(module, params: HeckeParams, canonical: str, generic: bool, kind: str) -> MultiplicityTable:
    restricted = module.restrict()
    entries = tuple(
        (label, multiplicity(specht_module(params, label), restricted))
        for label in enumerate_partitions(params.n)
    )
    return MultiplicityTable(params.n, params.q, canonical, entries, module.dim, generic, kind)


def ktype_table(m: Multisegment, q=None) -> MultiplicityTable:
    """K-type multiplicities of the Langlands quotient of m."""
    params = HeckeParams(m.total, _resolve_q(q))
    ordered = langlands_sort(m)
    head = cosocle(induced_standard_module(params, ordered))
    table = _table(head, params, str(ordered), is_generic(m), "quotient")
    logger.info(f"Langlands quotient of {ordered} at q={format_rational(params.q)}: dimension {head.dim}")
    return table


def standard_table(m: Multisegment, q=None) -> MultiplicityTable:
    """K-type multiplicities of the whole standard module of m."""
    params = HeckeParams(m.total, _resolve_q(q))
    ordered = langlands_sort(m)
    module = induced_standard_module(params, ordered)
    return _table(module, params, str(ordered), is_generic(m), "standard")


def certify(m: Multisegment, q=None) -> Certificate:
    """Compare the sign-type multiplicity of the quotient with the linking criterion."""
    start = time.perf_counter()
    table = ktype_table(m, q)
    certificate = Certificate(table.multisegment, table.generic, table.min_multiplicity)
    logger.info(f"Certified {certificate.multisegment}: sign={certificate.sign_multiplicity} in {time.perf_counter() - start:.3f}s")
    if certificate.verdict == FAIL:
        logger.error(f"Certificate failed for {certificate.multisegment}: generic={certificate.generic}, sign multiplicity={certificate.sign_multiplicity}")
    return certificate


def certify_job(text: str, q_text: str) -> Certificate:
    """Process-pool entry point: certify a multisegment given in text form."""
    return certify(Multisegment.parse(text), Fraction(q_text))


def _failed_certificate(text: str, error: BaseException) -> Certificate:
    m = Multisegment.parse(text)
    return Certificate(str(langlands_sort(m)), is_generic(m), None, f"{type(error).__name__}: {error}")


def sweep(
    n: int,
    window: Optional[Sequence[int]] = None,
    q=None,
    jobs: Optional[int] = None,
    allow_opt_in: bool = False,
    install_signal_handlers: bool = False,
) -> SweepReport:
    """Certify every multisegment of size n with both ends in the window."""
    cap = settings.sweep_cap(allow_opt_in)
    if n > cap:
        raise UsageError(f"Sweeps are capped at n={cap}; n={n} needs the opt-in flag or HECKE_SWEEP_CAP")
    q = _resolve_q(q)
    HeckeParams(n, q)
    lo, hi = settings.default_window(n) if window is None else (int(window[0]), int(window[1]))
    jobs = settings.default_jobs() if jobs is None else jobs
    items = [str(m) for m in enumerate_multisegments(n, (lo, hi))]
    logger.info(f"Sweeping {len(items)} multisegments of size {n} in window [{lo},{hi}] at q={format_rational(q)}")

    started = time.perf_counter()
    certificates = sweep_runner.run_jobs(
        partial(certify_job, q_text=format_rational(q)),
        items,
        jobs,
        on_error=_failed_certificate,
        install_signal_handlers=install_signal_handlers,
    )
    report = SweepReport(n, q, (lo, hi), tuple(certificates))
    log = logger.info if report.failed == 0 else logger.error
    log(f"Sweep n={n}: {report.passed} passed, {report.failed} failed in {time.perf_counter() - started:.1f}s")
    return report


def line_product_check(m: Multisegment, q=None) -> LineCheck:
    """The sign-type multiplicity factors over cuspidal lines."""
    cap = settings.sweep_cap(allow_opt_in=True)
    if m.total > cap:
        raise UsageError(f"Line checks are limited to n <= {cap}, got {m.total}")
    q = _resolve_q(q)
    full = ktype_table(m, q).min_multiplicity
    per_line = tuple((line, ktype_table(m.on_line(line), q).min_multiplicity) for line in m.lines())
    check = LineCheck(str(langlands_sort(m)), full, per_line)
    if check.verdict == FAIL:
        logger.error(f"Line product check failed for {check.multisegment}: {full} vs {check.product}")
    return check


def gl3_counterexample(q=None) -> MultiplicityTable:
    """Three pairwise unlinked points: a generic quotient with a two-dimensional K-type multiplicity."""
    return ktype_table(Multisegment.parse(GL3_EXAMPLE), q)


def _random_laurent(rng: random.Random, nvars: int, terms: int = 3, spread: int = 2) -> LaurentPoly:
    out = {}
    for _ in range(terms):
        exps = tuple(rng.randint(-spread, spread) for _ in range(nvars))
        out[exps] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return LaurentPoly(nvars, out)


def _check(name: str, run) -> tuple[str, bool, str]:
    try:
        detail = run()
    except HeckeError as e:
        return name, False, f"{type(e).__name__}: {e}"
    if detail is True or detail is None:
        return name, True, ""
    return name, False, str(detail)


def _specht_relations(q: Fraction, n_max: int):
    def run():
        for n in range(1, n_max + 1):
            params = HeckeParams(n, q)
            for label in enumerate_partitions(n):
                failures = specht_module(params, label).relation_failures
                if failures:
                    return f"S{label}: {', '.join(failures)}"
        return True
    return run


def _hecke_associativity(q: Fraction):
    def run():
        params = HeckeParams(3, q)
        basis = [HeckeElement.basis(params, w) for w in all_permutations(3)]
        for a, b, c in product(basis, repeat=3):
            if (a * b) * c != a * (b * c):
                return f"({a}·{b})·{c} differs from {a}·({b}·{c})"
        return True
    return run


def _bl_reexpansion(q: Fraction, seed: int, rounds: int):
    def run():
        rng = random.Random(seed)
        for nvars in range(2, 5):
            for _ in range(rounds):
                p = _random_laurent(rng, nvars)
                for i in range(1, nvars):
                    moved, correction = bl_commute(i, p)
                    if moved != p.swap(i):
                        return f"s_{i} image of {p}"
                    if laurent_mul(correction, bl_denominator(nvars, i)) != p - moved:
                        return f"correction for s_{i} and {p}"
        return True
    return run


def _normal_form_checks(q: Fraction, seed: int, rounds: int):
    def run():
        rng = random.Random(seed)
        for n in (2, 3):
            params = HeckeParams(n, q)
            for i in range(1, n):
                t = NormalFormElement.generator(params, i)
                lhs = t * NormalFormElement.theta(params, i) * t
                if lhs != NormalFormElement.theta(params, i + 1) * q:
                    return f"T_{i} θ_{i} T_{i} at n={n}"
            perms = all_permutations(n)

            def element():
                w = rng.choice(perms)
                return NormalFormElement(params, {w: _random_laurent(rng, n, terms=2, spread=1)})

            for _ in range(rounds):
                a, b, c = element(), element(), element()
                if (a * b) * c != a * (b * c):
                    return f"associativity at n={n}"
        return True
    return run


def _combinatorics(n_max: int):
    def run():
        for n in range(1, n_max + 1):
            labels = enumerate_partitions(n)
            if sum(count_syt(p) ** 2 for p in labels) != math.factorial(n):
                return f"Σ #SYT² at n={n}"
            if any(count_syt(p) != hook_length_count(p) for p in labels):
                return f"hook-length count at n={n}"
            if not all(dominance_leq(min_label(n), p) and dominance_leq(p, max_label(n)) for p in labels):
                return f"dominance endpoints at n={n}"
            for a, b in product(labels, repeat=2):
                if a != b and dominance_leq(a, b) and dominance_leq(b, a):
                    return f"antisymmetry for {a}, {b}"
        return True
    return run


def _radical_textbook():
    def run():
        upper = [linalg.matrix([[1, 0], [0, 0]]), linalg.matrix([[0, 1], [0, 0]])]
        rad = radical(envelope(upper))
        expected = linalg.Subspace.span(4, [[0, 1, 0, 0]])
        if rad != expected:
            return f"upper-triangular radical has dimension {rad.dim}"
        diagonal = [linalg.matrix([[1, 0], [0, 2]])]
        if radical(envelope(diagonal)).dim:
            return "diagonal algebra has a radical"
        if nilpotency_index(envelope(upper)) != 2:
            return "strictly upper line does not square to zero"
        return True
    return run


def run_selftest(q=None, seed: int = 20240607) -> SelftestReport:
    """Relation and property suites; every check is exact."""
    q = _resolve_q(q)
    HeckeParams(2, q)
    checks = (
        _check("Specht modules satisfy the Hecke relations (n <= 5)", _specht_relations(q, 5)),
        _check("T-basis multiplication is associative on S3", _hecke_associativity(q)),
        _check("Bernstein-Lusztig corrections re-expand (rank <= 4)", _bl_reexpansion(q, seed, 10)),
        _check("Normal-form products are associative", _normal_form_checks(q, seed, 5)),
        _check("Partition combinatorics (n <= 6)", _combinatorics(6)),
        _check("Trace-form radical textbook cases", _radical_textbook()),
    )
    report = SelftestReport(checks)
    log = logger.info if report.passed else logger.error
    log(f"Self test: {sum(ok for _, ok, _ in checks)}/{len(checks)} checks passed")
    return report


FORMATS = ("text", "json", "csv")


def render(result: Result, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(result.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerows(result.csv_rows())
        return buffer.getvalue()
    if fmt == "text":
        return "\n".join(result.text_lines()) + "\n"
    raise UsageError(f"Unknown output format {fmt!r}; expected one of {', '.join(FORMATS)}")


def emit(result: Result, fmt: str = "text", destination: Optional[str] = None) -> str:
    """Render and write to destination ("-" or None is stdout). Returns the rendered text."""
    text = render(result, fmt)
    if destination in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return text
    try:
        with open(destination, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        logger.error(f"Cannot write output to '{destination}': {e}")
        raise
    logger.info(f"Wrote {fmt} output to {destination}")
    return text
