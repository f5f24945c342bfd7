"""
The affine Hecke algebra of GL_n in Bernstein normal form, and the
modules built from multisegments.

Elements are written Σ_w T_w·p_w(θ) with Laurent coefficients on the
right. Commutation past a generator follows

    T_i·p = (s_i p)·T_i + (q-1)·c(p),   c(p) = (p - s_i p) / (1 - θ_i θ_{i+1}^-1)

or equivalently p·T_i = T_i·(s_i p) + (q-1)·c(p). In particular
c(θ_i) = -θ_{i+1}, c(θ_{i+1}) = θ_{i+1} and T_i θ_i T_i = q θ_{i+1}.

With this relation the one-dimensional module T_i -> -1, θ_k -> z_k
exists exactly when z_k = q·z_{k+1}, so a segment [a, b] evaluates to the
decreasing run (q^b, …, q^a). The standard module of a Langlands-ordered
multisegment (Δ_1, …, Δ_s) is induced from the parabolic of composition
(e_s, …, e_1) with θ-values segment_eval(Δ_s) ++ … ++ segment_eval(Δ_1);
for ([1],[0]) this puts the sign-type line in the socle and a
trivial-type head on top.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, Optional, Sequence

import linalg
import settings
from errors import ConsistencyError, DomainError, ParameterError, UsageError
from finhecke import (
    FiniteHeckeModule,
    HeckeElement,
    HeckeParams,
    left_multiply_simple,
    check_hecke_relations,
    left_multiply_word,
    specht_module,
)
from combin import Partition
from scalar import LaurentPoly, format_rational, laurent_divide_exact, laurent_eval, laurent_mul, to_rational
from segments import Multisegment, Segment, is_langlands_ordered
from symgroup import (
    Composition,
    LongerRep,
    Permutation,
    ShorterRep,
    StaysInParabolic,
    deodhar_step,
    factor_coset,
    length,
    min_coset_reps,
    reduced_word,
)

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)


def bl_denominator(nvars: int, i: int) -> LaurentPoly:
    """1 - θ_i θ_{i+1}^-1."""
    exps = [0] * nvars
    exps[i - 1], exps[i] = 1, -1
    return LaurentPoly(nvars, {(0,) * nvars: 1, tuple(exps): -1})


@lru_cache(maxsize=4096)
def _bl_parts(i: int, p: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    moved = p.swap(i)
    difference = p - moved
    if difference.is_zero():
        return moved, LaurentPoly.zero(p.nvars)
    return moved, laurent_divide_exact(difference, bl_denominator(p.nvars, i))


def bl_commute(i: int, p: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """
    (s_i p, c(p)) with T_i·p = (s_i p)·T_i + (q-1)·c(p).

    With HECKE_DEBUG_RELATIONS=1 every call re-expands c(p)·(1 - θ_iθ_{i+1}^-1),
    cached results included.
    """
    moved, correction = _bl_parts(i, p)
    if settings.debug_relations_forced():
        if laurent_mul(correction, bl_denominator(p.nvars, i)) != p - moved:
            logger.error(f"Bernstein-Lusztig correction for s_{i} and {p} does not re-expand")
            raise ConsistencyError(f"Bernstein-Lusztig correction for s_{i} and {p} does not re-expand")
    return moved, correction


NormalTerms = dict[Permutation, LaurentPoly]


def _accumulate(out: NormalTerms, w: Permutation, p: LaurentPoly) -> None:
    total = out[w] + p if w in out else p
    if total.is_zero():
        out.pop(w, None)
    else:
        out[w] = total


@lru_cache(maxsize=65536)
def _poly_times_basis(params: HeckeParams, p: LaurentPoly, v: Permutation) -> tuple[tuple[Permutation, LaurentPoly], ...]:
    """Normal form of p·T_v, by peeling the first letter of a reduced word of v."""
    if p.is_zero():
        return ()
    word = reduced_word(v)
    if not word:
        return ((v, p),)
    i = word[0]
    rest = v.left_multiply_simple(i)
    moved, correction = bl_commute(i, p)
    out: NormalTerms = {}
    for w, r in _poly_times_basis(params, moved, rest):
        for image, c in left_multiply_simple(params, i, {w: Fraction(1)}).items():
            _accumulate(out, image, r * c)
    for w, r in _poly_times_basis(params, correction, rest):
        _accumulate(out, w, r * (params.q - 1))
    return tuple(sorted(out.items(), key=lambda item: item[0].images))


@dataclass(frozen=True, eq=False)
class NormalFormElement:
    """Σ_w T_w·p_w(θ)."""
    params: HeckeParams
    terms: Mapping[Permutation, LaurentPoly] = field(default_factory=dict)

    def __post_init__(self):
        n = self.params.n
        cleaned = {}
        for w, p in self.terms.items():
            if w.n != n:
                raise UsageError(f"{w} is not a permutation of {n} letters")
            if not isinstance(p, LaurentPoly):
                p = LaurentPoly.constant(n, p)
            if p.nvars != n:
                raise UsageError(f"Coefficient {p} is not a Laurent polynomial in {n} variables")
            if not p.is_zero():
                cleaned[w] = p
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def from_poly(cls, params: HeckeParams, p: LaurentPoly) -> "NormalFormElement":
        return cls(params, {Permutation.identity(params.n): p})

    @classmethod
    def from_hecke(cls, element: HeckeElement) -> "NormalFormElement":
        n = element.params.n
        return cls(element.params, {w: LaurentPoly.constant(n, c) for w, c in element.coeffs.items()})

    @classmethod
    def generator(cls, params: HeckeParams, i: int) -> "NormalFormElement":
        return cls.from_hecke(HeckeElement.generator(params, i))

    @classmethod
    def theta(cls, params: HeckeParams, j: int, power: int = 1) -> "NormalFormElement":
        return cls.from_poly(params, LaurentPoly.variable(params.n, j, power))

    def coefficient(self, w: Permutation) -> LaurentPoly:
        return self.terms.get(w, LaurentPoly.zero(self.params.n))

    def __add__(self, other: "NormalFormElement") -> "NormalFormElement":
        if other.params != self.params:
            raise UsageError(f"Elements over {self.params} and {other.params} cannot be combined")
        out = dict(self.terms)
        for w, p in other.terms.items():
            _accumulate(out, w, p)
        return NormalFormElement(self.params, out)

    def __neg__(self) -> "NormalFormElement":
        return NormalFormElement(self.params, {w: -p for w, p in self.terms.items()})

    def __sub__(self, other: "NormalFormElement") -> "NormalFormElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, NormalFormElement):
            return nf_mul(self, other)
        scale = to_rational(other)
        return NormalFormElement(self.params, {w: p * scale for w, p in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NormalFormElement):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda item: (length(item[0]), item[0].images))
        return " + ".join(f"T{w}·({p})" for w, p in items)


def nf_mul(a: NormalFormElement, b: NormalFormElement) -> NormalFormElement:
    """(Σ T_x p_x)(Σ T_y r_y) = Σ T_x (p_x T_y) r_y, each p_x T_y brought to normal form."""
    if a.params != b.params:
        raise UsageError(f"Elements over {a.params} and {b.params} cannot be multiplied")
    params = a.params
    out: NormalTerms = {}
    for x, px in a.terms.items():
        word = reduced_word(x)
        for y, ry in b.terms.items():
            for w, pw in _poly_times_basis(params, px, y):
                coefficient = pw * ry
                for u, c in left_multiply_word(params, word, {w: Fraction(1)}).items():
                    _accumulate(out, u, coefficient * c)
    return NormalFormElement(params, out)


@dataclass(frozen=True)
class CentralCharacterData:
    """The θ-values z_1, …, z_n of the inducing character."""
    z: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(to_rational(x) for x in self.z)
        if any(x == 0 for x in values):
            raise DomainError(f"Central character values must be nonzero: {values}")
        object.__setattr__(self, "z", values)

    @property
    def n(self) -> int:
        return len(self.z)

    def distinct_values(self) -> list[Fraction]:
        return sorted(set(self.z))

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(x) for x in self.z) + ")"


def _poly_matrix(p: LaurentPoly, thetas: Sequence[linalg.Matrix], inverses: dict[int, linalg.Matrix]) -> linalg.Matrix:
    """ρ(p) for the θ-matrices; inverses are computed on demand."""
    d = thetas[0].shape[0]
    total = linalg.zeros(d, d)
    for exps, coeff in p.terms():
        term = linalg.scalar_matrix(d, coeff)
        for j, e in enumerate(exps):
            if e == 0:
                continue
            base = thetas[j]
            if e < 0:
                if j not in inverses:
                    inverses[j] = linalg.inverse(thetas[j])
                base = inverses[j]
            for _ in range(abs(e)):
                term = linalg.matmul(term, base)
        total = total + term
    return total


def verify_module_relations(
    params: HeckeParams,
    t_matrices: Sequence[linalg.Matrix],
    theta_matrices: Sequence[linalg.Matrix],
) -> list[str]:
    """Every violated relation of the affine algebra, by name."""
    n, q = params.n, params.q
    failures = list(check_hecke_relations(params, t_matrices))
    if len(theta_matrices) != n:
        return failures + [f"expected {n} theta-matrices, got {len(theta_matrices)}"]
    for j in range(n):
        for k in range(j + 1, n):
            a, b = theta_matrices[j], theta_matrices[k]
            if not linalg.equal(linalg.matmul(a, b), linalg.matmul(b, a)):
                failures.append(f"commute theta_{j + 1} theta_{k + 1}")
    for j, theta in enumerate(theta_matrices, start=1):
        if linalg.rref(theta)[1] != theta.shape[0]:
            failures.append(f"theta_{j} not invertible")
    if failures:
        return failures
    inverses: dict[int, linalg.Matrix] = {}
    for i, t in enumerate(t_matrices, start=1):
        for j in range(1, n + 1):
            moved, correction = bl_commute(i, LaurentPoly.variable(n, j))
            lhs = linalg.matmul(t, theta_matrices[j - 1])
            rhs = linalg.matmul(_poly_matrix(moved, theta_matrices, inverses), t)
            if not correction.is_zero():
                rhs = rhs + _poly_matrix(correction, theta_matrices, inverses) * (q - 1)
            if not linalg.equal(lhs, rhs):
                failures.append(f"Bernstein-Lusztig T_{i} theta_{j}")
    return failures


@dataclass(frozen=True, eq=False)
class AlgebraModule:
    """
    A finite-dimensional module of the affine algebra: matrices of T_1..T_{n-1}
    and θ_1..θ_n acting on column vectors. Relations are checked on
    construction unless the size threshold or HECKE_DEBUG_RELATIONS says otherwise.
    """
    params: HeckeParams
    t_matrices: tuple[linalg.Matrix, ...]
    theta_matrices: tuple[linalg.Matrix, ...]
    kind: str
    central_character: Optional[CentralCharacterData] = None
    source: str = ""

    def __post_init__(self):
        t_mats = tuple(linalg.freeze(t) for t in self.t_matrices)
        theta_mats = tuple(linalg.freeze(t) for t in self.theta_matrices)
        object.__setattr__(self, "t_matrices", t_mats)
        object.__setattr__(self, "theta_matrices", theta_mats)
        if len(theta_mats) != self.params.n:
            raise UsageError(f"A module of rank {self.params.n} needs {self.params.n} theta-matrices, got {len(theta_mats)}")
        d = theta_mats[0].shape[0]
        for k, m in enumerate(t_mats + theta_mats):
            linalg.require_square(m, d, f"generator {k} of {self.kind} module")
        if settings.should_verify_relations(d):
            failures = verify_module_relations(self.params, t_mats, theta_mats)
            if failures:
                logger.error(f"{self.kind} module {self.source} violates {failures}")
                raise ConsistencyError(f"{self.kind} module {self.source} violates relations: {', '.join(failures)}")
        elif d > settings.verify_max_dim():
            logger.warning(f"Relation check skipped for {self.kind} module of dimension {d}")

    @property
    def dim(self) -> int:
        return self.theta_matrices[0].shape[0]

    def generators(self) -> list[linalg.Matrix]:
        return list(self.t_matrices) + list(self.theta_matrices)

    @cached_property
    def finite_restriction(self) -> FiniteHeckeModule:
        return FiniteHeckeModule(self.params, self.t_matrices, f"{self.kind} {self.source}".strip(), self.dim)

    def restrict(self) -> FiniteHeckeModule:
        """The same space as a module of the finite algebra."""
        return self.finite_restriction


def _is_integer_power(value: Fraction, base: Fraction) -> bool:
    if value == 1:
        return True
    height = max(abs(value.numerator), value.denominator)
    power = Fraction(1)
    for _ in range(height.bit_length() + 1):
        power *= base
        if power == value or 1 / power == value:
            return True
    return False


def segment_eval(seg: Segment, q: Fraction) -> list[Fraction]:
    """(q^b, …, q^a)·multiplier for seg = [a, b]; decreasing so T_i -> -1 is consistent."""
    q = to_rational(q)
    multiplier = settings.line_multiplier(seg.line)
    if seg.line and _is_integer_power(multiplier, q):
        logger.error(f"Multiplier {multiplier} of line {seg.line} is a power of q={q}")
        raise ParameterError(f"Line {seg.line} multiplier {format_rational(multiplier)} is an integer power of q")
    return [multiplier * q ** k for k in range(seg.end, seg.start - 1, -1)]


def standard_character(m: Multisegment, q: Fraction) -> CentralCharacterData:
    """θ-values of the standard module: the segments' runs, last segment first."""
    values: list[Fraction] = []
    for seg in reversed(m.segments):
        values.extend(segment_eval(seg, q))
    return CentralCharacterData(tuple(values))


def _check_parabolic_character(params: HeckeParams, c: Composition, z: Sequence[Fraction]) -> None:
    """The 1-dim module T_t -> -1 of the parabolic needs z_k = q z_{k+1} inside each block."""
    for k in c.inner_simple_indices():
        if z[k - 1] != params.q * z[k]:
            logger.error(f"Parabolic character {list(map(format_rational, z))} fails at position {k}")
            raise ParameterError(
                f"θ-values {format_rational(z[k - 1])}, {format_rational(z[k])} at positions {k}, {k + 1} "
                f"do not support the sign-type parabolic module"
            )


def _induced_module(
    params: HeckeParams,
    c: Composition,
    chi: CentralCharacterData,
    kind: str,
    source: str,
) -> AlgebraModule:
    """H ⊗ (sign-type module of the parabolic for c, θ -> chi) on the basis T_x ⊗ v."""
    n, q = params.n, params.q
    if chi.n != n or c.n != n:
        raise UsageError(f"Character of length {chi.n} and composition {c.parts} do not match n={n}")
    _check_parabolic_character(params, c, chi.z)
    reps = min_coset_reps(n, c)
    index = {x: k for k, x in enumerate(reps)}
    d = len(reps)

    t_mats = []
    for i in range(1, n):
        m = linalg.zeros(d, d)
        for col, x in enumerate(reps):
            step = deodhar_step(i, x, c)
            if isinstance(step, LongerRep):
                m[index[step.rep], col] = Fraction(1)
            elif isinstance(step, StaysInParabolic):
                m[col, col] = Fraction(-1)
            elif isinstance(step, ShorterRep):
                m[index[step.rep], col] = q
                m[col, col] = q - 1
        t_mats.append(m)

    theta_mats = []
    for j in range(1, n + 1):
        theta = LaurentPoly.variable(n, j)
        m = linalg.zeros(d, d)
        for col, x in enumerate(reps):
            for w, p in _poly_times_basis(params, theta, x):
                rep, u = factor_coset(w, c)
                sign = -1 if length(u) % 2 else 1
                m[index[rep], col] += laurent_eval(p, chi.z) * sign
        theta_mats.append(m)

    module = AlgebraModule(params, tuple(t_mats), tuple(theta_mats), kind, chi, source)
    logger.debug(f"Built {kind} module {source} of dimension {d}")
    return module


def principal_series(params: HeckeParams, chi: CentralCharacterData) -> AlgebraModule:
    """Induced from the character θ -> chi of the commutative part; dimension n!."""
    return _induced_module(params, Composition((1,) * params.n), chi, "principal-series", str(chi))


def induced_standard_module(params: HeckeParams, m: Multisegment) -> AlgebraModule:
    """Standard module of a Langlands-ordered multisegment; dimension n!/∏ e_i!."""
    if m.total != params.n:
        raise UsageError(f"Multisegment {m} has total size {m.total}, expected {params.n}")
    if not is_langlands_ordered(m):
        logger.error(f"Multisegment {m} is not in Langlands order")
        raise UsageError(f"Multisegment {m} is not in Langlands order (an earlier segment precedes a later one)")
    c = Composition(tuple(reversed(m.lengths)))
    chi = standard_character(m, params.q)
    return _induced_module(params, c, chi, "induced-standard", str(m))


def calibrated_specht_module(params: HeckeParams, label: Partition, multiplier: Fraction = Fraction(1)) -> AlgebraModule:
    """A Specht module with θ_k acting diagonally by multiplier·q^(-content(k))."""
    specht = specht_module(params, label)
    weights = specht.calibrated_weights(to_rational(multiplier))
    d = specht.dim
    thetas = []
    for j in range(params.n):
        m = linalg.zeros(d, d)
        for k, weight in enumerate(weights):
            m[k, k] = weight[j]
        thetas.append(m)
    chi = CentralCharacterData(weights[0])
    return AlgebraModule(params, specht.t_matrices, tuple(thetas), "calibrated", chi, f"S{label}")
