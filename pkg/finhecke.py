"""
The finite Iwahori-Hecke algebra H(q) of S_n.

T_w basis, quadratic relation T_s^2 = (q-1)T_s + q. T_i has eigenvalues
q and -1 on every module: the sign-type character is T_i -> -1, the
trivial-type character is T_i -> q.

Specht modules use the rational seminormal form. For a standard tableau
t and r = content(i+1) - content(i):

    same row      T_i v_t = -v_t
    same column   T_i v_t = q v_t
    otherwise     T_i v_t = a(t) v_t + b(t) v_{s_i t},  a(t) = (q-1)/(1-q^r)

with b(t) = 1 when i+1 lies strictly below i in t and
b(t) = a(t)a(s_i t) + q otherwise. With this rule the one-row shape (n) is
the sign-type module and the one-column shape (1^n) is trivial-type.
Paired with the weights theta_k -> q^(-content(k)) the same matrices
form a calibrated module of the affine algebra.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, Optional, Sequence

import linalg
from combin import Partition, Tableau, content_of, count_syt, row_of, standard_tableaux
from errors import ConsistencyError, ParameterError, UsageError
from scalar import format_rational, to_rational
from symgroup import Permutation, all_permutations, reduced_word

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)


@dataclass(frozen=True)
class HeckeParams:
    n: int
    q: Fraction = Fraction(3)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise UsageError(f"Rank n must be a positive integer, got {self.n!r}")
        q = to_rational(self.q)
        object.__setattr__(self, "q", q)
        if q == 0 or q == -1:
            logger.error(f"Deformation parameter q={format_rational(q)} is not admissible")
            raise ParameterError(f"q must avoid 0 and -1, got {format_rational(q)}")
        if q == 1:
            # seminormal denominators 1 - q^r vanish and segment lines collapse
            logger.error("Deformation parameter q=1 is not admissible")
            raise ParameterError("q = 1 is not supported")
        for k in range(1, self.n + 1):
            if self.quantum_integer(k) == 0:
                logger.error(f"[{k}]_q vanishes at q={format_rational(q)}")
                raise ParameterError(f"H(q) is not semisimple: [{k}]_q = 0 at q={format_rational(q)}")

    def quantum_integer(self, k: int) -> Fraction:
        """[k]_q = 1 + q + ... + q^(k-1)."""
        return sum((self.q ** j for j in range(k)), Fraction(0))

    def __str__(self) -> str:
        return f"H_{self.n}(q={format_rational(self.q)})"


Coefficients = dict[Permutation, Fraction]


def left_multiply_simple(params: HeckeParams, i: int, coeffs: Mapping[Permutation, Fraction]) -> Coefficients:
    """T_i · Σ c_w T_w."""
    q = params.q
    out: Coefficients = {}
    for w, c in coeffs.items():
        sw = w.left_multiply_simple(i)
        if w.has_left_descent(i):
            out[w] = out.get(w, Fraction(0)) + c * (q - 1)
            out[sw] = out.get(sw, Fraction(0)) + c * q
        else:
            out[sw] = out.get(sw, Fraction(0)) + c
    return {w: c for w, c in out.items() if c != 0}


def left_multiply_word(params: HeckeParams, word: Sequence[int], coeffs: Mapping[Permutation, Fraction]) -> Coefficients:
    """T_{i_1} ··· T_{i_k} · Σ c_w T_w."""
    out = dict(coeffs)
    for i in reversed(word):
        out = left_multiply_simple(params, i, out)
    return out


@dataclass(frozen=True, eq=False)
class HeckeElement:
    """Σ_w c_w T_w."""
    params: HeckeParams
    coeffs: Mapping[Permutation, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for w, c in self.coeffs.items():
            if w.n != self.params.n:
                raise UsageError(f"{w} is not a permutation of {self.params.n} letters")
            c = to_rational(c)
            if c != 0:
                cleaned[w] = c
        object.__setattr__(self, "coeffs", cleaned)

    @classmethod
    def basis(cls, params: HeckeParams, w: Permutation) -> "HeckeElement":
        return cls(params, {w: Fraction(1)})

    @classmethod
    def one(cls, params: HeckeParams) -> "HeckeElement":
        return cls.basis(params, Permutation.identity(params.n))

    @classmethod
    def generator(cls, params: HeckeParams, i: int) -> "HeckeElement":
        return cls.basis(params, Permutation.simple(params.n, i))

    def coefficient(self, w: Permutation) -> Fraction:
        return self.coeffs.get(w, Fraction(0))

    def _check(self, other: "HeckeElement") -> None:
        if other.params != self.params:
            raise UsageError(f"Elements of {self.params} and {other.params} cannot be combined")

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, Fraction(0)) + c
        return HeckeElement(self.params, out)

    def __neg__(self) -> "HeckeElement":
        return HeckeElement(self.params, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return hecke_mul(self, other)
        scale = to_rational(other)
        return HeckeElement(self.params, {w: c * scale for w, c in self.coeffs.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.params == other.params and self.coeffs == other.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        items = sorted(self.coeffs.items(), key=lambda item: (len(reduced_word(item[0])), item[0].images))
        return " + ".join(f"{format_rational(c)}*T{w}" for w, c in items)


def hecke_mul(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    """Product in the T_w basis, left-multiplying b by one generator at a time."""
    a._check(b)
    out: Coefficients = {}
    for x, c in a.coeffs.items():
        for w, d in left_multiply_word(a.params, reduced_word(x), b.coeffs).items():
            out[w] = out.get(w, Fraction(0)) + c * d
    return HeckeElement(a.params, out)


def check_hecke_relations(params: HeckeParams, t_matrices: Sequence[linalg.Matrix]) -> list[str]:
    """Names of the violated relations among quadratic, braid and far commutation."""
    n, q = params.n, params.q
    if len(t_matrices) != n - 1:
        return [f"expected {n - 1} T-matrices, got {len(t_matrices)}"]
    if not t_matrices:
        return []
    d = t_matrices[0].shape[0]
    failures = []
    identity = linalg.identity(d)
    for i, t in enumerate(t_matrices, start=1):
        if t.shape != (d, d):
            return [f"T_{i} has shape {t.shape}, expected ({d}, {d})"]
        if not linalg.equal(linalg.matmul(t, t), t * (q - 1) + identity * q):
            failures.append(f"quadratic T_{i}")
    for i in range(1, n - 1):
        a, b = t_matrices[i - 1], t_matrices[i]
        ab = linalg.matmul(a, b)
        ba = linalg.matmul(b, a)
        if not linalg.equal(linalg.matmul(ab, a), linalg.matmul(ba, b)):
            failures.append(f"braid T_{i} T_{i + 1}")
    for i in range(1, n):
        for j in range(i + 2, n):
            a, b = t_matrices[i - 1], t_matrices[j - 1]
            if not linalg.equal(linalg.matmul(a, b), linalg.matmul(b, a)):
                failures.append(f"commute T_{i} T_{j}")
    return failures


@dataclass(frozen=True, eq=False)
class FiniteHeckeModule:
    """
    A module of H(q) given by the matrices of T_1, …, T_{n-1} (columns are
    images). `size` is only needed when n = 1 and there are no matrices.
    """
    params: HeckeParams
    t_matrices: tuple[linalg.Matrix, ...]
    name: str = ""
    size: Optional[int] = None

    def __post_init__(self):
        mats = tuple(linalg.freeze(t) for t in self.t_matrices)
        object.__setattr__(self, "t_matrices", mats)
        if mats:
            if self.size is not None and self.size != mats[0].shape[0]:
                raise UsageError(f"Declared dimension {self.size} does not match matrices of size {mats[0].shape[0]}")
            object.__setattr__(self, "size", mats[0].shape[0])
        elif self.size is None:
            raise UsageError("A module without T-matrices needs an explicit dimension")

    @property
    def dim(self) -> int:
        return self.size

    @cached_property
    def relation_failures(self) -> list[str]:
        return check_hecke_relations(self.params, self.t_matrices)


def direct_sum(a: FiniteHeckeModule, b: FiniteHeckeModule) -> FiniteHeckeModule:
    if a.params != b.params:
        raise UsageError(f"Cannot add modules of {a.params} and {b.params}")
    mats = tuple(linalg.direct_sum(x, y) for x, y in zip(a.t_matrices, b.t_matrices))
    return FiniteHeckeModule(a.params, mats, f"{a.name}+{b.name}", a.dim + b.dim)


def sign_character(params: HeckeParams) -> FiniteHeckeModule:
    """T_i -> -1."""
    return FiniteHeckeModule(params, tuple(linalg.scalar_matrix(1, -1) for _ in range(params.n - 1)), "sign", 1)


def trivial_character(params: HeckeParams) -> FiniteHeckeModule:
    """T_i -> q."""
    return FiniteHeckeModule(params, tuple(linalg.scalar_matrix(1, params.q) for _ in range(params.n - 1)), "trivial", 1)


def regular_representation(params: HeckeParams) -> FiniteHeckeModule:
    """Left regular module on the basis T_w, w in length order."""
    basis = all_permutations(params.n)
    index = {w: k for k, w in enumerate(basis)}
    mats = []
    for i in range(1, params.n):
        m = linalg.zeros(len(basis), len(basis))
        for col, w in enumerate(basis):
            for image, c in left_multiply_simple(params, i, {w: Fraction(1)}).items():
                m[index[image], col] = c
        mats.append(m)
    return FiniteHeckeModule(params, tuple(mats), "regular", len(basis))


@dataclass(frozen=True, eq=False)
class SpechtModule(FiniteHeckeModule):
    label: Partition = Partition(())
    tableaux: tuple[Tableau, ...] = ()

    def calibrated_weights(self, multiplier: Fraction = Fraction(1)) -> list[tuple[Fraction, ...]]:
        """theta_k -> multiplier * q^(-content(k)) on each tableau vector."""
        q = self.params.q
        return [
            tuple(multiplier * q ** (-content_of(t, k)) for k in range(1, self.params.n + 1))
            for t in self.tableaux
        ]


def _swap_entries(t: Tableau, i: int) -> Tableau:
    swap = {i: i + 1, i + 1: i}
    return tuple(tuple(swap.get(x, x) for x in row) for row in t)


def _seminormal_diagonal(params: HeckeParams, t: Tableau, i: int) -> Fraction:
    r = content_of(t, i + 1) - content_of(t, i)
    return (params.q - 1) / (1 - params.q ** r)


@lru_cache(maxsize=256)
def specht_module(params: HeckeParams, label: Partition) -> SpechtModule:
    """Seminormal-form Specht module; matrices are verified before they are returned."""
    if label.size != params.n:
        raise UsageError(f"Label {label} does not partition n={params.n}")
    tableaux = tuple(standard_tableaux(label))
    index = {t: k for k, t in enumerate(tableaux)}
    d = len(tableaux)
    if d != count_syt(label):
        raise ConsistencyError(f"Tableau enumeration for {label} disagrees with the SYT count")

    mats = []
    for i in range(1, params.n):
        m = linalg.zeros(d, d)
        for col, t in enumerate(tableaux):
            ri, ri1 = row_of(t, i), row_of(t, i + 1)
            ci, ci1 = content_of(t, i), content_of(t, i + 1)
            if ri == ri1:
                m[col, col] = Fraction(-1)
            elif ci == ci1 + 1 and ri1 == ri + 1:
                # same column, i+1 directly below i
                m[col, col] = params.q
            else:
                partner = _swap_entries(t, i)
                a_t = _seminormal_diagonal(params, t, i)
                m[col, col] = a_t
                if ri1 > ri:
                    m[index[partner], col] = Fraction(1)
                else:
                    m[index[partner], col] = a_t * _seminormal_diagonal(params, partner, i) + params.q
        mats.append(m)

    module = SpechtModule(params, tuple(mats), name=f"S{label}", size=d, label=label, tableaux=tableaux)
    failures = module.relation_failures
    if failures:
        logger.error(f"Specht module {label} violates {failures}")
        raise ConsistencyError(f"Specht module {label} violates relations: {', '.join(failures)}")
    logger.debug(f"Built Specht module {label} of dimension {d}")
    return module


def multiplicity(s: FiniteHeckeModule, m) -> int:
    """
    dim Hom_H(s, m). Accepts a FiniteHeckeModule or anything with a
    `restrict()` to one (an affine module is restricted to its T-action).

    This is the multiplicity of s in m when End(s) is one-dimensional,
    which holds for Specht modules at every allowed q.
    """
    if hasattr(m, "restrict"):
        m = m.restrict()
    if s.params != m.params:
        raise UsageError(f"Modules over {s.params} and {m.params} cannot be compared")
    failures = m.relation_failures
    if failures:
        logger.error(f"Module {m.name or '<unnamed>'} violates {failures}")
        raise UsageError(f"Module violates the Hecke relations: {', '.join(failures)}")
    blocks = list(zip(m.t_matrices, s.t_matrices))
    if not blocks:
        blocks = [(linalg.identity(m.dim), linalg.identity(s.dim))]
    return linalg.solve_hom_system(blocks).dim
