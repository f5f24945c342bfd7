"""
Exact scalars: rationals and Laurent polynomials in commuting variables
θ_1, …, θ_n over the rationals.

Rationals are `fractions.Fraction` (always reduced, positive denominator).
A `LaurentPoly` is an immutable sparse map from integer exponent vectors
to nonzero rational coefficients, with terms kept in lexicographic order
of the exponent vectors so that equality is structural.

Variables are numbered from 1, as in θ_1, …, θ_n.
"""
import logging
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from errors import ConsistencyError, DomainError, UsageError

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)

Rational = Fraction
Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]


def to_rational(value: Union[Scalar, str]) -> Rational:
    """Convert an int, Fraction or text such as "5/7" into a Rational."""
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise UsageError(f"Not a rational number: {value!r}") from e


def format_rational(value: Rational) -> str:
    """Render a rational as "p" or "p/q"."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class LaurentPoly:
    """An element of Q[θ_1^{±1}, …, θ_n^{±1}]."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Union[Mapping[Exponents, Scalar], Iterable[tuple[Exponents, Scalar]]] = ()):
        if nvars < 0:
            raise UsageError(f"Variable count must be non-negative, got {nvars}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: dict[Exponents, Fraction] = {}
        for exps, coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise UsageError(f"Exponent vector {exps} does not have length {nvars}")
            collected[exps] = collected.get(exps, Fraction(0)) + Fraction(coeff)
        self.nvars = nvars
        self._terms: tuple[tuple[Exponents, Fraction], ...] = tuple(
            sorted((e, c) for e, c in collected.items() if c != 0)
        )
        self._hash = hash((nvars, self._terms))

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: Scalar) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: Scalar = 1) -> "LaurentPoly":
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def variable(cls, nvars: int, index: int, power: int = 1) -> "LaurentPoly":
        """θ_index ** power."""
        if not 1 <= index <= nvars:
            raise UsageError(f"Variable index {index} out of range 1..{nvars}")
        exps = [0] * nvars
        exps[index - 1] = power
        return cls(nvars, {tuple(exps): 1})

    def terms(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(self._terms[0][0]))

    def constant_value(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_constant():
            raise UsageError(f"{self} is not a constant")
        return self._terms[0][1]

    def leading_term(self) -> tuple[Exponents, Fraction]:
        return self._terms[-1]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self.nvars}, {dict(self._terms)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exps, coeff in reversed(self._terms):
            factors = []
            for i, e in enumerate(exps, start=1):
                if e == 1:
                    factors.append(f"θ{i}")
                elif e != 0:
                    factors.append(f"θ{i}^{e}")
            mono = "*".join(factors)
            if not mono:
                pieces.append(format_rational(coeff))
            elif coeff == 1:
                pieces.append(mono)
            elif coeff == -1:
                pieces.append(f"-{mono}")
            else:
                pieces.append(f"{format_rational(coeff)}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")

    def _coerce(self, other: Union["LaurentPoly", Scalar]) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise UsageError(f"Mismatched variable counts: {self.nvars} and {other.nvars}")
            return other
        return LaurentPoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        return LaurentPoly(self.nvars, list(self._terms) + list(other._terms))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, [(e, -c) for e, c in self._terms])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly(self.nvars, [(e, c * other) for e, c in self._terms])
        return laurent_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def scale_exponents(self, exps: Sequence[int], coeff: Scalar = 1) -> "LaurentPoly":
        """Multiply by the monomial coeff·θ^exps."""
        return LaurentPoly(
            self.nvars,
            [(tuple(a + b for a, b in zip(e, exps)), c * coeff) for e, c in self._terms],
        )

    def swap(self, i: int) -> "LaurentPoly":
        """Apply the simple reflection s_i, exchanging θ_i and θ_{i+1}."""
        if not 1 <= i < self.nvars:
            raise UsageError(f"Simple reflection index {i} out of range 1..{self.nvars - 1}")
        swapped = []
        for exps, coeff in self._terms:
            e = list(exps)
            e[i - 1], e[i] = e[i], e[i - 1]
            swapped.append((tuple(e), coeff))
        return LaurentPoly(self.nvars, swapped)

    def __call__(self, point: Sequence[Scalar]) -> Fraction:
        return laurent_eval(self, point)


def laurent_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact product of two Laurent polynomials in the same variables."""
    if a.nvars != b.nvars:
        raise UsageError(f"Mismatched variable counts: {a.nvars} and {b.nvars}")
    products = []
    for ea, ca in a.terms():
        for eb, cb in b.terms():
            products.append((tuple(x + y for x, y in zip(ea, eb)), ca * cb))
    return LaurentPoly(a.nvars, products)


def laurent_divide_exact(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """
    Return r with r·den = num.

    Lexicographic order on exponent vectors is a group order on Z^n, so the
    leading term of a product is the product of leading terms and ordinary
    long division works. Every exponent of an exact quotient lies in the box
    cut out by the coordinate-wise extremes of num and den; a candidate term
    outside that box proves the division is not exact.
    """
    if num.nvars != den.nvars:
        raise UsageError(f"Mismatched variable counts: {num.nvars} and {den.nvars}")
    if den.is_zero():
        raise ConsistencyError("Division of a Laurent polynomial by zero")
    if num.is_zero():
        return LaurentPoly.zero(num.nvars)

    n = num.nvars
    num_exps = [e for e, _ in num.terms()]
    den_exps = [e for e, _ in den.terms()]
    lower = [min(e[k] for e in num_exps) - min(e[k] for e in den_exps) for k in range(n)]
    upper = [max(e[k] for e in num_exps) - max(e[k] for e in den_exps) for k in range(n)]

    lead_exps, lead_coeff = den.leading_term()
    quotient: list[tuple[Exponents, Fraction]] = []
    remainder = num
    while not remainder.is_zero():
        rem_exps, rem_coeff = remainder.leading_term()
        step = tuple(a - b for a, b in zip(rem_exps, lead_exps))
        if any(s < lo or s > hi for s, lo, hi in zip(step, lower, upper)):
            logger.error(f"Non-exact Laurent division: ({num}) / ({den})")
            raise ConsistencyError(f"({num}) is not divisible by ({den})")
        coeff = rem_coeff / lead_coeff
        quotient.append((step, coeff))
        remainder = remainder - den.scale_exponents(step, coeff)
    return LaurentPoly(n, quotient)


def laurent_eval(p: LaurentPoly, point: Sequence[Scalar]) -> Fraction:
    """Evaluate p at a point with all coordinates nonzero."""
    if len(point) != p.nvars:
        raise UsageError(f"Point has {len(point)} coordinates, expected {p.nvars}")
    values = [Fraction(x) for x in point]
    if any(x == 0 for x in values):
        raise DomainError(f"Cannot evaluate a Laurent polynomial at a point with a zero coordinate: {point}")
    total = Fraction(0)
    for exps, coeff in p.terms():
        term = coeff
        for x, e in zip(values, exps):
            if e:
                term *= x ** e
        total += term
    return total
