"""
Exact dense linear algebra over the rationals.

Matrices are numpy arrays of dtype object holding `fractions.Fraction`
entries, so numpy supplies shapes, slicing and products while every
scalar operation stays exact.

Elimination is fraction-free: rows are scaled to primitive integer
vectors and combined with integer arithmetic only, which keeps Python's
bignum arithmetic on the fast path. Rational entries reappear only when a
canonical reduced row echelon form is read off at the end.

Subspaces are stored as the RREF of a basis of row vectors, so equal
subspaces have identical representations.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from errors import ConsistencyError, UsageError

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)

Matrix = np.ndarray
ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(rows: int, cols: int) -> Matrix:
    return np.full((rows, cols), ZERO, dtype=object)


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = ONE
    return m


def scalar_matrix(n: int, value) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = Fraction(value)
    return m


def matrix(rows: Sequence[Sequence], cols: Optional[int] = None) -> Matrix:
    """Build a Fraction matrix from nested sequences of ints, Fractions or strings."""
    rows = [list(r) for r in rows]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    if any(len(r) != cols for r in rows):
        raise UsageError("Ragged rows in matrix literal")
    m = zeros(len(rows), cols)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            m[i, j] = Fraction(x)
    return m


def vector(values: Iterable) -> np.ndarray:
    return np.array([Fraction(x) for x in values], dtype=object)


def is_zero(m: Matrix) -> bool:
    return all(x == 0 for x in m.flat)


def equal(a: Matrix, b: Matrix) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def common_denominator(m: Matrix) -> int:
    return math.lcm(*(x.denominator for x in m.flat)) if m.size else 1


def scaled_integers(m: Matrix, scale: int) -> np.ndarray:
    """The integer matrix scale·m (scale must clear every denominator)."""
    out = np.empty(m.shape, dtype=object)
    for idx, x in np.ndenumerate(m):
        out[idx] = int(x * scale)
    return out


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """
    Exact product. Both factors are cleared of denominators first, so the
    inner products run on Python ints and each output entry is reduced once.
    """
    if a.shape[1] != b.shape[0]:
        raise UsageError(f"Cannot multiply shapes {a.shape} and {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    sa, sb = common_denominator(a), common_denominator(b)
    product = scaled_integers(a, sa).dot(scaled_integers(b, sb))
    scale = sa * sb
    out = np.empty(product.shape, dtype=object)
    for idx, x in np.ndenumerate(product):
        out[idx] = Fraction(x, scale)
    return out


def freeze(m: Matrix) -> Matrix:
    """Mark a matrix read-only; module generators are shared, never mutated."""
    m.flags.writeable = False
    return m


def trace(m: Matrix) -> Fraction:
    return sum((m[i, i] for i in range(min(m.shape))), ZERO)


def direct_sum(a: Matrix, b: Matrix) -> Matrix:
    m = zeros(a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])
    m[:a.shape[0], :a.shape[1]] = a
    m[a.shape[0]:, a.shape[1]:] = b
    return m


def inverse(m: Matrix) -> Matrix:
    """Exact inverse by row reduction of [m | I]."""
    n = m.shape[0]
    if m.shape != (n, n):
        raise UsageError(f"Only square matrices can be inverted, got shape {m.shape}")
    augmented = np.concatenate([m, identity(n)], axis=1)
    reduced, _ = rref(augmented)
    if not equal(reduced[:, :n], identity(n)):
        raise UsageError("Matrix is not invertible")
    return reduced[:, n:]


def _primitive(row: list[int]) -> list[int]:
    """Divide out the content and make the first nonzero entry positive."""
    g = 0
    lead = 0
    for x in row:
        if x:
            if not lead:
                lead = x
            g = math.gcd(g, x)
            if g == 1 and lead:
                break
    if not g:
        return row
    if lead < 0:
        g = -g
    if g == 1:
        return row
    return [x // g for x in row]


def integer_row(values: Iterable) -> list[int]:
    """Scale a rational vector to an integer vector spanning the same line."""
    values = [Fraction(x) for x in values]
    scale = math.lcm(*(v.denominator for v in values)) if values else 1
    return _primitive([int(v * scale) for v in values])


def integer_matrix(m: Matrix) -> list[list[int]]:
    """Scale a whole matrix by one common denominator (preserves its action up to a scalar)."""
    scale = common_denominator(m)
    return [[int(x * scale) for x in row] for row in m]


def sparse_rows(int_matrix: list[list[int]]) -> list[list[tuple[int, int]]]:
    return [[(j, a) for j, a in enumerate(row) if a] for row in int_matrix]


def apply_sparse(rows: list[list[tuple[int, int]]], v: Sequence[int]) -> list[int]:
    return [sum(a * v[j] for j, a in row) for row in rows]


class EchelonBuilder:
    """
    Incrementally maintained integer echelon basis.

    Every stored row is primitive, has a positive pivot, and is zero in
    every other row's pivot column.
    """

    def __init__(self, ambient: int):
        self.ambient = ambient
        self.rows: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: Sequence[int]) -> list[int]:
        row = list(row)
        if len(row) != self.ambient:
            raise UsageError(f"Vector of length {len(row)} in a space of dimension {self.ambient}")
        for col, pivot_row in self.rows.items():
            a = row[col]
            if a:
                p = pivot_row[col]
                row = [p * x - a * y for x, y in zip(row, pivot_row)]
        return _primitive(row)

    def add(self, row: Sequence[int]) -> Optional[list[int]]:
        """Insert a vector; return the new reduced basis row, or None if it was dependent."""
        reduced = self.reduce(row)
        col = next((j for j, x in enumerate(reduced) if x), None)
        if col is None:
            return None
        p = reduced[col]
        for other_col, other in list(self.rows.items()):
            a = other[col]
            if a:
                self.rows[other_col] = _primitive([p * x - a * y for x, y in zip(other, reduced)])
        self.rows[col] = reduced
        return reduced

    def add_fraction_vector(self, values: Iterable) -> Optional[list[int]]:
        return self.add(integer_row(values))

    def to_subspace(self) -> "Subspace":
        basis = zeros(len(self.rows), self.ambient)
        for i, col in enumerate(sorted(self.rows)):
            row = self.rows[col]
            p = row[col]
            for j, x in enumerate(row):
                if x:
                    basis[i, j] = Fraction(x, p)
        return Subspace(self.ambient, basis)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of Q^ambient, stored as the RREF of a row basis."""
    ambient: int
    basis: Matrix

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, zeros(0, ambient))

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(ambient, identity(ambient))

    @classmethod
    def span(cls, ambient: int, vectors: Iterable[Sequence]) -> "Subspace":
        builder = EchelonBuilder(ambient)
        for v in vectors:
            builder.add_fraction_vector(v)
        return builder.to_subspace()

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(row) if x != 0) for row in self.basis]

    def vectors(self) -> list[np.ndarray]:
        return [self.basis[i, :].copy() for i in range(self.dim)]

    def builder(self) -> EchelonBuilder:
        b = EchelonBuilder(self.ambient)
        for v in self.vectors():
            b.add_fraction_vector(v)
        return b

    def contains(self, v: Sequence) -> bool:
        return not any(self.builder().reduce(integer_row(v)))

    def contains_subspace(self, other: "Subspace") -> bool:
        b = self.builder()
        return all(not any(b.reduce(integer_row(v))) for v in other.vectors())

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.ambient != self.ambient:
            raise UsageError("Subspaces live in different ambient spaces")
        return Subspace.span(self.ambient, self.vectors() + other.vectors())

    def intersect(self, other: "Subspace") -> "Subspace":
        """U ∩ V from the left kernel of the stacked bases."""
        if other.ambient != self.ambient:
            raise UsageError("Subspaces live in different ambient spaces")
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient)
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        relations = kernel(stacked.T)
        vectors = [matmul(r[:self.dim].reshape(1, -1), self.basis)[0] for r in relations.vectors()]
        return Subspace.span(self.ambient, vectors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and equal(self.basis, other.basis)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row echelon form (same shape as m, zero rows last) and rank."""
    rows, cols = m.shape
    builder = EchelonBuilder(cols)
    for i in range(rows):
        builder.add(integer_row(m[i, :]))
    sub = builder.to_subspace()
    result = zeros(rows, cols)
    result[:sub.dim, :] = sub.basis
    return result, sub.dim


def kernel(m: Matrix) -> Subspace:
    """{v : m·v = 0}."""
    rows, cols = m.shape
    reduced, rank = rref(m)
    pivots = {}
    for i in range(rank):
        col = next(j for j in range(cols) if reduced[i, j] != 0)
        pivots[col] = i
    vectors = []
    for free in range(cols):
        if free in pivots:
            continue
        v = [ZERO] * cols
        v[free] = ONE
        for col, i in pivots.items():
            v[col] = -reduced[i, free]
        vectors.append(v)
    return Subspace.span(cols, vectors)


def _kernel_of_integer_rows(rows: Iterable[list[int]], unknowns: int) -> Subspace:
    builder = EchelonBuilder(unknowns)
    for row in rows:
        builder.add(row)
        if builder.rank == unknowns:
            return Subspace.zero(unknowns)
    vectors = []
    for free in range(unknowns):
        if free in builder.rows:
            continue
        v = [ZERO] * unknowns
        v[free] = ONE
        for col, row in builder.rows.items():
            v[col] = -Fraction(row[free], row[col])
        vectors.append(v)
    return Subspace.span(unknowns, vectors)


def solve_hom_system(
    blocks: Sequence[tuple[Matrix, Matrix]],
    support: Optional[np.ndarray] = None,
) -> Subspace:
    """
    All d×e matrices X with A_k·X = X·B_k for every (A_k, B_k), as a subspace
    of Q^(d·e) in row-major coordinates.

    `support` is an optional boolean d×e mask; entries outside it are forced
    to zero. Callers pass it when the solution space is known a priori to
    vanish there (for example across different generalized weight spaces).
    """
    if not blocks:
        raise UsageError("solve_hom_system needs at least one constraint pair")
    d = blocks[0][0].shape[0]
    e = blocks[0][1].shape[0]
    for a, b in blocks:
        if a.shape != (d, d) or b.shape != (e, e):
            raise UsageError(f"Inconsistent constraint shapes {a.shape} and {b.shape} for a {d}x{e} unknown")
    if support is None:
        support = np.ones((d, e), dtype=bool)
    positions = [(r, c) for r in range(d) for c in range(e) if support[r, c]]
    index = {pos: k for k, pos in enumerate(positions)}
    unknowns = len(positions)
    if unknowns == 0:
        return Subspace.zero(d * e)

    def equations():
        for a, b in blocks:
            scale = math.lcm(*(x.denominator for x in a.flat), *(x.denominator for x in b.flat))
            ia = [[int(x * scale) for x in row] for row in a]
            ib = [[int(x * scale) for x in row] for row in b]
            a_rows = sparse_rows(ia)
            b_cols = [[(t, ib[t][c]) for t in range(e) if ib[t][c]] for c in range(e)]
            for r in range(d):
                for c in range(e):
                    row = [0] * unknowns
                    touched = False
                    for t, coeff in a_rows[r]:
                        k = index.get((t, c))
                        if k is not None:
                            row[k] += coeff
                            touched = True
                    for t, coeff in b_cols[c]:
                        k = index.get((r, t))
                        if k is not None:
                            row[k] -= coeff
                            touched = True
                    if touched and any(row):
                        yield row

    solutions = _kernel_of_integer_rows(equations(), unknowns)
    embedded = []
    for v in solutions.vectors():
        full = [ZERO] * (d * e)
        for k, (r, c) in enumerate(positions):
            full[r * e + c] = v[k]
        embedded.append(full)
    return Subspace.span(d * e, embedded)


def spin(generators: Sequence[Matrix], seed: Subspace, limit: Optional[int] = None) -> Subspace:
    """
    Smallest subspace containing `seed` and invariant under every generator.

    Breadth-first: each newly found basis vector is pushed through every
    generator and reduced against the current basis until nothing new
    appears. `limit` caps the dimension; exceeding it is a consistency
    failure.
    """
    n = seed.ambient
    for g in generators:
        if g.shape != (n, n):
            raise UsageError(f"Generator of shape {g.shape} does not act on a space of dimension {n}")
    gens = [sparse_rows(integer_matrix(g)) for g in generators]
    builder = EchelonBuilder(n)
    queue = []
    for v in seed.vectors():
        added = builder.add(integer_row(v))
        if added is not None:
            queue.append(added)
    return spin_integer(gens, builder, queue, limit).to_subspace()


def spin_integer(
    gens: Sequence[list[list[tuple[int, int]]]],
    builder: EchelonBuilder,
    queue: list[list[int]],
    limit: Optional[int] = None,
) -> EchelonBuilder:
    """Integer spinning loop shared by `spin` and the enveloping-algebra closure."""
    while queue:
        v = queue.pop(0)
        for g in gens:
            added = builder.add(apply_sparse(g, v))
            if added is not None:
                if limit is not None and builder.rank > limit:
                    logger.error(f"Spinning exceeded dimension limit {limit}")
                    raise ConsistencyError(f"Invariant subspace grew past its theoretical bound {limit}")
                queue.append(added)
        if builder.rank == builder.ambient:
            break
    return builder


def quotient_coordinates(sub: Subspace) -> tuple[Matrix, Matrix]:
    """
    Projection onto, and section of, the quotient Q^ambient / sub.

    The quotient basis is the images of the standard vectors at the
    non-pivot columns of sub's RREF. Returns (projection, section) with
    projection·section = I and kernel(projection) = sub.
    """
    n = sub.ambient
    pivots = sub.pivots
    free = [j for j in range(n) if j not in set(pivots)]
    projection = zeros(len(free), n)
    section = zeros(n, len(free))
    for k, j in enumerate(free):
        projection[k, j] = ONE
        section[j, k] = ONE
        for i, p in enumerate(pivots):
            projection[k, p] = -sub.basis[i, j]
    return projection, section


def require_square(m: Matrix, n: int, what: str) -> None:
    if m.shape != (n, n):
        logger.error(f"{what} has shape {m.shape}, expected ({n}, {n})")
        raise ConsistencyError(f"{what} has shape {m.shape}, expected ({n}, {n})")
