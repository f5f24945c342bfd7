"""
Structure of finite-dimensional modules given by generator matrices.

The enveloping algebra A of a module M is the span of all words in its
generators. When M carries θ-matrices and a central character, M splits
into generalized weight spaces M_χ; the projections e_χ onto them lie in
A, so A is computed one Peirce block e_χ' A e_χ at a time and Hom spaces
only need entries that map M_χ into the matching weight space. Both
reductions shrink the linear systems from d² unknowns to Σ d_χ d_χ'.

The Jacobson radical is the radical of the trace form (x, y) -> tr(xy);
in block form J ∩ e_j A e_i = {x : tr(xy) = 0 for all y in e_i A e_j}.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Sequence, Union

import numpy as np

import linalg
from affhecke import AlgebraModule, CentralCharacterData
from errors import ConsistencyError, UsageError
from finhecke import FiniteHeckeModule
from linalg import EchelonBuilder, Matrix, Subspace

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)

ModuleLike = Union[AlgebraModule, FiniteHeckeModule, "QuotientModule"]
BlockKey = tuple[int, int]


def _module(m) -> Union[AlgebraModule, FiniteHeckeModule]:
    return m.module if isinstance(m, QuotientModule) else m


def _generators(m) -> list[Matrix]:
    m = _module(m)
    return list(m.t_matrices) + list(getattr(m, "theta_matrices", ()))


@dataclass(frozen=True, eq=False)
class WeightDecomposition:
    """
    Generalized weight spaces of the θ-action. `basis_change` has the new
    basis as columns, block by block; `inverse` is its inverse.
    """
    dim: int
    weights: tuple[tuple[Fraction, ...], ...]
    sizes: tuple[int, ...]
    basis_change: Matrix
    inverse: Matrix
    trivial: bool = False

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, start = [], 0
        for size in self.sizes:
            out.append(start)
            start += size
        return tuple(out)

    def block(self, k: int) -> slice:
        return slice(self.offsets[k], self.offsets[k] + self.sizes[k])

    def coordinate_weights(self) -> list[tuple[Fraction, ...]]:
        return [w for w, size in zip(self.weights, self.sizes) for _ in range(size)]

    def to_weight_basis(self, g: Matrix) -> Matrix:
        if self.trivial:
            return g
        return linalg.matmul(linalg.matmul(self.inverse, g), self.basis_change)

    def from_weight_basis(self, g: Matrix) -> Matrix:
        if self.trivial:
            return g
        return linalg.matmul(linalg.matmul(self.basis_change, g), self.inverse)

    def vector_from_weight_basis(self, v: Sequence) -> np.ndarray:
        column = np.array([Fraction(x) for x in v], dtype=object).reshape(-1, 1)
        if self.trivial:
            return column[:, 0]
        return linalg.matmul(self.basis_change, column)[:, 0]


def _single_block(d: int) -> WeightDecomposition:
    return WeightDecomposition(d, ((),), (d,), linalg.identity(d), linalg.identity(d), trivial=True)


def generalized_eigenspace(g: Matrix, value: Fraction) -> Subspace:
    """ker (g - value)^d."""
    d = g.shape[0]
    power = g - linalg.scalar_matrix(d, value)
    exponent = 1
    while exponent < d:
        power = linalg.matmul(power, power)
        exponent *= 2
    return linalg.kernel(power)


@lru_cache(maxsize=128)
def weight_decomposition(m: ModuleLike) -> WeightDecomposition:
    """Joint generalized eigenspaces of θ_1..θ_n; one block when there is no θ data."""
    m = _module(m)
    d = m.dim
    thetas = getattr(m, "theta_matrices", ())
    chi: Optional[CentralCharacterData] = getattr(m, "central_character", None)
    if not thetas or chi is None or d == 0:
        return _single_block(d)

    candidates = chi.distinct_values()
    pieces: list[tuple[tuple[Fraction, ...], Subspace]] = [((), Subspace.full(d))]
    for theta in thetas:
        spaces = [(value, generalized_eigenspace(theta, value)) for value in candidates]
        spaces = [(value, space) for value, space in spaces if space.dim]
        refined = []
        for label, piece in pieces:
            for value, space in spaces:
                common = space if piece.dim == d else piece.intersect(space)
                if common.dim:
                    refined.append((label + (value,), common))
        pieces = refined

    if sum(piece.dim for _, piece in pieces) != d:
        logger.error(f"Weight spaces of a {d}-dimensional module do not fill it; central character {chi}")
        raise ConsistencyError(f"θ-eigenvalues of the module are not all among the central character {chi}")
    if len(pieces) == 1:
        return WeightDecomposition(d, (pieces[0][0],), (d,), linalg.identity(d), linalg.identity(d), trivial=True)

    columns = [v for _, piece in pieces for v in piece.vectors()]
    basis_change = linalg.zeros(d, d)
    for k, v in enumerate(columns):
        basis_change[:, k] = v
    decomposition = WeightDecomposition(
        d,
        tuple(label for label, _ in pieces),
        tuple(piece.dim for _, piece in pieces),
        basis_change,
        linalg.inverse(basis_change),
    )
    logger.debug(f"Weight decomposition of a {d}-dimensional module: block sizes {decomposition.sizes}")
    return decomposition


@dataclass(frozen=True, eq=False)
class EnvelopingAlgebra:
    """
    The unital algebra generated by a module's action matrices, stored as
    Peirce blocks: blocks[(j, i)] spans e_j A e_i as flattened d_j×d_i
    matrices in the weight basis.
    """
    decomposition: WeightDecomposition
    blocks: dict[BlockKey, Subspace] = field(default_factory=dict)

    @property
    def module_dim(self) -> int:
        return self.decomposition.dim

    @property
    def dim(self) -> int:
        return sum(space.dim for space in self.blocks.values())

    def block_matrices(self, key: BlockKey) -> list[Matrix]:
        j, i = key
        rows, cols = self.decomposition.sizes[j], self.decomposition.sizes[i]
        space = self.blocks.get(key)
        if space is None:
            return []
        return [v.reshape(rows, cols) for v in space.vectors()]

    def embed(self, key: BlockKey, x: Matrix) -> Matrix:
        """A block element as a d×d matrix in the module's own basis."""
        j, i = key
        full = linalg.zeros(self.module_dim, self.module_dim)
        full[self.decomposition.block(j), self.decomposition.block(i)] = x
        return self.decomposition.from_weight_basis(full)

    @cached_property
    def basis(self) -> list[Matrix]:
        return [self.embed(key, x) for key in sorted(self.blocks) for x in self.block_matrices(key)]


def envelope(m: Union[ModuleLike, Sequence[Matrix]], decomposition: Optional[WeightDecomposition] = None) -> EnvelopingAlgebra:
    """
    Closure of the identity under left multiplication by every generator,
    breadth-first, one Peirce block at a time.
    """
    if isinstance(m, (list, tuple)):
        gens = list(m)
        if not gens:
            raise UsageError("envelope of an empty generator list needs a module")
        d = gens[0].shape[0]
        decomposition = decomposition or _single_block(d)
    else:
        gens = _generators(m)
        decomposition = decomposition or weight_decomposition(m)
        d = decomposition.dim
    for g in gens:
        linalg.require_square(g, d, "envelope generator")

    sizes = decomposition.sizes
    nblocks = len(sizes)
    by_source: list[list[tuple[int, np.ndarray]]] = [[] for _ in range(nblocks)]
    for g in gens:
        gw = decomposition.to_weight_basis(g)
        gi = linalg.scaled_integers(gw, linalg.common_denominator(gw))
        for j in range(nblocks):
            for k in range(nblocks):
                piece = gi[decomposition.block(j), decomposition.block(k)]
                if any(x for x in piece.flat):
                    by_source[k].append((j, piece))

    builders: dict[BlockKey, EchelonBuilder] = {}
    queue: deque[tuple[int, int, list[int]]] = deque()
    for i, size in enumerate(sizes):
        builder = builders.setdefault((i, i), EchelonBuilder(size * size))
        seed = [1 if r == c else 0 for r in range(size) for c in range(size)]
        queue.append((i, i, builder.add(seed)))

    total = nblocks
    while queue:
        k, i, row = queue.popleft()
        x = np.array(row, dtype=object).reshape(sizes[k], sizes[i])
        for j, piece in by_source[k]:
            y = piece.dot(x)
            builder = builders.setdefault((j, i), EchelonBuilder(sizes[j] * sizes[i]))
            added = builder.add(list(y.flat))
            if added is not None:
                total += 1
                if total > d * d:
                    logger.error(f"Enveloping algebra exceeded dimension {d * d}")
                    raise ConsistencyError(f"Enveloping algebra of a {d}-dimensional module grew past {d * d}")
                queue.append((j, i, added))

    blocks = {key: b.to_subspace() for key, b in builders.items() if b.rank}
    algebra = EnvelopingAlgebra(decomposition, blocks)
    logger.debug(f"Enveloping algebra of dimension {algebra.dim} on a {d}-dimensional module")
    return algebra


def _trace_pairing(x: Matrix, y: Matrix) -> Fraction:
    """tr(x·y) for x of shape (a, b) and y of shape (b, a)."""
    return sum((x[r, s] * y[s, r] for r in range(x.shape[0]) for s in range(x.shape[1])), Fraction(0))


def radical_blocks(a: EnvelopingAlgebra) -> dict[BlockKey, list[Matrix]]:
    """Basis of J ∩ e_j A e_i for every block, in weight coordinates."""
    out: dict[BlockKey, list[Matrix]] = {}
    for key in sorted(a.blocks):
        j, i = key
        xs = a.block_matrices(key)
        ys = a.block_matrices((i, j))
        if not ys:
            out[key] = xs
            continue
        gram = linalg.matrix([[_trace_pairing(x, y) for x in xs] for y in ys], cols=len(xs))
        null = linalg.kernel(gram)
        if null.dim:
            combos = []
            for c in null.vectors():
                combo = linalg.zeros(*xs[0].shape)
                for coeff, x in zip(c, xs):
                    if coeff:
                        combo = combo + x * coeff
                combos.append(combo)
            out[key] = combos
    return out


def radical(a: EnvelopingAlgebra) -> Subspace:
    """The Jacobson radical as a subspace of flattened d×d matrices (module basis)."""
    d = a.module_dim
    vectors = [a.embed(key, x).reshape(-1) for key, xs in radical_blocks(a).items() for x in xs]
    return Subspace.span(d * d, vectors)


def module_radical(m: ModuleLike, a: Optional[EnvelopingAlgebra] = None) -> Subspace:
    """rad(M) = J·M, spanned by the columns of the radical's block matrices."""
    a = a or envelope(m)
    decomposition = a.decomposition
    d = decomposition.dim
    vectors = []
    for (j, _), xs in radical_blocks(a).items():
        start = decomposition.offsets[j]
        for x in xs:
            for col in range(x.shape[1]):
                column = x[:, col]
                if any(v != 0 for v in column):
                    padded = [Fraction(0)] * d
                    padded[start:start + x.shape[0]] = list(column)
                    vectors.append(decomposition.vector_from_weight_basis(padded))
    return Subspace.span(d, vectors)


def nilpotency_index(a: EnvelopingAlgebra) -> int:
    """Smallest k with J^k = 0."""
    d = a.module_dim
    rad = radical(a)
    if rad.dim == 0:
        return 1
    rad_mats = [v.reshape(d, d) for v in rad.vectors()]
    current = rad_mats
    for k in range(2, d + 2):
        products = [linalg.matmul(x, y).reshape(-1) for x in current for y in rad_mats]
        span = Subspace.span(d * d, products)
        if span.dim == 0:
            return k
        current = [v.reshape(d, d) for v in span.vectors()]
    logger.error("Trace-form radical is not nilpotent")
    raise ConsistencyError("Trace-form radical is not nilpotent")


def hom_space(m1: ModuleLike, m2: ModuleLike) -> Subspace:
    """
    All X: M1 -> M2 (d2×d1, flattened row-major) intertwining every generator.
    Weight-preserving entries only when both modules carry central characters.
    """
    p1, p2 = _module(m1).params, _module(m2).params
    if p1 != p2:
        raise UsageError(f"Modules over {p1} and {p2} cannot be compared")
    g1, g2 = _generators(m1), _generators(m2)
    if len(g1) != len(g2):
        logger.error(f"Generator arity mismatch: {len(g1)} vs {len(g2)}")
        raise UsageError(f"Modules have {len(g1)} and {len(g2)} generators; restrict both to the same generators")
    d1, d2 = _module(m1).dim, _module(m2).dim
    if not g1:
        return Subspace.full(d2 * d1)

    w1, w2 = weight_decomposition(m1), weight_decomposition(m2)
    if not w1.weights[0] or not w2.weights[0]:
        return linalg.solve_hom_system(list(zip(g2, g1)))

    labels1, labels2 = w1.coordinate_weights(), w2.coordinate_weights()
    support = np.array([[labels2[r] == labels1[c] for c in range(d1)] for r in range(d2)], dtype=bool)
    blocks = [(w2.to_weight_basis(b), w1.to_weight_basis(a)) for a, b in zip(g1, g2)]
    solutions = linalg.solve_hom_system(blocks, support)
    vectors = []
    for v in solutions.vectors():
        x = v.reshape(d2, d1)
        if not w2.trivial:
            x = linalg.matmul(w2.basis_change, x)
        if not w1.trivial:
            x = linalg.matmul(x, w1.inverse)
        vectors.append(x.reshape(-1))
    return Subspace.span(d2 * d1, vectors)


def commutant(m: ModuleLike) -> Subspace:
    return hom_space(m, m)


def _spin_dim(gens: Sequence[Matrix], v: Sequence) -> int:
    d = len(v)
    return linalg.spin(gens, Subspace.span(d, [v])).dim


def _weight_vector_test(m: ModuleLike) -> Optional[bool]:
    """
    Decide irreducibility from a weight χ whose θ-eigenspace E_χ is a line:
    a proper submodule either meets E_χ, and then the line does not generate
    M, or it misses the whole weight space, and then every θ-eigenvector of
    weight χ in the dual kills it. None when no such weight exists.
    """
    module = _module(m)
    thetas = getattr(module, "theta_matrices", ())
    if not thetas or getattr(module, "central_character", None) is None:
        return None
    d = module.dim
    gens = _generators(module)
    dual_gens = [g.T.copy() for g in gens]
    for weight in weight_decomposition(module).weights:
        shifted = [t - linalg.scalar_matrix(d, value) for t, value in zip(thetas, weight)]
        eigen = linalg.kernel(np.concatenate(shifted, axis=0))
        if eigen.dim != 1:
            continue
        if _spin_dim(gens, eigen.vectors()[0]) < d:
            return False
        dual_eigen = linalg.kernel(np.concatenate([s.T for s in shifted], axis=0))
        if dual_eigen.dim == 0:
            continue
        return _spin_dim(dual_gens, dual_eigen.vectors()[0]) == d
    return None


def is_irreducible(m: ModuleLike) -> bool:
    """Radical of the envelope kills M and the commutant is the scalars."""
    d = _module(m).dim
    if d <= 1:
        return d == 1
    verdict = _weight_vector_test(m)
    if verdict is not None:
        return verdict
    a = envelope(m)
    if a.dim == d * d:
        return True
    if module_radical(m, a).dim:
        return False
    return commutant(m).dim == 1


@dataclass(frozen=True, eq=False)
class QuotientModule:
    """module = parent / kernel, with quotient coordinates projection·v and lift section·u."""
    parent: AlgebraModule
    projection: Matrix
    section: Matrix
    module: AlgebraModule

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def params(self):
        return self.module.params

    @property
    def t_matrices(self):
        return self.module.t_matrices

    @property
    def theta_matrices(self):
        return self.module.theta_matrices

    @property
    def central_character(self):
        return self.module.central_character

    def restrict(self) -> FiniteHeckeModule:
        return self.module.restrict()


def quotient_module(m: AlgebraModule, sub: Subspace) -> QuotientModule:
    """M / sub for an invariant subspace sub."""
    projection, section = linalg.quotient_coordinates(sub)

    def induced(g: Matrix) -> Matrix:
        return linalg.matmul(linalg.matmul(projection, g), section)

    module = AlgebraModule(
        m.params,
        tuple(induced(t) for t in m.t_matrices),
        tuple(induced(t) for t in m.theta_matrices),
        "quotient",
        m.central_character,
        m.source,
    )
    return QuotientModule(m, projection, section, module)


def cosocle(m: Union[AlgebraModule, QuotientModule]) -> QuotientModule:
    """M / rad(M). The head of an induced-standard module must be irreducible."""
    module = _module(m)
    d = module.dim
    if is_irreducible(module):
        identity = linalg.identity(d)
        return QuotientModule(module, identity, identity, module)
    rad = module_radical(module)
    head = quotient_module(module, rad)
    logger.debug(f"Head of {module.kind} module {module.source}: dimension {head.dim} of {d}")
    if module.kind == "induced-standard" and not is_irreducible(head):
        logger.error(f"Head of the standard module {module.source} is reducible (dimension {head.dim})")
        raise ConsistencyError(f"Head of the standard module {module.source} is reducible")
    return head
