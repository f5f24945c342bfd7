"""
The Coxeter system (S_n, {s_1, …, s_{n-1}}).

Permutations are stored in one-line notation (w(1), …, w(n)).
Composition applies the right factor first: (u·v)(k) = u(v(k)). With this
convention s_i·w swaps the VALUES i and i+1 in the one-line notation of w,
and w·s_i swaps the POSITIONS i and i+1.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import factorial, prod
from typing import Sequence, Union

from errors import ConsistencyError, UsageError

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise UsageError(f"Not a permutation of 1..{len(images)}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def simple(cls, n: int, i: int) -> "Permutation":
        if not 1 <= i < n:
            raise UsageError(f"Simple reflection s_{i} does not exist in S_{n}")
        images = list(range(1, n + 1))
        images[i - 1], images[i] = images[i], images[i - 1]
        return cls(tuple(images))

    @classmethod
    def longest(cls, n: int) -> "Permutation":
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def from_word(cls, n: int, word: Sequence[int]) -> "Permutation":
        w = cls.identity(n)
        for i in word:
            w = w * cls.simple(n, i)
        return w

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.n != self.n:
            raise UsageError(f"Cannot compose permutations of {self.n} and {other.n} letters")
        return Permutation(tuple(self.images[other.images[k] - 1] for k in range(self.n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for pos, value in enumerate(self.images, start=1):
            inv[value - 1] = pos
        return Permutation(tuple(inv))

    def left_multiply_simple(self, i: int) -> "Permutation":
        """s_i·w: exchange the values i and i+1."""
        swap = {i: i + 1, i + 1: i}
        return Permutation(tuple(swap.get(x, x) for x in self.images))

    def right_multiply_simple(self, i: int) -> "Permutation":
        """w·s_i: exchange the positions i and i+1."""
        images = list(self.images)
        images[i - 1], images[i] = images[i], images[i - 1]
        return Permutation(tuple(images))

    def has_left_descent(self, i: int) -> bool:
        """l(s_i·w) < l(w), i.e. i+1 appears before i."""
        return self.images.index(i + 1) < self.images.index(i)

    def has_right_descent(self, i: int) -> bool:
        """l(w·s_i) < l(w), i.e. w(i) > w(i+1)."""
        return self.images[i - 1] > self.images[i]

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.images) + ")"


def length(w: Permutation) -> int:
    """Coxeter length = number of inversions."""
    images = w.images
    return sum(1 for a in range(len(images)) for b in range(a + 1, len(images)) if images[a] > images[b])


def reduced_word(w: Permutation) -> tuple[int, ...]:
    """
    A reduced word (i_1, …, i_k) with w = s_{i_1}·…·s_{i_k}.

    Rule: repeatedly strip the leftmost right descent, w = (w·s_i)·s_i.
    The first letter of the result is therefore always a left descent of w.
    """
    word: list[int] = []
    current = w
    while True:
        descent = next((i for i in range(1, w.n) if current.has_right_descent(i)), None)
        if descent is None:
            break
        word.append(descent)
        current = current.right_multiply_simple(descent)
    return tuple(reversed(word))


@lru_cache(maxsize=None)
def all_permutations(n: int) -> tuple[Permutation, ...]:
    """S_n sorted by length, then by one-line notation."""
    perms = [Permutation(p) for p in permutations(range(1, n + 1))]
    return tuple(sorted(perms, key=lambda w: (length(w), w.images)))


@dataclass(frozen=True)
class Composition:
    """An ordered tuple of positive parts; defines W_c = S_{c_1} × … × S_{c_k}."""
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise UsageError(f"Composition parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def blocks(self) -> list[range]:
        """Positions (1-based) of each block."""
        out = []
        start = 1
        for p in self.parts:
            out.append(range(start, start + p))
            start += p
        return out

    def same_block(self, i: int, j: int) -> bool:
        return any(i in b and j in b for b in self.blocks())

    def inner_simple_indices(self) -> list[int]:
        """The simple reflections s_i lying in W_c."""
        return [i for i in range(1, self.n) if self.same_block(i, i + 1)]


def is_min_coset_rep(x: Permutation, c: Composition) -> bool:
    """x is the shortest element of x·W_c iff it has no right descent inside a block."""
    return not any(x.has_right_descent(i) for i in c.inner_simple_indices())


@lru_cache(maxsize=None)
def min_coset_reps(n: int, c: Composition) -> tuple[Permutation, ...]:
    """Minimal-length representatives of S_n / W_c, sorted by length then one-line notation."""
    if c.n != n:
        raise UsageError(f"Composition {c.parts} does not sum to {n}")
    reps = tuple(w for w in all_permutations(n) if is_min_coset_rep(w, c))
    expected = factorial(n) // prod(factorial(p) for p in c.parts)
    if len(reps) != expected:
        logger.error(f"Found {len(reps)} representatives for {c.parts}, expected {expected}")
        raise ConsistencyError(f"Coset representative count {len(reps)} != {expected} for {c.parts}")
    return reps


def factor_coset(w: Permutation, c: Composition) -> tuple[Permutation, Permutation]:
    """w = x·u with x a minimal coset representative and u ∈ W_c (lengths add)."""
    images = list(w.images)
    for block in c.blocks():
        lo, hi = block.start - 1, block.stop - 1
        images[lo:hi] = sorted(images[lo:hi])
    x = Permutation(tuple(images))
    u = x.inverse() * w
    return x, u


@dataclass(frozen=True)
class LongerRep:
    rep: Permutation


@dataclass(frozen=True)
class ShorterRep:
    rep: Permutation


@dataclass(frozen=True)
class StaysInParabolic:
    """s·x = x·s_t with s_t ∈ W_c."""
    t: int


DeodharCase = Union[LongerRep, ShorterRep, StaysInParabolic]


def deodhar_step(s: int, x: Permutation, c: Composition) -> DeodharCase:
    """Classify s_s·x for a minimal coset representative x of W_c."""
    if not is_min_coset_rep(x, c):
        raise UsageError(f"{x} is not a minimal coset representative for {c.parts}")
    y = x.left_multiply_simple(s)
    if is_min_coset_rep(y, c):
        if x.has_left_descent(s):
            return ShorterRep(y)
        return LongerRep(y)
    t = x.inverse() * y
    moved = [k for k in range(1, x.n + 1) if t(k) != k]
    if len(moved) != 2 or moved[1] != moved[0] + 1 or not c.same_block(moved[0], moved[1]):
        logger.error(f"s_{s}·{x} leaves the representatives but x^-1·s·x = {t} is not in W_c")
        raise ConsistencyError(f"Deodhar's lemma failed for s_{s} and {x}: x^-1·s·x = {t}")
    return StaysInParabolic(moved[0])
