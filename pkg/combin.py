"""
Partitions, standard and semistandard tableaux.

Partitions are ordered here by the REVERSE of the usual dominance order:
λ ≤ μ iff every partial sum of λ is ≥ the matching partial sum of μ. Under
this order (n) is the smallest partition of n and (1, …, 1) the biggest.

Partitions double as K-type labels: the label λ names the Specht-type
constituent built in finhecke, with min_label(n) = (n) the Steinberg
(sign-type) label and max_label(n) = (1ⁿ) the trivial-type label.
"""
import logging
import math
import re
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from itertools import accumulate
from typing import Iterator, Sequence

from errors import ConsistencyError, UsageError

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)

# hook-length results are cross-checked by enumeration up to this size
ENUMERATION_CHECK_MAX = 8

Tableau = tuple[tuple[int, ...], ...]


@total_ordering
@dataclass(frozen=True)
class Partition:
    """A weakly decreasing tuple of positive parts."""
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise UsageError(f"Partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise UsageError(f"Partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse "[2,1]" (brackets optional, "[]" is the empty partition)."""
        body = text.strip()
        if not re.fullmatch(r"\[?\s*(\d+\s*(,\s*\d+\s*)*)?\]?", body):
            raise UsageError(f"Malformed partition: {text!r}")
        numbers = re.findall(r"\d+", body)
        return cls(tuple(int(x) for x in numbers))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def __lt__(self, other: "Partition") -> bool:
        # plain lexicographic order on parts; used only for sorting
        return self.parts < other.parts

    def __str__(self) -> str:
        return "[" + ",".join(str(p) for p in self.parts) + "]"

    def cells(self) -> list[tuple[int, int]]:
        return [(r, c) for r, length in enumerate(self.parts) for c in range(length)]


KTypeLabel = Partition


def _partial_sums(p: Partition, length: int) -> list[int]:
    padded = list(p.parts) + [0] * (length - len(p))
    return list(accumulate(padded))


def dominance_leq(a: Partition, b: Partition) -> bool:
    """a ≤ b in the reversed dominance order: partial sums of a are ≥ those of b."""
    if a.size != b.size:
        raise UsageError(f"Cannot compare partitions of {a.size} and {b.size}")
    length = max(len(a), len(b))
    return all(x >= y for x, y in zip(_partial_sums(a, length), _partial_sums(b, length)))


def usual_dominance_leq(a: Partition, b: Partition) -> bool:
    """a ⊴ b in the textbook dominance order (the reverse of dominance_leq)."""
    return dominance_leq(b, a)


def min_label(n: int) -> KTypeLabel:
    if n <= 0:
        raise UsageError(f"min_label needs n >= 1, got {n}")
    return Partition((n,))


def max_label(n: int) -> KTypeLabel:
    if n <= 0:
        raise UsageError(f"max_label needs n >= 1, got {n}")
    return Partition((1,) * n)


def conjugate(p: Partition) -> Partition:
    if not p.parts:
        return p
    return Partition(tuple(sum(1 for part in p.parts if part > i) for i in range(p.parts[0])))


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of n in descending lexicographic order."""
    if n < 0:
        raise UsageError(f"Cannot enumerate partitions of {n}")

    def build(remaining: int, largest: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in build(remaining - first, first):
                yield (first,) + rest

    return [Partition(parts) for parts in build(n, n)]


def hook_length_count(p: Partition) -> int:
    conj = conjugate(p)
    hooks = 1
    for r, c in p.cells():
        hooks *= (p.parts[r] - c - 1) + (conj.parts[c] - r - 1) + 1
    return math.factorial(p.size) // hooks


def standard_tableaux(p: Partition) -> list[Tableau]:
    """
    All standard Young tableaux of shape p, by backtracking: the entries
    1..n are placed one at a time into addable cells.

    Order is deterministic: row index of each successive entry,
    lexicographically (so the row-reading tableau comes first).
    """
    shape = p.parts
    rows: list[list[int]] = [[] for _ in shape]
    found: list[Tableau] = []

    def place(k: int) -> None:
        if k > p.size:
            found.append(tuple(tuple(r) for r in rows))
            return
        for r in range(len(shape)):
            if len(rows[r]) < shape[r] and (r == 0 or len(rows[r - 1]) > len(rows[r])):
                rows[r].append(k)
                place(k + 1)
                rows[r].pop()

    place(1)
    return found


def count_syt(p: Partition) -> int:
    """Number of standard Young tableaux of shape p (hook-length formula, enumeration-checked)."""
    value = hook_length_count(p)
    if p.size <= ENUMERATION_CHECK_MAX:
        enumerated = len(standard_tableaux(p))
        if enumerated != value:
            logger.error(f"Hook-length count {value} != enumerated count {enumerated} for {p}")
            raise ConsistencyError(f"SYT counts disagree for {p}: {value} vs {enumerated}")
    return value


@lru_cache(maxsize=None)
def _kostka(shape: tuple[int, ...], content: tuple[int, ...]) -> int:
    if not content:
        return 1 if not shape else 0
    *rest, last = content
    total = 0
    # remove a horizontal strip of size `last` carrying the largest letter
    def strips(i: int, remaining: int, current: list[int]) -> Iterator[tuple[int, ...]]:
        if i == len(shape):
            if remaining == 0:
                yield tuple(x for x in current if x > 0)
            return
        lower = shape[i + 1] if i + 1 < len(shape) else 0
        for take in range(0, min(remaining, shape[i] - lower) + 1):
            current.append(shape[i] - take)
            yield from strips(i + 1, remaining - take, current)
            current.pop()

    for smaller in strips(0, last, []):
        total += _kostka(smaller, tuple(rest))
    return total


def kostka_number(shape: Partition, content: Sequence[int]) -> int:
    """Number of semistandard tableaux of the given shape and content."""
    content = tuple(int(c) for c in content if c)
    if any(c < 0 for c in content):
        raise UsageError(f"Content entries must be non-negative: {content}")
    if sum(content) != shape.size:
        return 0
    return _kostka(shape.parts, tuple(sorted(content, reverse=True)))


def content_of(tableau: Tableau, entry: int) -> int:
    """Content (column minus row) of the cell holding `entry`."""
    for r, row in enumerate(tableau):
        if entry in row:
            return row.index(entry) - r
    raise UsageError(f"Entry {entry} not in tableau {tableau}")


def row_of(tableau: Tableau, entry: int) -> int:
    for r, row in enumerate(tableau):
        if entry in row:
            return r
    raise UsageError(f"Entry {entry} not in tableau {tableau}")
