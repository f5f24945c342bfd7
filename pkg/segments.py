"""
Segments and multisegments.

A segment [a, b] on cuspidal line k is the run of integer shifts
a, a+1, …, b. Two segments are linked when their union is again a segment
and neither contains the other; the one starting lower precedes the
other. Text syntax: "[a,b]" or "[a]" for a point, an optional "@k" suffix
for the line, and ";" between the segments of a multisegment.
"""
import logging
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Sequence

from errors import UsageError

# Configure logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)

_SEGMENT_RE = re.compile(r"\[\s*(-?\d+)\s*(?:,\s*(-?\d+)\s*)?\](?:@(\d+))?")


@dataclass(frozen=True)
class Segment:
    start: int
    length: int
    line: int = 0

    def __post_init__(self):
        if self.length < 1:
            raise UsageError(f"Segment length must be at least 1, got {self.length}")
        if self.line < 0:
            raise UsageError(f"Line ids are non-negative, got {self.line}")

    @classmethod
    def interval(cls, a: int, b: int, line: int = 0) -> "Segment":
        if b < a:
            raise UsageError(f"Segment [{a},{b}] has its end before its start")
        return cls(a, b - a + 1, line)

    @classmethod
    def parse(cls, text: str) -> "Segment":
        match = _SEGMENT_RE.fullmatch(text.strip())
        if not match:
            raise UsageError(f"Malformed segment: {text!r} (expected '[a,b]' or '[a,b]@k')")
        a = int(match.group(1))
        b = int(match.group(2)) if match.group(2) is not None else a
        line = int(match.group(3)) if match.group(3) is not None else 0
        return cls.interval(a, b, line)

    @property
    def end(self) -> int:
        return self.start + self.length - 1

    def sort_key(self) -> tuple[int, int, int]:
        """Langlands tie-break: descending start, then descending length, then line."""
        return (-self.start, -self.length, self.line)

    def __str__(self) -> str:
        text = f"[{self.start},{self.end}]"
        return f"{text}@{self.line}" if self.line else text


@dataclass(frozen=True)
class Multisegment:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise UsageError("A multisegment needs at least one segment")

    @classmethod
    def parse(cls, text: str) -> "Multisegment":
        pieces = [p for p in text.split(";") if p.strip()]
        if not pieces:
            raise UsageError(f"Empty multisegment: {text!r}")
        return cls(tuple(Segment.parse(p) for p in pieces))

    @classmethod
    def of(cls, *segments: Segment) -> "Multisegment":
        return cls(tuple(segments))

    @property
    def total(self) -> int:
        return sum(s.length for s in self.segments)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(s.length for s in self.segments)

    def lines(self) -> list[int]:
        return sorted({s.line for s in self.segments})

    def on_line(self, line: int) -> Optional["Multisegment"]:
        kept = tuple(s for s in self.segments if s.line == line)
        return Multisegment(kept) if kept else None

    def canonical(self) -> str:
        return str(langlands_sort(self))

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.segments)

    def __str__(self) -> str:
        return ";".join(str(s) for s in self.segments)


def linked(d1: Segment, d2: Segment) -> bool:
    if d1.line != d2.line:
        return False
    union_is_segment = max(d1.start, d2.start) <= min(d1.end, d2.end) + 1
    contains = (d1.start <= d2.start and d2.end <= d1.end) or (d2.start <= d1.start and d1.end <= d2.end)
    return union_is_segment and not contains


def precedes(d1: Segment, d2: Segment) -> bool:
    return linked(d1, d2) and d1.start < d2.start


def langlands_sort(m: Multisegment) -> Multisegment:
    return Multisegment(tuple(sorted(m.segments, key=Segment.sort_key)))


def is_langlands_ordered(m: Multisegment) -> bool:
    """No segment precedes a later one."""
    return not any(precedes(a, b) for a, b in combinations(m.segments, 2))


def is_generic(m: Multisegment) -> bool:
    """No two segments are linked."""
    return not any(linked(a, b) for a, b in combinations(m.segments, 2))


def enumerate_multisegments(n: int, window: Optional[Sequence[int]] = None) -> list[Multisegment]:
    """
    Every multiset of line-0 segments with total length n and both ends in
    the window, in Langlands-sorted form, ordered by segment keys.
    Default window is [0, n].
    """
    if n < 1:
        raise UsageError(f"Multisegments need total size n >= 1, got {n}")
    lo, hi = (0, n) if window is None else (int(window[0]), int(window[1]))
    if lo > hi:
        raise UsageError(f"Empty window [{lo},{hi}]")
    pool = sorted(
        (Segment.interval(a, b) for a in range(lo, hi + 1) for b in range(a, min(hi, a + n - 1) + 1)),
        key=Segment.sort_key,
    )

    found: list[Multisegment] = []

    def extend(first: int, remaining: int, chosen: list[Segment]) -> None:
        if remaining == 0:
            found.append(Multisegment(tuple(chosen)))
            return
        for k in range(first, len(pool)):
            seg = pool[k]
            if seg.length <= remaining:
                chosen.append(seg)
                extend(k, remaining - seg.length, chosen)
                chosen.pop()

    extend(0, n, [])
    logger.debug(f"Enumerated {len(found)} multisegments of size {n} in window [{lo},{hi}]")
    return found
