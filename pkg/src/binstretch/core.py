"""Shared domain types for the bin stretching games.

Everything works in the scaled-integer world: at granularity g an item
of size s/g is the integer s and a unit-size bin has capacity g, so all
game arithmetic is exact. Scores are an integer numerator over the
granularity, compared by cross-multiplication; bin positions are
identified up to permutation by keeping load vectors sorted
non-increasing, and move enumeration collapses bins of equal load into
a single representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from math import gcd
from typing import Iterable

VERSION = "0.1.0"


class InvariantError(AssertionError):
    """Internal invariant broken; signals a bug rather than bad input."""


class ResourceLimitExceeded(RuntimeError):
    """Raised when a solver exhausts its configured node budget."""


@dataclass(frozen=True)
class Config:
    """Instance parameters: ``m`` bins at granularity ``g``."""

    m: int
    g: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"need m >= 1, got m={self.m}")
        if self.g < 1:
            raise ValueError(f"need g >= 1, got g={self.g}")

    @property
    def load_cap(self) -> int:
        """Hard cap 2g on any single bin load.

        No reasonable strategy exceeds stretching factor 2 (greedy
        already achieves 2 - 1/m), and skipping placements past the cap
        never changes a min-max value because the least loaded bin is
        always a within-cap alternative; anything above 2g therefore
        only ever appears through a bug or a malformed document.
        """
        return 2 * self.g


class Score:
    """Exact game value ``num/denom`` (denom is the game's granularity).

    Ordering and equality use cross-multiplication, never floats, so
    scores from games of different granularity compare exactly.
    """

    __slots__ = ("num", "denom")

    def __init__(self, num: int, denom: int):
        if denom < 1:
            raise ValueError(f"denominator must be positive, got {denom}")
        if num < 0:
            raise ValueError(f"numerator must be nonnegative, got {num}")
        self.num = num
        self.denom = denom

    def fraction(self) -> Fraction:
        return Fraction(self.num, self.denom)

    @staticmethod
    def _pair(other):
        if isinstance(other, Score):
            return other.num, other.denom
        if isinstance(other, int):
            return other, 1
        if isinstance(other, Fraction):
            return other.numerator, other.denominator
        return None

    def __eq__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return self.num * pair[1] == pair[0] * self.denom

    def __lt__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return self.num * pair[1] < pair[0] * self.denom

    def __le__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return self.num * pair[1] <= pair[0] * self.denom

    def __gt__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return self.num * pair[1] > pair[0] * self.denom

    def __ge__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return self.num * pair[1] >= pair[0] * self.denom

    def __hash__(self):
        d = gcd(self.num, self.denom)
        return hash((self.num // d, self.denom // d))

    def reduced(self) -> str:
        d = gcd(self.num, self.denom)
        return f"{self.num // d}/{self.denom // d}"

    def decimal(self, places: int = 4) -> str:
        """Decimal rendering, rounded half-even to ``places`` digits."""
        with localcontext() as ctx:
            ctx.prec = 50
            q = Decimal(self.num) / Decimal(self.denom)
            return str(q.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))

    def __str__(self):
        return f"{self.num}/{self.denom}"

    def __repr__(self):
        return f"Score({self.num}, {self.denom})"


class Multiset:
    """Immutable multiset of nonnegative integers.

    Holds the lower game's item sizes or the upper game's item classes.
    Instances are hashable, so they double as memo keys.
    """

    __slots__ = ("_pairs", "_hash")

    def __init__(self, items: Iterable[int] = ()):
        counts: dict[int, int] = {}
        for v in items:
            if v < 0:
                raise ValueError(f"negative multiset value: {v}")
            counts[v] = counts.get(v, 0) + 1
        self._pairs = tuple(sorted(counts.items()))
        self._hash = hash(self._pairs)

    @classmethod
    def _from_pairs(cls, pairs) -> "Multiset":
        out = object.__new__(cls)
        out._pairs = pairs
        out._hash = hash(pairs)
        return out

    @property
    def pairs(self) -> tuple:
        """Sorted (value, count) pairs."""
        return self._pairs

    @property
    def counts(self) -> dict:
        return dict(self._pairs)

    def get(self, value: int) -> int:
        for v, c in self._pairs:
            if v == value:
                return c
        return 0

    def add(self, value: int, count: int = 1) -> "Multiset":
        if value < 0 or count < 1:
            raise ValueError(f"cannot add {count} x {value}")
        counts = dict(self._pairs)
        counts[value] = counts.get(value, 0) + count
        return Multiset._from_pairs(tuple(sorted(counts.items())))

    def remove(self, value: int, count: int = 1) -> "Multiset":
        counts = dict(self._pairs)
        have = counts.get(value, 0)
        if have < count:
            raise KeyError(f"cannot remove {count} x {value}, only {have} present")
        if have == count:
            del counts[value]
        else:
            counts[value] = have - count
        return Multiset._from_pairs(tuple(sorted(counts.items())))

    def shift(self, delta: int) -> "Multiset":
        """All values moved by ``delta`` (counts preserved)."""
        return Multiset._from_pairs(tuple((v + delta, c) for v, c in self._pairs))

    def total(self) -> int:
        """Total mass: sum of value * count."""
        return sum(v * c for v, c in self._pairs)

    def size(self) -> int:
        """Number of elements, with multiplicity."""
        return sum(c for _, c in self._pairs)

    def values_desc(self) -> tuple:
        """All elements expanded, non-increasing."""
        out = []
        for v, c in reversed(self._pairs):
            out.extend([v] * c)
        return tuple(out)

    def max_value(self) -> int:
        if not self._pairs:
            raise ValueError("empty multiset has no maximum")
        return self._pairs[-1][0]

    def __bool__(self):
        return bool(self._pairs)

    def __eq__(self, other):
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._pairs == other._pairs

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{v}x{c}" if c > 1 else str(v) for v, c in self._pairs)
        return f"Multiset{{{inner}}}"


def canonicalize(loads) -> tuple:
    """Sort a load vector non-increasing (bins are interchangeable)."""
    return tuple(sorted(loads, reverse=True))


def distinct_bin_moves(loads) -> tuple:
    """One representative bin index per distinct load value, ascending.

    ``loads`` must already be canonical. Placing an item into either of
    two bins of equal load gives the same canonical successor, so only
    the first index of each run of equal loads is a genuine move; ties
    always resolve to the lowest index, which keeps move enumeration
    deterministic.
    """
    reps = []
    prev = None
    for i, v in enumerate(loads):
        if v != prev:
            reps.append(i)
            prev = v
    return tuple(reps)


def place(loads, index: int, amount: int) -> tuple:
    """Add ``amount`` to one bin of a canonical vector and re-sort."""
    bumped = list(loads)
    bumped[index] += amount
    return tuple(sorted(bumped, reverse=True))
