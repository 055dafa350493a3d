"""Exact packing feasibility: the adversary legality oracle.

Both games constrain the adversary by "everything sent so far still
fits into m bins of a fixed capacity", so this check runs at every
search node for every candidate item. Queries are cached per oracle
instance; misses run an exact depth-first kernel, compiled when the
optional extension was built, with a pure-Python fallback selected at
import time (set BINSTRETCH_PURE_PYTHON=1 to force the fallback).

The module also hosts the packing-repair step behind the lifting
argument: take a packing of items into m bins of size h, grow every
item by 1, and repair the result into m bins of size h + sqrt(h) by
repeatedly moving a small item out of an overfull (critical) bin into
an underfull (safe) one. All sqrt thresholds are compared exactly by
squaring; no floats are involved anywhere.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from binstretch import _pykernel
from binstretch.core import InvariantError, Multiset

try:
    from binstretch import _speedups
except ImportError:
    _speedups = None

if _speedups is not None and not os.environ.get("BINSTRETCH_PURE_PYTHON"):
    _DEFAULT_KERNEL = _speedups
    KERNEL_BACKEND = "cython"
else:
    _DEFAULT_KERNEL = _pykernel
    KERNEL_BACKEND = "python"

_MISS = object()


class PreconditionError(ValueError):
    """A documented precondition of an operation does not hold."""


@dataclass(frozen=True)
class Packing:
    """An explicit assignment of items to bins; the witness of ``fits``."""

    bins: tuple

    def loads(self) -> tuple:
        return tuple(b.total() for b in self.bins)

    def items(self) -> Multiset:
        merged = []
        for b in self.bins:
            merged.extend(b.values_desc())
        return Multiset(merged)


class FeasibilityOracle:
    """Caching front end over the packing kernel.

    One instance per solve keeps repeated queries O(1); the cache maps
    (multiset, m, capacity) to a witness assignment (or None). Entries
    are value-idempotent, so concurrent insertion under the GIL is
    safe.
    """

    def __init__(self, kernel=None):
        self._kernel = kernel if kernel is not None else _DEFAULT_KERNEL
        self._cache: dict = {}

    def fits(self, items: Multiset, m: int, capacity: int) -> bool:
        """True iff every item can go into one of m bins within capacity."""
        return self._lookup(items, m, capacity) is not None

    def find_packing(self, items: Multiset, m: int, capacity: int):
        """A witness Packing, or None exactly when ``fits`` is False."""
        assignment = self._lookup(items, m, capacity)
        if assignment is None:
            return None
        bins = [[] for _ in range(m)]
        for size, b in zip(items.values_desc(), assignment):
            bins[b].append(size)
        return Packing(tuple(Multiset(b) for b in bins))

    def _lookup(self, items, m, capacity):
        key = (items, m, capacity)
        hit = self._cache.get(key, _MISS)
        if hit is not _MISS:
            return hit
        result = self._kernel.pack_bins(items.values_desc(), m, capacity)
        if result is not None:
            result = tuple(result)
        self._cache[key] = result
        return result


_SHARED = FeasibilityOracle()


def fits(items: Multiset, m: int, capacity: int) -> bool:
    return _SHARED.fits(items, m, capacity)


def find_packing(items: Multiset, m: int, capacity: int):
    return _SHARED.find_packing(items, m, capacity)


def _is_critical(load: int, h: int) -> bool:
    # load > h + sqrt(h), exactly
    d = load - h
    return d > 0 and d * d > h


def _is_movable(size: int, h: int) -> bool:
    # size <= sqrt(h) + 1, exactly
    e = size - 1
    return e <= 0 or e * e <= h


def repack_incremented(packing: Packing, h: int, m: int, trace=None) -> Packing:
    """Repack every item grown by 1 into m bins of size h + sqrt(h).

    Preconditions (checked): the input packs its items into exactly m
    bins with every load <= h, and n + sum(sizes) < m*h. The repair
    loop then moves, while any bin is critical (load > h + sqrt(h)),
    one item of size <= sqrt(h) + 1 out of the first critical bin into
    the first safe bin (load < h); among movable items the smallest is
    taken, which makes the output deterministic.

    ``trace``, when given a list, receives the number of items sitting
    in critical bins after each move; that count strictly decreasing is
    the termination measure, and it is asserted.
    """
    if h < 1:
        raise PreconditionError(f"need h >= 1, got {h}")
    if len(packing.bins) != m:
        raise PreconditionError(f"packing has {len(packing.bins)} bins, expected {m}")
    for b in packing.bins:
        if b.total() > h:
            raise PreconditionError(f"input bin load {b.total()} exceeds h={h}")
    n = sum(b.size() for b in packing.bins)
    mass = sum(b.total() for b in packing.bins)
    if n + mass >= m * h:
        raise PreconditionError(
            f"need item count + mass < m*h, got {n} + {mass} >= {m * h}"
        )

    bins = [dict(b.shift(1).pairs) for b in packing.bins]
    loads = [sum(v * c for v, c in b.items()) for b in bins]

    def critical_item_count():
        return sum(
            sum(bins[i].values()) for i in range(m) if _is_critical(loads[i], h)
        )

    previous = critical_item_count()
    while True:
        src = next((i for i in range(m) if _is_critical(loads[i], h)), None)
        if src is None:
            break
        dst = next((i for i in range(m) if loads[i] < h), None)
        movable = [v for v in bins[src] if _is_movable(v, h)]
        if dst is None or not movable:
            raise InvariantError("repair loop stuck: no safe bin or movable item")
        v = min(movable)
        if bins[src][v] == 1:
            del bins[src][v]
        else:
            bins[src][v] -= 1
        bins[dst][v] = bins[dst].get(v, 0) + 1
        loads[src] -= v
        loads[dst] += v
        current = critical_item_count()
        if current >= previous:
            raise InvariantError("critical item count failed to decrease")
        if trace is not None:
            trace.append(current)
        previous = current

    return Packing(
        tuple(
            Multiset._from_pairs(tuple(sorted(b.items()))) for b in bins
        )
    )
