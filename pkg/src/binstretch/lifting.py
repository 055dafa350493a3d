"""Wrap a granularity-g' placement policy into an upper-game strategy.

The wrapped policy A plays the plain placement game: it receives
integer item sizes and must keep them packable into m bins of size g'.
The wrapper answers upper-game item classes at granularity g by
simulating A on (+1)-shifted sizes, pretending every placement
overflows. Per fixed bin index j it tracks

    delta[j] = own load class of bin j  -  A's simulated load of bin j,

which drifts down by 1 whenever the adversary declines an overflow.
Small classes (y*y < g) aimed at a bin with negative delta are
absorbed there without consulting A, closing the gap. Two facts make
the wrapper sound, and both are asserted at every step:

* every delta stays within [-m*sqrt(g) - 1, sqrt(g)],
* the shifted sizes fed to A keep fitting m bins of size g', provided
  g' is at least h + sqrt(h) for h = g + m*sqrt(g) + 1.

``inner_granularity`` computes the exact ceiling of that threshold
using only integer arithmetic (the nested square roots are eliminated
by repeated squaring). Bins in this module are fixed-index: delta is
per physical bin, so the canonical symmetry reduction is deliberately
not applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from binstretch.core import Config, InvariantError, Multiset, Score
from binstretch.feasibility import FeasibilityOracle
from binstretch.upper_game import legal_classes


class InnerInfeasibilityError(RuntimeError):
    """The items fed to the wrapped policy stopped fitting its bins.

    The construction guarantees this never happens when the inner bin
    size is at least ``inner_granularity(g, m)``; firing means a bug.
    """


def _threshold_reached(n: int, g: int, m: int) -> bool:
    """Exact test of h + sqrt(h) <= n for h = g + m*sqrt(g) + 1.

    Rearranged to sqrt(h) <= a - m*sqrt(g) with a = n - g - 1, then
    squared twice; every comparison is between nonnegative integers.
    """
    a = n - g - 1
    if a < 0 or a * a < m * m * g:
        return False
    b = a * a + m * m * g - g - 1
    c = m * (2 * a + 1)
    return b >= 0 and b * b >= c * c * g


def inner_granularity(g: int, m: int) -> int:
    """Smallest integer bin size the wrapped policy needs, exactly.

    Equals ceil(h + sqrt(h)) with h = g + m*sqrt(g) + 1. A float
    estimate locates the answer and the exact integer predicate pins
    it, so the ceiling is never off by one at perfect squares.
    """
    if g < 1 or m < 1:
        raise ValueError(f"need g, m >= 1, got g={g}, m={m}")
    h = g + m * math.sqrt(g) + 1
    n = max(1, math.ceil(h + math.sqrt(h)) - 2)
    while not _threshold_reached(n, g, m):
        n += 1
    return n


def delta_in_bounds(d: int, g: int, m: int) -> bool:
    """Exact check of -m*sqrt(g) - 1 <= d <= sqrt(g), via squaring."""
    if d > 0 and d * d > g:
        return False
    e = d + 1
    if e < 0 and e * e > m * m * g:
        return False
    return True


def performance_bound_holds(lifted_num: int, inner_num: int, g: int, m: int) -> bool:
    """Exact check of lifted_num <= inner_num + m*sqrt(g) + 2.

    ``lifted_num`` is the lifted strategy's worst score times g,
    ``inner_num`` the wrapped policy's worst maximum load (its value
    times g' when it comes from a solved lower game). The sqrt term is
    isolated and squared, so the comparison is integer-exact.
    """
    lhs = lifted_num - inner_num - 2
    return lhs <= 0 or lhs * lhs <= m * m * g


class LiftedAlgorithm:
    """Stateful upper-game strategy wrapping a placement policy.

    Drive it with alternating ``step`` (incoming class -> bin) and
    ``observe`` (the adversary's overflow choice for that placement).
    ``policy`` is any callable mapping an item-size sequence to a bin
    index; the sequences it sees are exactly the wrapper's memory.
    """

    def __init__(self, policy, config: Config, g_prime: int | None = None,
                 oracle: FeasibilityOracle | None = None):
        self.policy = policy
        self.config = config
        self.g_prime = g_prime if g_prime is not None else inner_granularity(config.g, config.m)
        self.oracle = oracle if oracle is not None else FeasibilityOracle()
        m = config.m
        self.delta = [0] * m
        self.memory: list = []
        self.inner_loads = [0] * m
        self.own_load_classes = [0] * m
        self._pending = None  # (class, consulted-A?, bin)

    def clone(self) -> "LiftedAlgorithm":
        dup = object.__new__(LiftedAlgorithm)
        dup.policy = self.policy
        dup.config = self.config
        dup.g_prime = self.g_prime
        dup.oracle = self.oracle
        dup.delta = list(self.delta)
        dup.memory = list(self.memory)
        dup.inner_loads = list(self.inner_loads)
        dup.own_load_classes = list(self.own_load_classes)
        dup._pending = self._pending
        return dup

    def step(self, item_class: int) -> int:
        """Place an incoming class; returns the chosen bin index.

        Large classes (y*y >= g) and small ones with no negative gap go
        to whatever bin the wrapped policy picks for the size y+1; a
        small class with some delta < 0 goes to the first such bin
        without consulting the policy.
        """
        if self._pending is not None:
            raise InvariantError("observe the previous placement first")
        y = item_class
        m, g = self.config.m, self.config.g
        if not 0 <= y < g:
            raise ValueError(f"item class {y} outside 0..{g - 1}")
        consult = y * y >= g or all(d >= 0 for d in self.delta)
        if consult:
            fed = tuple(self.memory) + (y + 1,)
            if not self.oracle.fits(Multiset(fed), m, self.g_prime):
                raise InnerInfeasibilityError(
                    f"memory {fed} does not fit {m} bins of size {self.g_prime}"
                )
            j = self.policy(fed)
            if not isinstance(j, int) or not 0 <= j < m:
                raise InvariantError(f"wrapped policy returned bad bin {j!r}")
            self.memory.append(y + 1)
            self.inner_loads[j] += y + 1
        else:
            j = next(i for i, d in enumerate(self.delta) if d < 0)
        self._pending = (y, consult, j)
        return j

    def observe(self, bin_index: int, overflow) -> "LiftedAlgorithm":
        """Record the adversary's overflow decision for the last step."""
        if self._pending is None:
            raise InvariantError("no placement awaiting an overflow decision")
        y, consulted, j = self._pending
        if bin_index != j:
            raise InvariantError(f"observed bin {bin_index}, placed into {j}")
        o = 1 if overflow else 0
        self.own_load_classes[j] += y + o
        if consulted:
            if o == 0:
                self.delta[j] -= 1
        else:
            # gap-bridging: memory untouched wheither way
            self.delta[j] += y + o
        if not delta_in_bounds(self.delta[j], self.config.g, self.config.m):
            raise InvariantError(f"delta out of bounds: {self.delta}")
        self._pending = None
        return self


def lift_step(state: LiftedAlgorithm, item_class: int) -> int:
    return state.step(item_class)


def lift_observe_overflow(state: LiftedAlgorithm, bin_index: int, overflow) -> LiftedAlgorithm:
    return state.observe(bin_index, overflow)


@dataclass
class PlayoutRecord:
    """One driven run: the (class, overflow) inputs, the bins chosen,
    and the resulting score."""

    inputs: list
    decisions: list
    final: Score


def run_playout(state: LiftedAlgorithm, inputs) -> PlayoutRecord:
    """Drive ``state`` through a fixed (class, overflow bit) list."""
    decisions = []
    for y, o in inputs:
        j = state.step(y)
        state.observe(j, bool(o))
        decisions.append(j)
    score = Score(max(state.own_load_classes) + 1, state.config.g)
    return PlayoutRecord(list(inputs), decisions, score)


@dataclass
class LiftReport:
    """Outcome of evaluating a lifted strategy against all adversaries."""

    score: Score
    delta_min: int
    delta_max: int
    g_prime: int
    states: int


def evaluate_lifted_report(policy, config: Config, g_prime: int | None = None,
                           oracle: FeasibilityOracle | None = None) -> LiftReport:
    """Worst final score of the lifted strategy over all adversary plays.

    Walks the full upper-game adversary tree (every legal class, every
    legal overflow bit) against the fixed strategy; there is no
    algorithm branching. Gap bounds are re-asserted at every transition
    and the observed delta range is reported.

    Memoization keys on (own classes, deltas, inner loads, memory
    multiset, sent multiset); this assumes the wrapped policy's future
    behavior depends only on its physical loads and the item multiset
    it has seen, which holds for the lower-game policies this module is
    designed around.
    """
    oracle = oracle if oracle is not None else FeasibilityOracle()
    root = LiftedAlgorithm(policy, config, g_prime=g_prime, oracle=oracle)
    memo: dict = {}
    stats = {"dmin": 0, "dmax": 0, "states": 0}

    def state_key(state, sent):
        return (
            tuple(state.own_load_classes),
            tuple(state.delta),
            tuple(state.inner_loads),
            Multiset(state.memory),
            sent,
        )

    def walk(state, sent):
        key = state_key(state, sent)
        hit = memo.get(key)
        if hit is not None:
            return hit
        stats["states"] += 1
        moves = legal_classes(sent, sum(state.own_load_classes), config, oracle)
        if not moves:
            v = max(state.own_load_classes) + 1
        else:
            v = 0
            for y, bits in moves:
                placed = state.clone()
                j = placed.step(y)
                grown = sent.add(y)
                for o in bits:
                    branch = placed.clone()
                    branch.observe(j, bool(o))
                    if min(branch.delta) < stats["dmin"]:
                        stats["dmin"] = min(branch.delta)
                    if max(branch.delta) > stats["dmax"]:
                        stats["dmax"] = max(branch.delta)
                    v = max(v, walk(branch, grown))
        memo[key] = v
        return v

    num = walk(root, Multiset())
    return LiftReport(Score(num, config.g), stats["dmin"], stats["dmax"],
                      root.g_prime, stats["states"])


def evaluate_lifted(policy, config: Config, g_prime: int | None = None,
                    oracle: FeasibilityOracle | None = None) -> Score:
    """Worst-case score of the lifted strategy, as an exact Score."""
    return evaluate_lifted_report(policy, config, g_prime=g_prime, oracle=oracle).score
