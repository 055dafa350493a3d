"""Exact min-max solver for the lower bound game.

The adversary sends integer item sizes in 1..g subject to "everything
sent so far still packs into m bins of capacity g" and maximizes the
final maximum bin load; the algorithm answers every item with a bin
and minimizes. Play continues while any item is feasible; the terminal
maximum load over g is the lower bound l_g on the optimal stretching
factor.

Positions are canonical (loads sorted non-increasing, sent items as a
multiset) and exact values are memoized. An optional alpha-beta layer
sits on top, with a transposition table holding exact/lower/upper
flagged entries; every stored entry is a true fact about the position,
so the table works unchanged when root moves are solved from several
threads. Placements that would push a bin past 2g are skipped: the
least loaded bin is always a within-cap alternative of no worse value,
so the min-max value is unchanged and the load cap holds everywhere.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from binstretch.core import (
    Config,
    InvariantError,
    Multiset,
    ResourceLimitExceeded,
    Score,
    canonicalize,
    distinct_bin_moves,
    place,
)
from binstretch.feasibility import FeasibilityOracle


class IllegalSequenceError(ValueError):
    """An item sequence violates the game's packing constraint."""


@dataclass(frozen=True)
class LowerState:
    """A position: canonical loads plus the multiset already sent."""

    loads: tuple
    sent: Multiset


@dataclass
class AdversaryNode:
    """One node of an adversarial strategy tree.

    ``item`` is None at leaves; children are keyed by representative
    bin index, one per distinct load value of ``loads``.
    """

    loads: tuple
    item: int | None = None
    children: dict = field(default_factory=dict)


_EXACT, _LOWER, _UPPER = 0, 1, 2


class LowerGameSolver:
    def __init__(self, config: Config, oracle: FeasibilityOracle | None = None,
                 max_nodes: int | None = None):
        self.config = config
        self.oracle = oracle if oracle is not None else FeasibilityOracle()
        self.nodes = 0
        self._max_nodes = max_nodes
        self._memo: dict = {}
        self._tt: dict = {}

    # ------------------------------------------------------------------
    # move generation

    def legal_items(self, sent: Multiset) -> list:
        """All sendable sizes, ascending.

        Feasibility is monotone in the item size (shrinking one item of
        a valid packing keeps it valid), so the legal sizes are exactly
        1..ymax and one descending scan pins ymax.
        """
        m, g = self.config.m, self.config.g
        for y in range(g, 0, -1):
            if self.oracle.fits(sent.add(y), m, g):
                return list(range(1, y + 1))
        return []

    def replies(self, loads, item: int) -> list:
        """Representative bins for placing ``item``, within the 2g cap."""
        cap = self.config.load_cap
        return [i for i in distinct_bin_moves(loads) if loads[i] + item <= cap]

    def _tick(self):
        self.nodes += 1
        if self._max_nodes is not None and self.nodes > self._max_nodes:
            raise ResourceLimitExceeded(f"node budget {self._max_nodes} exceeded")

    # ------------------------------------------------------------------
    # exact minimax (memoized, no pruning)

    def value(self, loads, sent: Multiset) -> int:
        """Exact min-max final maximum load from a position."""
        key = (loads, sent)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self._tick()
        items = self.legal_items(sent)
        if not items:
            v = loads[0]
        else:
            v = 0
            for y in reversed(items):
                nxt = sent.add(y)
                reps = self.replies(loads, y)
                if not reps:
                    raise InvariantError("no within-cap reply exists")
                best = min(self.value(place(loads, r, y), nxt) for r in reps)
                if best > v:
                    v = best
        self._memo[key] = v
        return v

    # ------------------------------------------------------------------
    # alpha-beta over the same game

    def value_pruned(self, loads, sent: Multiset, alpha: int, beta: int) -> int:
        key = (loads, sent)
        entry = self._tt.get(key)
        if entry is not None:
            v, flag = entry
            if flag == _EXACT:
                return v
            if flag == _LOWER:
                if v > alpha:
                    alpha = v
            elif v < beta:
                beta = v
            if alpha >= beta:
                return v
        self._tick()
        items = self.legal_items(sent)
        if not items:
            v = loads[0]
            self._tt[key] = (v, _EXACT)
            return v
        alpha0, beta0 = alpha, beta
        best = -1
        for y in reversed(items):  # adversary: larger items first
            nxt = sent.add(y)
            reps = self.replies(loads, y)
            if not reps:
                raise InvariantError("no within-cap reply exists")
            mv = None
            b = beta
            for r in reversed(reps):  # lower-loaded bins first
                cv = self.value_pruned(place(loads, r, y), nxt, alpha, b)
                if mv is None or cv < mv:
                    mv = cv
                    if cv < b:
                        b = cv
                if b <= alpha:
                    break
            if mv > best:
                best = mv
                if mv > alpha:
                    alpha = mv
            if alpha >= beta:
                break
        flag = _UPPER if best <= alpha0 else (_LOWER if best >= beta0 else _EXACT)
        self._tt[key] = (best, flag)
        return best

    # ------------------------------------------------------------------

    def solve(self, prune: bool = True, threads: int = 1) -> Score:
        m, g = self.config.m, self.config.g
        loads0 = (0,) * m
        sent0 = Multiset()
        if threads > 1:
            v = self._solve_parallel(loads0, sent0, prune, threads)
        elif prune:
            v = self.value_pruned(loads0, sent0, -1, self.config.load_cap + 1)
        else:
            v = self.value(loads0, sent0)
        return Score(v, g)

    def _solve_parallel(self, loads0, sent0, prune, threads):
        items = self.legal_items(sent0)
        if not items:
            return loads0[0]
        cap = self.config.load_cap

        def item_value(y):
            # full window per root child keeps every subtree value exact
            nxt = sent0.add(y)
            if prune:
                return min(
                    self.value_pruned(place(loads0, r, y), nxt, -1, cap + 1)
                    for r in self.replies(loads0, y)
                )
            return min(self.value(place(loads0, r, y), nxt) for r in self.replies(loads0, y))

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return max(pool.map(item_value, items))

    # ------------------------------------------------------------------
    # strategy extraction

    def extract_strategy(self) -> AdversaryNode:
        """Adversary tree realizing the solved value.

        The adversary commits to one item per node (the largest one
        still guaranteeing the target) and branches over every distinct
        algorithm reply; a branch stops as soon as the target load is
        on the board, which keeps documents small without weakening the
        verified value.
        """
        m = self.config.m
        target = self.value((0,) * m, Multiset())

        def build(loads, sent):
            if loads[0] >= target:
                return AdversaryNode(loads=loads)
            items = self.legal_items(sent)
            if not items:
                return AdversaryNode(loads=loads)
            choice = None
            for y in reversed(items):
                nxt = sent.add(y)
                worst = min(self.value(place(loads, r, y), nxt) for r in self.replies(loads, y))
                if worst >= target:
                    choice = y
                    break
            if choice is None:
                raise InvariantError("no item preserves the target value")
            node = AdversaryNode(loads=loads, item=choice)
            nxt = sent.add(choice)
            for r in self.replies(loads, choice):
                node.children[r] = build(place(loads, r, choice), nxt)
            return node

        return build((0,) * m, Multiset())


class LowerGamePolicy:
    """Optimal algorithm-side policy, queried by item sequence.

    Placement at each step: among distinct replies of the canonical
    position, take the one minimizing the opponent's best continuation
    (ties to the least loaded bin), then map the chosen load value back
    to the lowest physical index carrying it. The policy replays its
    own placements along every prefix (memoized), so any feasible
    sequence gets a deterministic answer with final maximum load at
    most the solved value's numerator.
    """

    def __init__(self, config: Config, oracle: FeasibilityOracle | None = None,
                 solver: LowerGameSolver | None = None):
        self._solver = solver if solver is not None else LowerGameSolver(config, oracle=oracle)
        self.config = self._solver.config
        self._trace: dict = {(): ((0,) * self.config.m, Multiset(), None)}

    def __call__(self, sequence) -> int:
        seq = tuple(sequence)
        if not seq:
            raise IllegalSequenceError("empty sequence has no item to place")
        return self._advance(seq)[2]

    def loads_after(self, sequence) -> tuple:
        """Physical bin loads after placing the whole sequence."""
        return self._advance(tuple(sequence))[0]

    def _advance(self, seq):
        hit = self._trace.get(seq)
        if hit is not None:
            return hit
        loads, sent, _ = self._advance(seq[:-1])
        y = seq[-1]
        m, g = self.config.m, self.config.g
        if not isinstance(y, int) or not 1 <= y <= g:
            raise IllegalSequenceError(f"item {y!r} outside 1..{g}")
        nxt = sent.add(y)
        if not self._solver.oracle.fits(nxt, m, g):
            raise IllegalSequenceError(
                f"sequence no longer fits {m} bins of size {g}: {seq}"
            )
        canon = canonicalize(loads)
        best_val = None
        best_load = None
        for r in reversed(self._solver.replies(canon, y)):  # least loaded first
            v = self._solver.value(place(canon, r, y), nxt)
            if best_val is None or v < best_val:
                best_val = v
                best_load = canon[r]
        bin_index = min(i for i, load in enumerate(loads) if load == best_load)
        bumped = list(loads)
        bumped[bin_index] += y
        out = (tuple(bumped), nxt, bin_index)
        self._trace[seq] = out
        return out


# ----------------------------------------------------------------------
# module-level operations


def legal_items_lower(state: LowerState, config: Config,
                      oracle: FeasibilityOracle | None = None) -> list:
    """All item sizes the adversary may send from ``state``, ascending."""
    return LowerGameSolver(config, oracle=oracle).legal_items(state.sent)


def solve_lower(config: Config, *, prune: bool = True, threads: int = 1,
                oracle: FeasibilityOracle | None = None,
                max_nodes: int | None = None) -> Score:
    """Min-max value l_g of the lower bound game, as an exact Score."""
    solver = LowerGameSolver(config, oracle=oracle, max_nodes=max_nodes)
    return solver.solve(prune=prune, threads=threads)


def extract_adversary_strategy(config: Config,
                               oracle: FeasibilityOracle | None = None) -> AdversaryNode:
    """Adversary strategy tree whose verified value equals solve_lower."""
    return LowerGameSolver(config, oracle=oracle).extract_strategy()


def algorithm_policy(config: Config,
                     oracle: FeasibilityOracle | None = None) -> LowerGamePolicy:
    """Deterministic optimal placement policy for the algorithm side."""
    return LowerGamePolicy(config, oracle=oracle)
