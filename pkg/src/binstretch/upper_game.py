"""Exact min-max solver for the upper bound game.

Items are classes 0..g-1: class y stands for any true size in the
interval (y/g, (y+1)/g]. After the algorithm places a class into a
bin, the adversary decides whether the receiving bin's load class
grows by y or by y+1 (an overflow). Three rules hold at every
decision point:

1. the class multiset, read as integers, packs into m bins of
   capacity g-1 (otherwise no true sizes could fit m unit bins),
2. the load-class sum stays at most m*g - 1,
3. a class-0 item must overflow (so the game always progresses).

When nothing can be sent, the score is the maximum load class plus
one, over g. The min-max value u_g upper-bounds the optimal
stretching factor, and a complete strategy for the placing side is a
valid online algorithm.

By default a class is sendable when at least one overflow bit keeps
rule 2 intact, and the adversary later picks among exactly the bits
that do; ``strict`` mode switches to the alternative reading where
every bit not excluded by rule 3 must fit the budget for the class to
be sendable at all.
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
    distinct_bin_moves,
    place,
)
from binstretch.feasibility import FeasibilityOracle


@dataclass(frozen=True)
class UpperState:
    """A position: canonical load classes plus the class multiset sent."""

    load_classes: tuple
    sent_classes: Multiset


@dataclass
class AlgorithmMove:
    """Decision for one incoming class: the bin, then one subtree per
    overflow outcome the adversary may legally pick."""

    bin: int
    on_overflow: "AlgorithmNode | None" = None
    on_no_overflow: "AlgorithmNode | None" = None


@dataclass
class AlgorithmNode:
    """Decision-tree node; ``moves`` is empty exactly at terminal states."""

    loads: tuple
    moves: dict = field(default_factory=dict)


def legal_classes(sent: Multiset, load_sum: int, config: Config,
                  oracle: FeasibilityOracle, strict: bool = False) -> list:
    """Sendable (class, overflow bits) pairs, ascending by class.

    Like item sizes in the lower game, rule 1 is monotone in the class
    value, so one descending scan finds the largest packable class and
    everything below it passes rule 1 as well.
    """
    m, g = config.m, config.g
    budget = m * g - 1
    ymax = None
    for y in range(g - 1, -1, -1):
        if oracle.fits(sent.add(y), m, g - 1):
            ymax = y
            break
    if ymax is None:
        return []
    out = []
    for y in range(ymax + 1):
        bits = tuple(
            o for o in (0, 1)
            if load_sum + y + o <= budget and (y != 0 or o == 1)
        )
        if not bits:
            continue
        if strict and y != 0 and len(bits) != 2:
            continue
        out.append((y, bits))
    return out


_EXACT, _LOWER, _UPPER = 0, 1, 2


class UpperGameSolver:
    def __init__(self, config: Config, oracle: FeasibilityOracle | None = None,
                 max_nodes: int | None = None, strict: bool = False):
        self.config = config
        self.oracle = oracle if oracle is not None else FeasibilityOracle()
        self.strict = strict
        self.nodes = 0
        self._max_nodes = max_nodes
        self._memo: dict = {}
        self._tt: dict = {}

    # ------------------------------------------------------------------

    def legal_moves(self, loads, sent: Multiset) -> list:
        return legal_classes(sent, sum(loads), self.config, self.oracle, self.strict)

    def replies(self, loads, y: int, bits) -> list:
        """Representative bins; load classes are capped at 2g - 1 so the
        final score never exceeds 2 (dominated placements are skipped,
        the least loaded bin always qualifies)."""
        cap = 2 * self.config.g - 1
        worst = y + max(bits)
        return [i for i in distinct_bin_moves(loads) if loads[i] + worst <= cap]

    def _tick(self):
        self.nodes += 1
        if self._max_nodes is not None and self.nodes > self._max_nodes:
            raise ResourceLimitExceeded(f"node budget {self._max_nodes} exceeded")

    # ------------------------------------------------------------------
    # exact minimax (memoized, no pruning)

    def value(self, loads, sent: Multiset) -> int:
        key = (loads, sent)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self._tick()
        moves = self.legal_moves(loads, sent)
        if not moves:
            v = loads[0] + 1
        else:
            v = 0
            for y, bits in reversed(moves):
                nxt = sent.add(y)
                reps = self.replies(loads, y, bits)
                if not reps:
                    raise InvariantError("no within-cap reply exists")
                mv = None
                for r in reps:
                    ov = max(self.value(place(loads, r, y + o), nxt) for o in bits)
                    if mv is None or ov < mv:
                        mv = ov
                if mv > v:
                    v = mv
        self._memo[key] = v
        return v

    # ------------------------------------------------------------------
    # alpha-beta over the same game (max item / min bin / max bit)

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
        moves = self.legal_moves(loads, sent)
        if not moves:
            v = loads[0] + 1
            self._tt[key] = (v, _EXACT)
            return v
        alpha0, beta0 = alpha, beta
        best = -1
        for y, bits in reversed(moves):  # adversary: larger classes first
            nxt = sent.add(y)
            reps = self.replies(loads, y, bits)
            if not reps:
                raise InvariantError("no within-cap reply exists")
            mv = None
            b = beta
            for r in reversed(reps):  # lower-loaded bins first
                ov = -1
                a2 = alpha
                for o in reversed(bits):  # overflow first
                    cv = self.value_pruned(place(loads, r, y + o), nxt, a2, b)
                    if cv > ov:
                        ov = cv
                        if cv > a2:
                            a2 = cv
                    if a2 >= b:
                        break
                if mv is None or ov < mv:
                    mv = ov
                    if ov < b:
                        b = ov
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
            v = self.value_pruned(loads0, sent0, 0, m * g + 1)
        else:
            v = self.value(loads0, sent0)
        return Score(v, g)

    def _solve_parallel(self, loads0, sent0, prune, threads):
        moves = self.legal_moves(loads0, sent0)
        if not moves:
            return loads0[0] + 1
        hi = self.config.m * self.config.g + 1

        def move_value(move):
            y, bits = move
            nxt = sent0.add(y)
            mv = None
            for r in self.replies(loads0, y, bits):
                if prune:
                    ov = max(
                        self.value_pruned(place(loads0, r, y + o), nxt, 0, hi)
                        for o in bits
                    )
                else:
                    ov = max(self.value(place(loads0, r, y + o), nxt) for o in bits)
                if mv is None or ov < mv:
                    mv = ov
            return mv

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return max(pool.map(move_value, moves))

    # ------------------------------------------------------------------

    def extract_strategy(self) -> AlgorithmNode:
        """Complete decision tree whose worst leaf equals the solved value.

        Every legal class gets an entry and every legal overflow bit a
        subtree, so the tree is a full online algorithm; the chosen bin
        minimizes the adversary's best overflow continuation, ties to
        the least loaded bin.
        """

        def build(loads, sent):
            node = AlgorithmNode(loads=loads)
            for y, bits in self.legal_moves(loads, sent):
                nxt = sent.add(y)
                best_r = None
                best_v = None
                for r in reversed(self.replies(loads, y, bits)):
                    ov = max(self.value(place(loads, r, y + o), nxt) for o in bits)
                    if best_v is None or ov < best_v:
                        best_v = ov
                        best_r = r
                mv = AlgorithmMove(bin=best_r)
                for o in bits:
                    sub = build(place(loads, best_r, y + o), nxt)
                    if o:
                        mv.on_overflow = sub
                    else:
                        mv.on_no_overflow = sub
                node.moves[y] = mv
            return node

        return build((0,) * self.config.m, Multiset())


# ----------------------------------------------------------------------
# module-level operations


def legal_moves_upper(state: UpperState, config: Config,
                      oracle: FeasibilityOracle | None = None,
                      strict: bool = False) -> list:
    """Sendable (class, overflow bits) pairs from ``state``, ascending."""
    oracle = oracle if oracle is not None else FeasibilityOracle()
    return legal_classes(state.sent_classes, sum(state.load_classes), config,
                         oracle, strict)


def solve_upper(config: Config, *, prune: bool = True, threads: int = 1,
                strict_overflow_legality: bool = False,
                oracle: FeasibilityOracle | None = None,
                max_nodes: int | None = None) -> Score:
    """Min-max value u_g of the upper bound game, as an exact Score."""
    solver = UpperGameSolver(config, oracle=oracle, max_nodes=max_nodes,
                             strict=strict_overflow_legality)
    return solver.solve(prune=prune, threads=threads)


def extract_algorithm_strategy(config: Config,
                               strict_overflow_legality: bool = False,
                               oracle: FeasibilityOracle | None = None) -> AlgorithmNode:
    """Decision tree (a valid online algorithm) achieving solve_upper."""
    solver = UpperGameSolver(config, oracle=oracle,
                             strict=strict_overflow_legality)
    return solver.extract_strategy()
