from fractions import Fraction

import pytest

from binstretch.core import Config, Multiset, Score
from binstretch.lower_game import (
    IllegalSequenceError,
    LowerGameSolver,
    LowerState,
    algorithm_policy,
    extract_adversary_strategy,
    legal_items_lower,
    solve_lower,
)

from oracles import brute_lower_value, brute_lower_value_voluntary_stop


def test_legal_items_examples():
    cfg = Config(2, 3)
    empty = LowerState((0, 0), Multiset())
    assert legal_items_lower(empty, cfg) == [1, 2, 3]
    saturated = LowerState((3, 3), Multiset([3, 3]))
    assert legal_items_lower(saturated, cfg) == []
    # frozen from the naive oracle: {2,2,1} packs as {2,1},{2}; {2,2,2} does not
    state = LowerState((2, 2), Multiset([2, 2]))
    assert legal_items_lower(state, cfg) == [1]


def test_legal_items_prefix_shortcut_matches_per_item_checks():
    cfg = Config(2, 4)
    solver = LowerGameSolver(cfg)
    for sent in (Multiset(), Multiset([4]), Multiset([3, 3]), Multiset([2, 2, 2])):
        direct = [y for y in range(1, 5)
                  if solver.oracle.fits(sent.add(y), 2, 4)]
        assert solver.legal_items(sent) == direct


def test_solve_lower_known_values():
    assert solve_lower(Config(2, 3)) == Fraction(4, 3)
    assert solve_lower(Config(1, 5)) == 1


@pytest.mark.parametrize("m,g", [(1, 2), (2, 2), (2, 3)])
def test_solve_lower_matches_brute_force(m, g):
    expected = brute_lower_value(m, g)
    assert solve_lower(Config(m, g)) == Score(expected, g)


@pytest.mark.parametrize("m,g", [(1, 3), (2, 2), (2, 3)])
def test_forced_continuation_equals_voluntary_stop(m, g):
    # the terminal score only grows as items arrive, so letting the
    # adversary stop early changes nothing
    assert brute_lower_value(m, g) == brute_lower_value_voluntary_stop(m, g)


def test_value_range_and_refinement_monotonicity():
    values = {}
    for g in (1, 2, 3, 4, 6, 9):
        score = solve_lower(Config(2, g))
        values[g] = score.fraction()
        assert 1 <= values[g] <= 2
    for g in (1, 2, 3):
        for k in (2, 3):
            assert values[g] <= values[g * k], (g, k)


def test_prune_and_threads_do_not_change_values():
    for m, g in [(2, 3), (2, 4), (3, 2)]:
        cfg = Config(m, g)
        baseline = solve_lower(cfg, prune=False)
        assert solve_lower(cfg, prune=True) == baseline
        assert solve_lower(cfg, prune=True, threads=4) == baseline
        assert solve_lower(cfg, prune=False, threads=4) == baseline


def test_m3_stays_within_load_cap():
    # all-in-one-bin branches are dominated and skipped; the solver
    # must still explore the rest of the space without tripping the cap
    score = solve_lower(Config(3, 2))
    assert 1 <= score.fraction() <= 2


def test_extract_strategy_round_trip_value():
    # the verified value of the tree is checked in test_proofs; here we
    # check structure: the root of the optimal (2,3) tree sends size 1
    tree = extract_adversary_strategy(Config(2, 3))
    assert tree.item == 1
    assert list(tree.children) == [0]

    chain = extract_adversary_strategy(Config(1, 2))
    total = 0
    node = chain
    while node.item is not None:
        total += node.item
        node = node.children[0]
    assert total == 2 and node.loads == (2,)


def test_policy_examples():
    policy = algorithm_policy(Config(2, 3))
    assert policy((1,)) == 0
    one_bin = algorithm_policy(Config(1, 4))
    assert one_bin((2,)) == 0
    assert one_bin((2, 1)) == 0


def test_policy_rejects_illegal_sequences():
    policy = algorithm_policy(Config(2, 3))
    with pytest.raises(IllegalSequenceError):
        policy(())
    with pytest.raises(IllegalSequenceError):
        policy((3, 3, 1))
    with pytest.raises(IllegalSequenceError):
        policy((4,))


def test_policy_guarantee_on_all_feasible_sequences():
    # brute-force walk of every feasible adversary sequence: following
    # the policy never exceeds the solved numerator
    cfg = Config(2, 3)
    bound = solve_lower(cfg).num
    policy = algorithm_policy(cfg)
    solver = policy._solver

    def explore(seq, sent):
        loads = policy.loads_after(seq)
        assert max(loads) <= bound, (seq, loads)
        for y in solver.legal_items(sent):
            explore(seq + (y,), sent.add(y))

    explore((), Multiset())


def test_policy_playout_against_extracted_tree():
    # following both optimal sides reaches exactly the solved value
    cfg = Config(2, 3)
    value = solve_lower(cfg).num
    tree = extract_adversary_strategy(cfg)
    policy = algorithm_policy(cfg)

    from binstretch.core import canonicalize

    node, seq = tree, ()
    while node.item is not None:
        seq = seq + (node.item,)
        policy(seq)
        reached = canonicalize(policy.loads_after(seq))
        matches = [c for c in node.children.values() if c.loads == reached]
        assert len(matches) == 1, "policy reply must match exactly one branch"
        node = matches[0]
    assert max(node.loads) == value == 4
