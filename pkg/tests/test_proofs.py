import json
from pathlib import Path

import pytest

from binstretch.core import Config, Score
from binstretch.lower_game import LowerGameSolver
from binstretch.proofs import (
    IncompleteStrategyError,
    InfeasibleItemError,
    MalformedTreeError,
    ProofError,
    ProofParseError,
    deserialize,
    lower_proof_document,
    read_proof,
    serialize,
    upper_proof_document,
    verify,
    verify_lower,
    verify_upper,
)
from binstretch.upper_game import UpperGameSolver

DATA = Path(__file__).parent / "data"


def _lower_doc(m, g):
    cfg = Config(m, g)
    solver = LowerGameSolver(cfg)
    score = solver.solve(prune=False)
    return lower_proof_document(cfg, solver.extract_strategy(), score.num), score


def _upper_doc(m, g):
    cfg = Config(m, g)
    solver = UpperGameSolver(cfg)
    score = solver.solve(prune=False)
    return upper_proof_document(cfg, solver.extract_strategy(), score.num), score


def _hand_payload():
    return json.loads((DATA / "hand_tree_m2_g3.obsproof.json").read_text())


def test_hand_transcribed_tree_verifies():
    doc = read_proof(DATA / "hand_tree_m2_g3.obsproof.json")
    assert verify_lower(doc) == Score(4, 3)
    assert verify(doc) == Score(4, 3)
    assert doc.value_num == 4


def test_hand_tree_with_final_item_deleted_is_malformed():
    payload = _hand_payload()
    # the (1,1)-node's item leads straight to a leaf; removing just the
    # item leaves children dangling
    node = payload["root"]["children"]["0"]["children"]["1"]
    del node["item"]
    with pytest.raises(MalformedTreeError):
        verify_lower(deserialize(json.dumps(payload)))


def test_infeasible_item_rejected():
    payload = _hand_payload()
    # (2,2) node after sending 1,1,2: a further 3 cannot pack (mass 7 > 6)
    node = payload["root"]["children"]["0"]["children"]["0"]["children"]["1"]
    assert node["item"] == 2
    node["item"] = 3
    with pytest.raises(InfeasibleItemError):
        verify_lower(deserialize(json.dumps(payload)))


@pytest.mark.parametrize("m,g", [(2, 2), (2, 3), (1, 2)])
def test_lower_round_trip(m, g):
    doc, score = _lower_doc(m, g)
    data = serialize(doc)
    back = deserialize(data)
    assert verify_lower(back) == score
    assert serialize(back) == data  # lossless
    assert serialize(back) == serialize(back)  # deterministic


@pytest.mark.parametrize("m,g", [(2, 1), (1, 2), (2, 2)])
def test_upper_round_trip(m, g):
    doc, score = _upper_doc(m, g)
    back = deserialize(serialize(doc))
    assert verify_upper(back) == score


def test_parse_errors():
    doc, _ = _lower_doc(2, 2)
    data = serialize(doc)
    with pytest.raises(ProofParseError):
        deserialize(data[: len(data) // 2])
    with pytest.raises(ProofParseError):
        deserialize(b"\xff\xfe not even text")
    with pytest.raises(MalformedTreeError):
        deserialize(b'{"schema_version": "1"}')
    with pytest.raises(MalformedTreeError):
        deserialize(b'"just a string"')
    with pytest.raises(MalformedTreeError):
        deserialize(b'{"schema_version": "2", "game": "lower", "m": 1, "g": 1, '
                    b'"value_num": 1, "root": {}}')


def test_wrong_game_kind_rejected():
    lower, _ = _lower_doc(2, 2)
    upper, _ = _upper_doc(2, 2)
    with pytest.raises(MalformedTreeError):
        verify_lower(upper)
    with pytest.raises(MalformedTreeError):
        verify_upper(lower)


def test_incomplete_upper_strategy_rejected():
    payload = json.loads(serialize(_upper_doc(1, 2)[0]))
    del payload["root"]["moves"]["1"]
    with pytest.raises(IncompleteStrategyError):
        verify_upper(deserialize(json.dumps(payload)))


def test_claim_mismatch_is_not_a_verifier_error():
    doc, score = _lower_doc(2, 2)
    doc.value_num = score.num + 1  # claim is wrong, tree is fine
    assert verify_lower(doc) == score


# ----------------------------------------------------------------------
# single-field mutation fuzz: flipped items, flipped bins, dropped
# children must each error out or verify to a different value


def _lower_mutations(payload, m):
    base = json.dumps(payload)

    def nodes(node, path):
        yield node, path
        for key, child in (node.get("children") or {}).items():
            yield from nodes(child, path + [key])

    def fresh():
        return json.loads(base)

    def at(root, path):
        node = root["root"]
        for key in path:
            node = node["children"][key]
        return node

    for orig, path in nodes(payload["root"], []):
        if "item" not in orig:
            continue
        root = fresh()
        at(root, path)["item"] += 1
        yield f"item+1 at {path}", root
        root = fresh()
        at(root, path)["item"] -= 1
        yield f"item-1 at {path}", root
        for key in orig["children"]:
            root = fresh()
            del at(root, path)["children"][key]
            yield f"drop child {key} at {path}", root
            if m > 1:
                root = fresh()
                node = at(root, path)
                child = node["children"].pop(key)
                node["children"][str((int(key) + 1) % m)] = child
                yield f"flip child key {key} at {path}", root


def _upper_mutations(payload, m):
    base = json.dumps(payload)

    def nodes(node, path):
        yield node, path
        for ykey, entry in (node.get("moves") or {}).items():
            for branch in ("on_overflow", "on_no_overflow"):
                if entry.get(branch) is not None:
                    yield from nodes(entry[branch], path + [(ykey, branch)])

    def fresh():
        return json.loads(base)

    def at(root, path):
        node = root["root"]
        for ykey, branch in path:
            node = node["moves"][ykey][branch]
        return node

    for orig, path in nodes(payload["root"], []):
        for ykey, entry in (orig.get("moves") or {}).items():
            if m > 1:
                root = fresh()
                node = at(root, path)
                node["moves"][ykey]["bin"] = (node["moves"][ykey]["bin"] + 1) % m
                yield f"flip bin of class {ykey} at {path}", root
            root = fresh()
            node = at(root, path)
            moved = node["moves"].pop(ykey)
            node["moves"][str(int(ykey) + 1)] = moved
            yield f"flip class key {ykey} at {path}", root
            root = fresh()
            del at(root, path)["moves"][ykey]
            yield f"drop class {ykey} at {path}", root
            for branch in ("on_overflow", "on_no_overflow"):
                if entry.get(branch) is not None:
                    root = fresh()
                    del at(root, path)["moves"][ykey][branch]
                    yield f"drop {branch} of class {ykey} at {path}", root


def run_mutation_fuzz(docs):
    """Count mutations; every one must error or change the value."""
    total = 0
    for doc, score in docs:
        payload = json.loads(serialize(doc))
        generate = _lower_mutations if doc.game == "lower" else _upper_mutations
        for label, mutated in generate(payload, doc.m):
            total += 1
            try:
                got = verify(deserialize(json.dumps(mutated)))
            except ProofError:
                continue
            if got == score:
                raise AssertionError(f"mutation accepted with equal value: {label}")
    return total


def test_mutation_fuzz_lower_and_upper():
    docs = [_lower_doc(2, 2), _lower_doc(2, 3), _lower_doc(1, 2),
            _upper_doc(2, 1), _upper_doc(1, 2), _upper_doc(2, 2)]
    docs.append((read_proof(DATA / "hand_tree_m2_g3.obsproof.json"), Score(4, 3)))
    total = run_mutation_fuzz(docs)
    assert total > 50
