"""Strategy-tree proof documents: canonical JSON plus an independent verifier.

A document carries the game kind, the instance parameters, a claimed
value numerator (denominator is implied by g) and the full tree. The
verifier trusts nothing from the solvers: item legality is re-checked
against the packing oracle, bin replies are re-enumerated from the
loads, and load bookkeeping is recomputed along every branch. Solver
modules are deliberately never imported here, so a verified value is
evidence independent of the search code.

File format (``*.obsproof.json``): UTF-8 JSON, keys sorted, one-space
indent, schema_version "1", top-level fields ``schema_version``,
``game``, ``m``, ``g``, ``value_num``, ``root``, ``meta``. Lower-game
nodes are {"loads", "item", "children"} with children keyed by the
representative bin index of each distinct load; leaves carry only
"loads". Upper-game nodes are {"loads", "moves"} where each move maps
an item class to {"bin", "on_overflow", "on_no_overflow"}; terminal
nodes carry only "loads". Serialization of a fixed document is
byte-deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from binstretch.core import VERSION, Multiset, Score, distinct_bin_moves, place
from binstretch.feasibility import FeasibilityOracle


class ProofError(Exception):
    """Base of everything the verifier can reject."""


class ProofParseError(ProofError):
    """Not valid JSON; carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class MalformedTreeError(ProofError):
    """Structurally broken document: schema, bookkeeping or coverage."""


class InfeasibleItemError(ProofError):
    """An adversary item violates the packing constraint at its node."""


class IncompleteStrategyError(ProofError):
    """An algorithm tree misses a legal adversary option."""


@dataclass
class ProofDocument:
    game: str
    m: int
    g: int
    value_num: int
    root: dict
    meta: dict = field(default_factory=dict)
    schema_version: str = "1"

    def claimed(self) -> Score:
        return Score(self.value_num, self.g)


def new_meta() -> dict:
    return {
        "tool": f"binstretch {VERSION}",
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


# ----------------------------------------------------------------------
# building documents from solver trees (duck-typed nodes; no solver import)


def lower_proof_document(config, tree, value_num: int, meta=None) -> ProofDocument:
    """Freeze an adversary tree into a document.

    ``tree`` nodes need ``loads``, ``item`` (None at leaves) and
    ``children`` keyed by representative bin index.
    """

    def encode(node):
        out = {"loads": list(node.loads)}
        if node.item is not None:
            out["item"] = node.item
            out["children"] = {
                str(r): encode(child) for r, child in sorted(node.children.items())
            }
        return out

    return ProofDocument(game="lower", m=config.m, g=config.g,
                         value_num=value_num, root=encode(tree),
                         meta=meta if meta is not None else new_meta())


def upper_proof_document(config, tree, value_num: int, meta=None) -> ProofDocument:
    """Freeze an algorithm decision tree into a document.

    ``tree`` nodes need ``loads`` and ``moves`` mapping item class to
    an object with ``bin``, ``on_overflow``, ``on_no_overflow``.
    """

    def encode(node):
        out = {"loads": list(node.loads)}
        if node.moves:
            moves = {}
            for y, mv in sorted(node.moves.items()):
                entry = {"bin": mv.bin}
                if mv.on_overflow is not None:
                    entry["on_overflow"] = encode(mv.on_overflow)
                if mv.on_no_overflow is not None:
                    entry["on_no_overflow"] = encode(mv.on_no_overflow)
                moves[str(y)] = entry
            out["moves"] = moves
        return out

    return ProofDocument(game="upper", m=config.m, g=config.g,
                         value_num=value_num, root=encode(tree),
                         meta=meta if meta is not None else new_meta())


# ----------------------------------------------------------------------
# serialization


def serialize(doc: ProofDocument) -> bytes:
    payload = {
        "schema_version": doc.schema_version,
        "game": doc.game,
        "m": doc.m,
        "g": doc.g,
        "value_num": doc.value_num,
        "meta": doc.meta,
        "root": doc.root,
    }
    text = json.dumps(payload, sort_keys=True, indent=1, ensure_ascii=True)
    return (text + "\n").encode("utf-8")


def deserialize(data) -> ProofDocument:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProofParseError(f"not UTF-8: {exc}") from exc
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ProofParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(payload, dict):
        raise MalformedTreeError("top level must be an object")
    if payload.get("schema_version") != "1":
        raise MalformedTreeError(
            f"unsupported schema_version {payload.get('schema_version')!r}"
        )
    game = payload.get("game")
    if game not in ("lower", "upper"):
        raise MalformedTreeError(f"unknown game kind {game!r}")
    m, g = payload.get("m"), payload.get("g")
    if not isinstance(m, int) or not isinstance(g, int) or m < 1 or g < 1:
        raise MalformedTreeError(f"bad instance parameters m={m!r}, g={g!r}")
    value_num = payload.get("value_num")
    if not isinstance(value_num, int) or value_num < 0:
        raise MalformedTreeError(f"bad claimed value {value_num!r}")
    root = payload.get("root")
    if not isinstance(root, dict):
        raise MalformedTreeError("missing tree root")
    meta = payload.get("meta")
    if meta is None:
        meta = {}
    if not isinstance(meta, dict):
        raise MalformedTreeError("meta must be an object")
    return ProofDocument(game=game, m=m, g=g, value_num=value_num,
                         root=root, meta=meta)


def write_proof(doc: ProofDocument, path) -> None:
    Path(path).write_bytes(serialize(doc))


def read_proof(path) -> ProofDocument:
    return deserialize(Path(path).read_bytes())


# ----------------------------------------------------------------------
# verification


def _checked_loads(node, m: int, cap: int, expected) -> tuple:
    if not isinstance(node, dict):
        raise MalformedTreeError(f"tree node must be an object, got {type(node).__name__}")
    loads = node.get("loads")
    if (
        not isinstance(loads, list)
        or len(loads) != m
        or any(not isinstance(v, int) or v < 0 or v > cap for v in loads)
    ):
        raise MalformedTreeError(f"bad loads {loads!r}")
    loads = tuple(loads)
    if list(loads) != sorted(loads, reverse=True):
        raise MalformedTreeError(f"loads {loads} not sorted non-increasing")
    if expected is not None and loads != expected:
        raise MalformedTreeError(
            f"loads {loads} disagree with recomputed bookkeeping {expected}"
        )
    return loads


def _int_keys(mapping, what: str) -> list:
    out = []
    for key in mapping:
        try:
            out.append((int(key), key))
        except (TypeError, ValueError):
            raise MalformedTreeError(f"non-integer {what} key {key!r}") from None
    out.sort()
    return out


def verify_lower(doc: ProofDocument, oracle: FeasibilityOracle | None = None) -> Score:
    """Re-derive the bound an adversary tree proves.

    Returns the minimum over leaves of the maximum load. At every
    internal node the stored item must still pack together with
    everything sent above it, and the children must cover exactly the
    distinct bin replies (placements beyond 2g are dominated and
    excluded, matching the solver's move rule). Only the packing
    oracle is consulted; the claimed value is not.
    """
    if doc.game != "lower":
        raise MalformedTreeError(f"expected a lower-game document, got {doc.game!r}")
    oracle = oracle if oracle is not None else FeasibilityOracle()
    m, g = doc.m, doc.g
    cap = 2 * g

    def walk(node, expected, sent) -> int:
        loads = _checked_loads(node, m, cap, expected)
        item = node.get("item")
        if item is None:
            if "children" in node:
                raise MalformedTreeError("leaf node carries children")
            return loads[0]
        if not isinstance(item, int) or not 1 <= item <= g:
            raise MalformedTreeError(f"item {item!r} outside 1..{g}")
        grown = sent.add(item)
        if not oracle.fits(grown, m, g):
            raise InfeasibleItemError(
                f"item {item} cannot fit with {sent} into {m} bins of size {g}"
            )
        reps = [i for i in distinct_bin_moves(loads) if loads[i] + item <= cap]
        children = node.get("children")
        if not isinstance(children, dict):
            raise MalformedTreeError("internal node without children map")
        keys = _int_keys(children, "child")
        if [k for k, _ in keys] != reps:
            raise MalformedTreeError(
                f"children {[k for k, _ in keys]} do not cover replies {reps}"
            )
        return min(
            walk(children[raw], place(loads, r, item), grown) for r, raw in keys
        )

    value = walk(doc.root, (0,) * m, Multiset())
    return Score(value, g)


def verify_upper(doc: ProofDocument, oracle: FeasibilityOracle | None = None) -> Score:
    """Check an algorithm tree answers every legal adversary option and
    return the worst reachable final score.

    Legality (packing of the class multiset into m bins of capacity
    g-1, load-sum budget m*g-1, forced overflow for class 0) is
    recomputed here from scratch; each decision's bin must be a
    representative index of the node's canonical loads.
    """
    if doc.game != "upper":
        raise MalformedTreeError(f"expected an upper-game document, got {doc.game!r}")
    oracle = oracle if oracle is not None else FeasibilityOracle()
    m, g = doc.m, doc.g
    budget = m * g - 1
    cap = m * g  # a load class can never exceed the sum budget + 1

    def legal(sent, load_sum):
        out = []
        for y in range(g):
            bits = tuple(
                o for o in (0, 1)
                if load_sum + y + o <= budget and (y != 0 or o == 1)
            )
            if bits and oracle.fits(sent.add(y), m, g - 1):
                out.append((y, bits))
        return out

    def walk(node, expected, sent) -> int:
        loads = _checked_loads(node, m, cap, expected)
        raw_moves = node.get("moves") or {}
        if not isinstance(raw_moves, dict):
            raise MalformedTreeError("moves must be an object")
        options = legal(sent, sum(loads))
        legal_bits = dict(options)
        moves = {}
        for y, raw in _int_keys(raw_moves, "move"):
            if y not in legal_bits:
                raise MalformedTreeError(f"decision for unsendable class {y}")
            moves[y] = raw_moves[raw]
        missing = [y for y, _ in options if y not in moves]
        if missing:
            raise IncompleteStrategyError(f"no decision for legal classes {missing}")
        if not options:
            return loads[0] + 1
        reps = set(distinct_bin_moves(loads))
        worst = 0
        for y, bits in options:
            entry = moves[y]
            if not isinstance(entry, dict):
                raise MalformedTreeError(f"decision for class {y} must be an object")
            b = entry.get("bin")
            if not isinstance(b, int) or b not in reps:
                raise MalformedTreeError(
                    f"bin {b!r} for class {y} is not a representative of {loads}"
                )
            grown = sent.add(y)
            for o in (0, 1):
                branch = entry.get("on_overflow" if o else "on_no_overflow")
                if o in bits:
                    if branch is None:
                        raise IncompleteStrategyError(
                            f"class {y}: missing "
                            f"{'overflow' if o else 'no-overflow'} branch"
                        )
                    worst = max(worst, walk(branch, place(loads, b, y + o), grown))
                elif branch is not None:
                    raise MalformedTreeError(
                        f"class {y}: branch present for illegal overflow bit {o}"
                    )
        return worst

    value = walk(doc.root, (0,) * m, Multiset())
    return Score(value, g)


def verify(doc: ProofDocument, oracle: FeasibilityOracle | None = None) -> Score:
    """Dispatch on the document's game kind."""
    if doc.game == "lower":
        return verify_lower(doc, oracle)
    return verify_upper(doc, oracle)
