"""Command-line front end.

Subcommands: ``lower``, ``upper``, ``verify``, ``lift``, ``bounds``
(with ``corollary`` and ``interval``), ``sweep``. Game values print as
a reduced fraction plus a 4-decimal rendering; solved values are
cached in an append-only JSON-lines file (env ``STRETCH_CACHE``,
default ``./stretch-cache.jsonl``), and a cache hit is reported as
such. ``--threads`` defaults to 1; results are deterministic and
identical for any thread count.

Exit codes: 0 success / proof verified and matching its claim,
2 proof verified but disagreeing with its claim, 3 invalid proof,
64 usage error, 75 solver node budget exceeded (cache keeps whatever
finished).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from binstretch import proofs
from binstretch.bounds import (
    implied_lower_bound,
    render_decimal,
    sandwich_interval,
)
from binstretch.core import Config, ResourceLimitExceeded, Score
from binstretch.lifting import (
    evaluate_lifted_report,
    inner_granularity,
    performance_bound_holds,
)
from binstretch.lower_game import LowerGamePolicy, LowerGameSolver
from binstretch.upper_game import UpperGameSolver

EX_OK = 0
EX_CLAIM_MISMATCH = 2
EX_INVALID = 3
EX_USAGE = 64
EX_TEMPFAIL = 75

CSV_COLUMNS = ["m", "g", "game", "value_num", "value_dec", "millis", "proof_path"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    """Exact p/q parser; decimals are rejected on purpose."""
    parts = text.split("/")
    if len(parts) == 1 and parts[0].isdigit():
        return Fraction(int(parts[0]))
    if len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit() and int(parts[1]) > 0:
        return Fraction(int(parts[0]), int(parts[1]))
    raise argparse.ArgumentTypeError(
        f"expected an exact rational like 31/22, got {text!r} (decimals are rejected)"
    )


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def format_score(score: Score) -> str:
    return f"{score.reduced()} ({score.decimal(4)})"


class ResultsCache:
    """Append-only JSON-lines store of solved game values."""

    def __init__(self, path=None):
        self.path = Path(path or os.environ.get("STRETCH_CACHE") or "stretch-cache.jsonl")

    def lookup(self, game: str, m: int, g: int):
        if not self.path.exists():
            return None
        with self.path.open("r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError:
                    continue
                if (
                    record.get("game") == game
                    and record.get("m") == m
                    and record.get("g") == g
                ):
                    return record
        return None

    def append(self, record: dict) -> None:
        with self.path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, sort_keys=True) + "\n")


def _solve_game(game: str, config: Config, args, cache: ResultsCache):
    """Solve one game CLI-style: cache first, proof export on request.

    Returns (score, millis, proof_path, from_cache).
    """
    strict = bool(getattr(args, "strict_overflow_legality", False))
    want_proof = getattr(args, "proof", None) is not None
    if not want_proof and not strict:
        hit = cache.lookup(game, config.m, config.g)
        if hit is not None:
            score = Score(hit["value_num"], config.g)
            return score, hit.get("millis", 0.0), hit.get("proof_path"), True

    if game == "lower":
        solver = LowerGameSolver(config, max_nodes=args.max_nodes)
    else:
        solver = UpperGameSolver(config, max_nodes=args.max_nodes, strict=strict)

    started = time.perf_counter()
    # proof export needs exact values at every node, so it rides the
    # unpruned path; the value is identical either way
    if want_proof:
        score = solver.solve(prune=False, threads=args.threads)
        tree = solver.extract_strategy()
        if game == "lower":
            doc = proofs.lower_proof_document(config, tree, score.num)
        else:
            doc = proofs.upper_proof_document(config, tree, score.num)
        proofs.write_proof(doc, args.proof)
        proof_path = str(args.proof)
    else:
        score = solver.solve(prune=not args.no_prune, threads=args.threads)
        proof_path = None
    millis = (time.perf_counter() - started) * 1000.0

    if not strict:
        cache.append({
            "game": game,
            "m": config.m,
            "g": config.g,
            "value_num": score.num,
            "millis": round(millis, 3),
            "proof_path": proof_path,
        })
    return score, millis, proof_path, False


def _cmd_lower(args) -> int:
    config = Config(args.m, args.g)
    cache = ResultsCache()
    score, _, _, cached = _solve_game("lower", config, args, cache)
    print(format_score(score))
    if cached:
        print(f"source: cache ({cache.path})")
    return EX_OK


def _cmd_upper(args) -> int:
    config = Config(args.m, args.g)
    cache = ResultsCache()
    score, _, _, cached = _solve_game("upper", config, args, cache)
    print(format_score(score))
    if cached:
        print(f"source: cache ({cache.path})")
    return EX_OK


def _cmd_verify(args) -> int:
    try:
        doc = proofs.read_proof(args.path)
        score = proofs.verify(doc)
    except OSError as exc:
        print(f"cannot read proof: {exc}", file=sys.stderr)
        return EX_INVALID
    except proofs.ProofError as exc:
        print(f"invalid proof: {exc}", file=sys.stderr)
        return EX_INVALID
    print(score.reduced())
    if score.num != doc.value_num:
        print(
            f"verified value {score} disagrees with claimed {doc.value_num}/{doc.g}",
            file=sys.stderr,
        )
        return EX_CLAIM_MISMATCH
    return EX_OK


def _cmd_lift(args) -> int:
    m, g = args.m, args.g
    config = Config(m, g)
    g_prime = inner_granularity(g, m)
    inner_config = Config(m, g_prime)
    solver = LowerGameSolver(inner_config, max_nodes=args.max_nodes)
    inner_score = solver.solve(prune=False, threads=args.threads)
    policy = LowerGamePolicy(inner_config, solver=solver)
    report = evaluate_lifted_report(policy, config, g_prime=g_prime)

    lhs = report.score.num
    rhs_num = inner_score.num
    holds = performance_bound_holds(lhs, rhs_num, g, m)
    with localcontext() as ctx:
        ctx.prec = 40
        root_g = m * Decimal(g).sqrt()
        rhs = Decimal(rhs_num) + root_g + 2
        delta_lo = -(root_g + 1)
        delta_hi = Decimal(g).sqrt()

    print(f"inner granularity g' = {g_prime}")
    print(f"inner lower-game value: {format_score(inner_score)}")
    print(f"lifted strategy worst score: {format_score(report.score)}")
    print(
        f"performance bound: {lhs} <= {rhs_num} + {render_decimal(root_g + 2)}"
        f" = {render_decimal(rhs)} : {'yes' if holds else 'NO'}"
    )
    print(
        f"delta range observed: [{report.delta_min}, {report.delta_max}]"
        f" within [{render_decimal(delta_lo)}, {render_decimal(delta_hi)}]"
    )
    return EX_OK if holds else 1


def _cmd_bounds_corollary(args) -> int:
    value = implied_lower_bound(args.u, args.g, args.m, ceil_g_prime=args.ceil_gprime)
    print(render_decimal(value))
    return EX_OK


def _cmd_bounds_interval(args) -> int:
    lo, hi = sandwich_interval(args.l, args.g, args.m)
    print(f"lo={render_decimal(lo)} hi={render_decimal(hi)}")
    return EX_OK


def _cmd_sweep(args) -> int:
    cache = ResultsCache()
    writer = csv.writer(sys.stdout)
    writer.writerow(CSV_COLUMNS)
    for g in range(1, args.g_max + 1):
        config = Config(args.m, g)
        for game in ("lower", "upper"):
            score, millis, proof_path, _ = _solve_game(game, config, args, cache)
            writer.writerow([
                args.m, g, game, score.num, score.decimal(4),
                round(millis, 3), proof_path or "",
            ])
    return EX_OK


def _add_solver_flags(parser, proof: bool = True):
    parser.add_argument("-m", type=_positive, required=True, help="number of bins")
    parser.add_argument("-g", type=_positive, required=True, help="granularity")
    if proof:
        parser.add_argument("--proof", metavar="PATH",
                            help="export the strategy tree as a proof document")
    parser.add_argument("--no-prune", action="store_true",
                        help="disable alpha-beta pruning (value is identical)")
    parser.add_argument("--threads", type=_positive, default=1,
                        help="root-level solver threads; output is identical "
                             "for any value (default 1)")
    parser.add_argument("--max-nodes", type=_positive, default=None,
                        help="abort with exit 75 past this many search nodes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="binstretch",
                     description="Exact online bin stretching solvers, proofs "
                                 "and convergence bounds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_lower = sub.add_parser("lower", help="solve the lower bound game")
    _add_solver_flags(p_lower)
    p_lower.set_defaults(func=_cmd_lower)

    p_upper = sub.add_parser("upper", help="solve the upper bound game")
    _add_solver_flags(p_upper)
    p_upper.add_argument("--strict-overflow-legality", action="store_true",
                         help="alternative adversary legality: every overflow "
                              "bit must fit the budget (not cached)")
    p_upper.set_defaults(func=_cmd_upper)

    p_verify = sub.add_parser("verify", help="verify a proof document")
    p_verify.add_argument("path", help="*.obsproof.json file")
    p_verify.set_defaults(func=_cmd_verify)

    p_lift = sub.add_parser("lift", help="lift the optimal inner policy and "
                                         "check the performance bound")
    _add_solver_flags(p_lift, proof=False)
    p_lift.set_defaults(func=_cmd_lift)

    p_bounds = sub.add_parser("bounds", help="convergence bound arithmetic")
    bounds_sub = p_bounds.add_subparsers(dest="bounds_command", required=True,
                                         parser_class=_Parser)
    p_cor = bounds_sub.add_parser("corollary",
                                  help="lower bound implied by an upper-game value")
    p_cor.add_argument("-u", type=_rational, required=True, help="upper-game value p/q")
    p_cor.add_argument("-m", type=_positive, required=True)
    p_cor.add_argument("-g", type=_positive, required=True)
    p_cor.add_argument("--ceil-gprime", action="store_true",
                       help="use the ceiled integer inner granularity")
    p_cor.set_defaults(func=_cmd_bounds_corollary)
    p_int = bounds_sub.add_parser("interval",
                                  help="two-sided bracket from an inner lower-game value")
    p_int.add_argument("-l", type=_rational, required=True,
                       help="lower-game value p/q at the inner granularity")
    p_int.add_argument("-m", type=_positive, required=True)
    p_int.add_argument("-g", type=_positive, required=True)
    p_int.set_defaults(func=_cmd_bounds_interval)

    p_sweep = sub.add_parser("sweep", help="tabulate both games for g = 1..g-max")
    p_sweep.add_argument("-m", type=_positive, required=True)
    p_sweep.add_argument("--g-max", type=_positive, required=True)
    p_sweep.add_argument("--no-prune", action="store_true")
    p_sweep.add_argument("--threads", type=_positive, default=1)
    p_sweep.add_argument("--max-nodes", type=_positive, default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitExceeded as exc:
        print(f"resource limit exceeded: {exc}", file=sys.stderr)
        return EX_TEMPFAIL


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
