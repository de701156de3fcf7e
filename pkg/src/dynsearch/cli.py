"""Command-line interface.

One binary with subcommands for parsing and generating instances, oracle
tables, property checks, framework runs, the search itself, trace
verification, the randomized theorem suite, and a self-check that replays
the built-in example instances against golden expectations.

Exit codes: 64 usage error, 65 malformed input data, 74 I/O error.  The
``astar`` subcommand additionally uses 0 = solution, 1 = unsolvable,
2 = step limit or search error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

from . import dynastar, framework, heuristics, instances, oracle, verify
from .costs import cost_from_json, cost_to_json
from .heuristics import DynamicHeuristic
from .info import ContractViolation, EnumerationOverflow
from .transition_system import (
    FormatError,
    GenerationError,
    TransitionSystem,
    generate_random,
    parse,
    serialize,
    serialize_json,
)

EX_USAGE = 64
EX_DATAERR = 65
EX_IOERR = 74


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 64 instead of argparse's default 2
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce a search run byte-for-byte."""

    ts_path: str
    heuristic: str
    reeval: bool
    reopen: bool
    step_limit: int

    def to_json(self) -> dict:
        return asdict(self)


def build_parser() -> _Parser:
    # global flags live on a shared parent so they are accepted both before
    # and after the subcommand; SUPPRESS keeps subparser defaults from
    # clobbering values given at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true", default=argparse.SUPPRESS,
        help="prefer JSON output",
    )
    common.add_argument(
        "--quiet", action="store_true", default=argparse.SUPPRESS,
        help="suppress informational output",
    )
    common.add_argument(
        "--seed", type=int, dest="root_seed", default=argparse.SUPPRESS,
        help="seed for seeded subcommands",
    )

    parser = _Parser(prog="dynsearch", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_command(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add_command("parse", "validate a system and print its canonical form")
    p.add_argument("file")

    p = add_command("generate", "generate a random system")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--transitions", type=int, required=True)
    p.add_argument("--max-cost", type=int, default=9)
    p.add_argument("--goals", type=int, default=1)
    p.add_argument("--solvable", action="store_true")
    p.add_argument("-o", "--output")

    p = add_command("oracle", "print g*/h* tables")
    p.add_argument("file")

    p = add_command("check", "check a dyn-property of a heuristic")
    p.add_argument("file")
    p.add_argument("--property", required=True, choices=heuristics.PROPERTIES)
    p.add_argument("--heuristic", default="hlm", help=_HEURISTIC_HELP)
    p.add_argument("--depth", type=int, default=None)

    p = add_command("framework", "drive the generic search framework")
    p.add_argument("file")
    p.add_argument("--policy", choices=["random", "gen-unknown-first"], default="random")
    p.add_argument("--steps", type=int, default=10_000)

    p = add_command("astar", "run the search")
    p.add_argument("file")
    p.add_argument("--heuristic", default="hlm", help=_HEURISTIC_HELP)
    p.add_argument("--reeval", action="store_true")
    p.add_argument("--no-reopen", action="store_true")
    p.add_argument("--step-limit", type=int, default=1_000_000)
    p.add_argument("--trace", help="write the event trace to this JSONL file")

    p = add_command("verify", "check theorems against a trace file")
    p.add_argument("--trace", required=True)
    p.add_argument("--ts", required=True)
    p.add_argument("--check", choices=["all", "optimal", "f-mono", "reopen", "optex"], default="all")

    p = add_command("suite", "randomized theorem battery")
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--states", type=int, default=10)
    p.add_argument("--transitions", type=int, default=24)
    p.add_argument("--max-cost", type=int, default=9)

    add_command("paper-examples", "replay the built-in instances against golden results")
    return parser


_HEURISTIC_HELP = (
    "hlm | zero | perfect | static:<json-table> | scripted:<json-sidecar> | "
    "lazy:<json-file with cheap/accurate tables>"
)


def load_heuristic(spec: str, ts: TransitionSystem) -> DynamicHeuristic:
    if spec == "hlm":
        return heuristics.hlm(ts)
    if spec == "zero":
        return heuristics.static_adapter({s: 0 for s in ts.states}, ts)
    if spec == "perfect":
        return heuristics.static_adapter(oracle.hstar_all(ts), ts)
    if spec.startswith("static:"):
        doc = _read_json(spec.split(":", 1)[1])
        table = {s: cost_from_json(v) for s, v in doc.items()}
        return heuristics.static_adapter(table, ts)
    if spec.startswith("scripted:"):
        return instances.load_scripted_sidecar(_read_text(spec.split(":", 1)[1]), ts)
    if spec.startswith("lazy:"):
        doc = _read_json(spec.split(":", 1)[1])
        cheap = {s: cost_from_json(v) for s, v in doc["cheap"].items()}
        accurate = {s: cost_from_json(v) for s, v in doc["accurate"].items()}
        return heuristics.lazy_heuristic(cheap, accurate, ts)
    raise UsageError(f"unknown heuristic spec {spec!r}")


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fp:
        return fp.read()


def _read_json(path: str):
    return json.loads(_read_text(path))


def _load_ts(path: str) -> TransitionSystem:
    return parse(_read_text(path))


def _cost_table_json(table: dict) -> dict:
    return {s: cost_to_json(c) for s, c in table.items()}


def cmd_parse(args, as_json: bool) -> int:
    ts = _load_ts(args.file)
    violations = ts.validate()
    if violations:
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        return EX_DATAERR
    sys.stdout.write(serialize_json(ts) if as_json else serialize(ts))
    return 0


def cmd_generate(args) -> int:
    ts = generate_random(
        args.states, args.transitions, args.max_cost, args.goals, args.solvable,
        args.root_seed,
    )
    text = serialize(ts)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_oracle(args) -> int:
    ts = _load_ts(args.file)
    doc = {
        "g_star": _cost_table_json(oracle.gstar_all(ts)),
        "h_star": _cost_table_json(oracle.hstar_all(ts)),
        "optimal_cost": cost_to_json(oracle.optimal_solution_cost(ts)),
    }
    print(json.dumps(doc, indent=2))
    return 0


def cmd_check(args) -> int:
    ts = _load_ts(args.file)
    heuristic = load_heuristic(args.heuristic, ts)
    verdict = heuristics.check_property(ts, heuristic, args.property, args.depth)
    print(json.dumps(verdict.to_json(), indent=2))
    return 0


def cmd_framework(args) -> int:
    ts = _load_ts(args.file)
    if args.policy == "random":
        policy = framework.RandomPolicy(args.root_seed)
    else:
        policy = framework.GenUnknownFirstPolicy()
    sources = [heuristics.hlm(ts).source]
    run = framework.run_policy(ts, sources, policy, args.steps)
    for op in run.operations:
        print(json.dumps(_operation_json(op), separators=(",", ":")))
    print(json.dumps({"result": run.result}, separators=(",", ":")))
    return 0 if run.result != framework.STEP_LIMIT else 2


def _operation_json(op) -> dict:
    if isinstance(op, framework.GenUnknown):
        return {"op": "gen-unknown", "transition": list(op.transition)}
    if isinstance(op, framework.GenKnown):
        return {"op": "gen-known", "transition": list(op.transition)}
    if isinstance(op, framework.Refine):
        return {"op": "refine", "state": op.state}
    if isinstance(op, framework.DeclareSolvable):
        return {"op": "declare-solvable"}
    return {"op": "declare-unsolvable"}


def cmd_astar(args, quiet: bool) -> int:
    ts = _load_ts(args.file)
    heuristic = load_heuristic(args.heuristic, ts)
    config = RunConfig(
        ts_path=args.file,
        heuristic=args.heuristic,
        reeval=args.reeval,
        reopen=not args.no_reopen,
        step_limit=args.step_limit,
    )
    try:
        result, trace = dynastar.search(
            ts, heuristic, reeval=config.reeval, reopen=config.reopen, step_limit=config.step_limit
        )
    except ContractViolation as exc:
        print(f"dynsearch: search failed: {exc}", file=sys.stderr)
        return 2
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fp:
            dynastar.write_trace(trace, fp)
    doc = result.to_json()
    doc["config"] = config.to_json()
    if not config.reopen:
        doc["conforming"] = False  # reopening disabled: demonstration mode only
    if not quiet:
        print(json.dumps(doc, indent=2))
    if result.outcome == dynastar.SOLUTION:
        return 0
    if result.outcome == dynastar.UNSOLVABLE:
        return 1
    return 2


def cmd_verify(args) -> int:
    ts = _load_ts(args.ts)
    trace = dynastar.read_trace_dicts(_read_text(args.trace))
    reports = []
    if args.check in ("all", "optimal"):
        returns = [e for e in trace if e.get("event") == "return"]
        if not returns:
            raise UsageError("trace has no return event; cannot check optimality")
        final = returns[-1]
        result = dynastar.SearchResult(
            outcome=final["outcome"],
            path=None,
            cost=cost_from_json(final.get("cost")) if final["outcome"] == "solution" else None,
            stats=dynastar.SearchStats(0, 0, 0, 0, 0, 0),
        )
        reports.append(verify.assert_optimal(result, ts))
    if args.check in ("all", "f-mono"):
        reports.append(verify.popped_f_nondecreasing(trace))
    if args.check in ("all", "reopen"):
        count = verify.reopen_count(trace)
        reports.append(verify.TheoremReport("reopen-count", True, {"count": count}))
    if args.check in ("all", "optex"):
        reports.append(verify.optex(trace, ts))
    print(json.dumps([r.to_json() for r in reports], indent=2))
    return 0


def cmd_suite(args, quiet: bool) -> int:
    failures = []
    runs = 0
    for seed in range(args.seeds):
        ts = generate_random(
            n_states=2 + seed % max(1, args.states - 1),
            n_transitions=min(args.transitions, 2 * (2 + seed % max(1, args.states - 1))),
            max_cost=args.max_cost,
            n_goals=1,
            solvable_only=True,
            seed=seed,
        )
        cm = heuristics.oracle_family(ts, "consistent-monotone", seed)
        result, trace = dynastar.search(ts, cm, reeval=True)
        runs += 1
        checks = [
            verify.assert_optimal(result, ts, context=f"seed={seed} consistent-monotone"),
            verify.popped_f_nondecreasing(trace, context=f"seed={seed}"),
            verify.optex(trace, ts, context=f"seed={seed}"),
        ]
        if verify.reopen_count(trace) != 0:
            failures.append(f"seed={seed}: reopening occurred with consistent-monotone + reeval")
        failures.extend(
            f"{c.context}: {c.theorem} violated: {c.violation}" for c in checks if not c.holds
        )
        ao = heuristics.oracle_family(ts, "admissible-only", seed)
        for reeval in (False, True):
            result, _ = dynastar.search(ts, ao, reeval=reeval)
            runs += 1
            report = verify.assert_optimal(result, ts, context=f"seed={seed} admissible-only")
            if not report.holds:
                failures.append(f"{report.context}: optimality violated: {report.violation}")
    summary = {"runs": runs, "failures": failures, "ok": not failures}
    if not quiet:
        print(json.dumps(summary, indent=2))
    return 0 if not failures else 1


def cmd_paper_examples(quiet: bool) -> int:
    checks: list[tuple[str, bool, str]] = []

    ts1 = instances.landmark_example()
    result, _ = dynastar.search(ts1, heuristics.hlm(ts1), reeval=False)
    expected = instances.GOLDEN["landmark-example/reeval-off"]["cost"]
    checks.append(
        ("landmark-example reeval-off cost", result.cost == expected,
         f"cost {result.cost} (expected {expected})")
    )

    ts2 = instances.reopening_example()
    for name, reeval, reopen in (
        ("reopening-example/reeval-off", False, True),
        ("reopening-example/no-reopen", False, False),
        ("reopening-example/reeval-on", True, True),
    ):
        heuristic = instances.reopening_heuristic(ts2)
        result, trace = dynastar.search(ts2, heuristic, reeval=reeval, reopen=reopen)
        golden = instances.GOLDEN[name]
        ok = result.cost == golden["cost"]
        detail = f"cost {result.cost} (expected {golden['cost']})"
        if "expansions" in golden:
            expanded = [e.state for e in trace if isinstance(e, dynastar.Expand)]
            ok = ok and expanded == golden["expansions"]
            detail += f", expansions {expanded}"
        if "reopenings" in golden:
            count = verify.reopen_count(trace)
            ok = ok and count == golden["reopenings"]
            detail += f", reopenings {count}"
        checks.append((name, ok, detail))

    all_ok = True
    for name, ok, detail in checks:
        all_ok = all_ok and ok
        if not quiet or not ok:
            print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return 0 if all_ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.json = getattr(args, "json", False)
        args.quiet = getattr(args, "quiet", False)
        args.root_seed = getattr(args, "root_seed", 0)
        if args.command == "parse":
            return cmd_parse(args, args.json)
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "oracle":
            return cmd_oracle(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "framework":
            return cmd_framework(args)
        if args.command == "astar":
            return cmd_astar(args, args.quiet)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "suite":
            return cmd_suite(args, args.quiet)
        if args.command == "paper-examples":
            return cmd_paper_examples(args.quiet)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EX_USAGE
    except OSError as exc:
        print(f"dynsearch: {exc}", file=sys.stderr)
        return EX_IOERR
    except (
        FormatError,
        GenerationError,
        ContractViolation,
        EnumerationOverflow,
        json.JSONDecodeError,
        ValueError,
    ) as exc:
        print(f"dynsearch: {exc}", file=sys.stderr)
        return EX_DATAERR


if __name__ == "__main__":
    sys.exit(main())
