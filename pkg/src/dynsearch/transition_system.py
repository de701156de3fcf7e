"""Finite labeled weighted transition systems.

A system is a digraph with labeled, integer-weighted edges, a designated
initial state and a set of goal states.  Systems are immutable after
construction and safe to share between concurrent search runs.  State and
label ids are opaque strings; iteration order everywhere is declaration
(file) order, which makes every downstream consumer deterministic.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .costs import INF


class Transition(NamedTuple):
    origin: str
    label: str
    target: str


# A path is a chained sequence of transitions.
Path = tuple[Transition, ...]


class FormatError(ValueError):
    """Malformed transition-system document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class GenerationError(ValueError):
    """Random-instance generation cannot satisfy the requested parameters."""


@dataclass(frozen=True, eq=False)
class TransitionSystem:
    states: tuple[str, ...]
    labels: tuple[str, ...]
    label_cost: dict[str, int]
    transitions: tuple[Transition, ...]
    init: str
    goals: tuple[str, ...]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransitionSystem):
            return NotImplemented
        return (
            self.states == other.states
            and self.labels == other.labels
            and self.label_cost == other.label_cost
            and self.transitions == other.transitions
            and self.init == other.init
            and self.goals == other.goals
        )

    @cached_property
    def _goal_set(self) -> frozenset[str]:
        return frozenset(self.goals)

    @cached_property
    def _state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def _successors(self) -> dict[str, tuple[Transition, ...]]:
        out: dict[str, list[Transition]] = {s: [] for s in self.states}
        for t in self.transitions:
            out[t.origin].append(t)
        return {s: tuple(ts) for s, ts in out.items()}

    def is_goal(self, state: str) -> bool:
        return state in self._goal_set

    def state_index(self, state: str) -> int:
        return self._state_index[state]

    def cost(self, label: str) -> int:
        return self.label_cost[label]

    def successors(self, state: str) -> tuple[Transition, ...]:
        """Outgoing transitions of ``state`` in declaration order."""
        if state not in self._state_index:
            raise KeyError(f"unknown state {state!r}")
        return self._successors[state]

    def validate(self) -> list[str]:
        """Check all structural invariants; returns violations (empty = ok)."""
        violations = []
        known_states = set(self.states)
        known_labels = set(self.labels)
        if len(known_states) != len(self.states):
            violations.append("duplicate state declaration")
        if len(known_labels) != len(self.labels):
            violations.append("duplicate label declaration")
        if self.init not in known_states:
            violations.append(f"init state {self.init!r} not declared")
        for g in self.goals:
            if g not in known_states:
                violations.append(f"goal state {g!r} not declared")
        for label in self.labels:
            c = self.label_cost.get(label)
            if c is None:
                violations.append(f"label {label!r} has no cost")
            elif not isinstance(c, int) or isinstance(c, bool) or c < 0:
                violations.append(f"label {label!r} has invalid cost {c!r}")
        for t in self.transitions:
            if t.origin not in known_states:
                violations.append(f"transition {t} references unknown origin")
            if t.target not in known_states:
                violations.append(f"transition {t} references unknown target")
            if t.label not in known_labels:
                violations.append(f"transition {t} references unknown label")
        seen = set()
        for t in self.transitions:
            if t in seen:
                violations.append(f"duplicate transition {t}")
            seen.add(t)
        return violations


def validate(ts: TransitionSystem) -> list[str]:
    """Module-level spelling of TransitionSystem.validate."""
    return ts.validate()


def path_cost(ts: TransitionSystem, path: Iterable[Transition]) -> int:
    """Exact sum of label costs along a chained path; the empty path costs 0."""
    total = 0
    prev: Transition | None = None
    for t in path:
        if prev is not None and prev.target != t.origin:
            raise ValueError(f"path does not chain: {prev} followed by {t}")
        total += ts.label_cost[t.label]
        prev = t
    return total


def is_path(ts: TransitionSystem, path: Iterable[Transition]) -> bool:
    prev = None
    for t in path:
        if t not in set(ts.transitions):
            return False
        if prev is not None and prev.target != t.origin:
            return False
        prev = t
    return True


def successors(ts: TransitionSystem, state: str) -> tuple[Transition, ...]:
    return ts.successors(state)


def parse(text: str) -> TransitionSystem:
    """Parse a transition-system document (line format or JSON).

    The line format is::

        ts-format 1
        label <name> <cost>
        state <name>...
        init <name>
        goal <name>...
        trans <origin> <label> <target>

    with ``#`` comments.  A JSON object with keys ``labels`` (name -> cost),
    ``states``, ``init``, ``goals`` and ``transitions`` is also accepted.
    """
    if text.lstrip()[:1] == "{":
        return _parse_json(text)
    return _parse_lines(text)


def _parse_lines(text: str) -> TransitionSystem:
    labels: list[str] = []
    label_cost: dict[str, int] = {}
    states: list[str] = []
    state_set: set[str] = set()
    init: str | None = None
    goals: list[str] = []
    transitions: list[Transition] = []
    transition_set: set[Transition] = set()
    saw_header = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        tokens = line.split()
        col = raw.index(tokens[0]) + 1

        if not saw_header:
            if tokens == ["ts-format", "1"]:
                saw_header = True
                continue
            raise FormatError("expected header 'ts-format 1'", lineno, col)

        keyword, args = tokens[0], tokens[1:]
        if keyword == "label":
            if len(args) != 2:
                raise FormatError("label line needs a name and a cost", lineno, col)
            name, cost_str = args
            if name in label_cost:
                raise FormatError(f"duplicate label {name!r}", lineno, col)
            try:
                cost = int(cost_str)
            except ValueError:
                raise FormatError(f"invalid cost {cost_str!r}", lineno, col) from None
            if cost < 0:
                raise FormatError(f"negative cost for label {name!r}", lineno, col)
            labels.append(name)
            label_cost[name] = cost
        elif keyword == "state":
            if not args:
                raise FormatError("state line needs at least one name", lineno, col)
            for name in args:
                if name in state_set:
                    raise FormatError(f"duplicate state {name!r}", lineno, col)
                states.append(name)
                state_set.add(name)
        elif keyword == "init":
            if len(args) != 1:
                raise FormatError("init line needs exactly one state", lineno, col)
            if init is not None:
                raise FormatError("init declared twice", lineno, col)
            if args[0] not in state_set:
                raise FormatError(f"unknown state {args[0]!r}", lineno, col)
            init = args[0]
        elif keyword == "goal":
            if not args:
                raise FormatError("goal line needs at least one state", lineno, col)
            for name in args:
                if name not in state_set:
                    raise FormatError(f"unknown state {name!r}", lineno, col)
                if name not in goals:
                    goals.append(name)
        elif keyword == "trans":
            if len(args) != 3:
                raise FormatError("trans line needs origin, label and target", lineno, col)
            origin, label, target = args
            if origin not in state_set:
                raise FormatError(f"unknown state {origin!r}", lineno, col)
            if target not in state_set:
                raise FormatError(f"unknown state {target!r}", lineno, col)
            if label not in label_cost:
                raise FormatError(f"unknown label {label!r}", lineno, col)
            t = Transition(origin, label, target)
            if t in transition_set:
                raise FormatError(f"duplicate transition {origin} {label} {target}", lineno, col)
            transitions.append(t)
            transition_set.add(t)
        else:
            raise FormatError(f"unknown directive {keyword!r}", lineno, col)

    if not saw_header:
        raise FormatError("empty document, expected header 'ts-format 1'", 1)
    if init is None:
        raise FormatError("missing init declaration")
    if not goals:
        raise FormatError("missing goal declaration")
    return TransitionSystem(
        states=tuple(states),
        labels=tuple(labels),
        label_cost=label_cost,
        transitions=tuple(transitions),
        init=init,
        goals=tuple(goals),
    )


def _parse_json(text: str) -> TransitionSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise FormatError("JSON document must be an object")
    missing = {"labels", "states", "init", "goals", "transitions"} - doc.keys()
    if missing:
        raise FormatError(f"missing keys: {', '.join(sorted(missing))}")

    lines = ["ts-format 1"]
    for name, cost in doc["labels"].items():
        lines.append(f"label {name} {cost}")
    for name in doc["states"]:
        lines.append(f"state {name}")
    lines.append(f"init {doc['init']}")
    for name in doc["goals"]:
        lines.append(f"goal {name}")
    for entry in doc["transitions"]:
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise FormatError(f"transition entry must be [origin, label, target], got {entry!r}")
        lines.append("trans " + " ".join(str(x) for x in entry))
    return _parse_lines("\n".join(lines) + "\n")


def serialize(ts: TransitionSystem) -> str:
    """Canonical text form; ``parse(serialize(ts)) == ts``."""
    lines = ["ts-format 1"]
    lines.extend(f"label {name} {ts.label_cost[name]}" for name in ts.labels)
    lines.extend(f"state {name}" for name in ts.states)
    lines.append(f"init {ts.init}")
    lines.extend(f"goal {name}" for name in ts.goals)
    lines.extend(f"trans {t.origin} {t.label} {t.target}" for t in ts.transitions)
    return "\n".join(lines) + "\n"


def serialize_json(ts: TransitionSystem) -> str:
    """The JSON document form accepted by parse."""
    doc = {
        "labels": {name: ts.label_cost[name] for name in ts.labels},
        "states": list(ts.states),
        "init": ts.init,
        "goals": list(ts.goals),
        "transitions": [list(t) for t in ts.transitions],
    }
    return json.dumps(doc, indent=2) + "\n"


def reachable_states(ts: TransitionSystem) -> set[str]:
    """States reachable from init, ignoring costs."""
    seen = {ts.init}
    stack = [ts.init]
    while stack:
        for t in ts.successors(stack.pop()):
            if t.target not in seen:
                seen.add(t.target)
                stack.append(t.target)
    return seen


def is_solvable(ts: TransitionSystem) -> bool:
    return any(ts.is_goal(s) for s in reachable_states(ts))


def generate_random(
    n_states: int,
    n_transitions: int,
    max_cost: int,
    n_goals: int,
    solvable_only: bool,
    seed: int,
) -> TransitionSystem:
    """Deterministically generate a random system for a given seed.

    Labels are derived from the edge count (at most four distinct labels) with
    costs drawn from 1..max_cost.  Duplicate transition triples are rejected
    by resampling; with ``solvable_only`` the whole system is resampled until
    a goal is reachable, up to a bounded number of retries.
    """
    if n_states < 1:
        raise GenerationError("n_states must be >= 1")
    if n_transitions < 0:
        raise GenerationError("n_transitions must be >= 0")
    if max_cost < 1 or max_cost == INF:
        raise GenerationError("max_cost must be a finite cost >= 1")
    if not 1 <= n_goals <= n_states:
        raise GenerationError("n_goals must be between 1 and n_states")

    n_labels = max(1, min(4, n_transitions))
    capacity = n_states * n_states * n_labels
    if n_transitions > capacity:
        raise GenerationError(
            f"n_transitions={n_transitions} exceeds |S|^2*|L|={capacity}"
        )

    rng = random.Random(seed)
    states = tuple(f"s{i}" for i in range(n_states))
    labels = tuple(f"l{i}" for i in range(n_labels))

    for _ in range(200):
        label_cost = {name: rng.randint(1, max_cost) for name in labels}
        goals = tuple(sorted(rng.sample(states, n_goals), key=states.index))
        transitions: list[Transition] = []
        chosen: set[Transition] = set()
        budget = 50 * n_transitions + 100
        while len(transitions) < n_transitions:
            if budget <= 0:
                raise GenerationError("retry budget exhausted while sampling transitions")
            budget -= 1
            t = Transition(rng.choice(states), rng.choice(labels), rng.choice(states))
            if t not in chosen:
                chosen.add(t)
                transitions.append(t)
        ts = TransitionSystem(
            states=states,
            labels=labels,
            label_cost=label_cost,
            transitions=tuple(transitions),
            init=states[0],
            goals=goals,
        )
        if not solvable_only or is_solvable(ts):
            return ts
    raise GenerationError("retry budget exhausted: no solvable instance found")
