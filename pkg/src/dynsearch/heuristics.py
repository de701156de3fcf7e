"""Dynamic heuristics and bounded checkers for their properties.

A dynamic heuristic evaluates ``(state, information object)`` to an extended
cost and carries a reference to the information source its objects come
from.  Concrete heuristics here: the landmark-sum heuristic over the label
landmark progression, lazy two-table evaluation, a static-table adapter, a
lookup over scripted sources, and two seeded families derived from the
perfect heuristic that have known properties by construction (used to drive
the randomized theorem suites).

Property checks quantify over all reachable information objects, which can
be an infinite set; the checkers therefore enumerate up to a depth bound and
report "bounded-yes" rather than "yes" when no violation is found.  A "no"
verdict always carries a concrete, re-checkable witness.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Any, Hashable, Mapping

from . import oracle
from .costs import INF, cost_to_json, ensure_cost
from .info import (
    ConstantSource,
    InformationSource,
    ContractViolation,
    LazySource,
    ScriptedSource,
    StateMap,
    landmark_source,
    progression_to_information,
    reachable_info_witnesses,
)
from .transition_system import Transition, TransitionSystem

PROPERTIES = (
    "dyn-safe",
    "dyn-admissible",
    "dyn-consistent",
    "partial-dyn-consistent",
    "dyn-goal-aware",
    "dyn-monotone",
)


class DynamicHeuristic:
    """Evaluator from (state, information object) to an extended cost."""

    source: InformationSource
    ts: TransitionSystem

    def eval(self, state: str, info: Hashable) -> int | float:
        raise NotImplementedError


class LandmarkHeuristic(DynamicHeuristic):
    """Sum of the label costs of a state's known landmarks (0 if unknown)."""

    def __init__(self, ts: TransitionSystem, initial_landmarks: frozenset[str]):
        self.ts = ts
        self.initial_landmarks = frozenset(initial_landmarks)
        self.source = progression_to_information(landmark_source(self.initial_landmarks), ts)

    def eval(self, state: str, info: StateMap) -> int:
        if state not in info:
            return 0
        return sum(self.ts.label_cost[label] for label in info[state])


def label_landmarks(ts: TransitionSystem, state: str | None = None) -> frozenset[str]:
    """Labels that occur in every solution for ``state`` (default: init).

    Computed exactly: a label is a landmark iff removing all transitions
    carrying it makes the state unsolvable.  For an unsolvable state every
    label is vacuously a landmark.
    """
    state = ts.init if state is None else state
    result = []
    base_hstar = oracle.hstar_all(ts)
    if base_hstar[state] == INF:
        return frozenset(ts.labels)
    for label in ts.labels:
        pruned = TransitionSystem(
            states=ts.states,
            labels=ts.labels,
            label_cost=ts.label_cost,
            transitions=tuple(t for t in ts.transitions if t.label != label),
            init=ts.init,
            goals=ts.goals,
        )
        if oracle.hstar_all(pruned)[state] == INF:
            result.append(label)
    return frozenset(result)


def hlm(ts: TransitionSystem, initial_landmarks: frozenset[str] | None = None) -> LandmarkHeuristic:
    """Landmark-sum heuristic; initial landmarks default to the true label
    landmarks of the initial state, which makes it dyn-admissible."""
    if initial_landmarks is None:
        initial_landmarks = label_landmarks(ts)
    return LandmarkHeuristic(ts, initial_landmarks)


class LazyHeuristic(DynamicHeuristic):
    """Evaluates with the cheap table until a state is refined to accurate."""

    def __init__(
        self,
        cheap: Mapping[str, int | float],
        accurate: Mapping[str, int | float],
        ts: TransitionSystem,
    ):
        missing = [s for s in ts.states if s not in cheap or s not in accurate]
        if missing:
            raise ValueError(f"tables must cover all states, missing {missing}")
        self.ts = ts
        self.cheap = {s: ensure_cost(cheap[s], f"cheap[{s}]") for s in ts.states}
        self.accurate = {s: ensure_cost(accurate[s], f"accurate[{s}]") for s in ts.states}
        self.source = LazySource(ts)

    def eval(self, state: str, info: StateMap) -> int | float:
        table = self.cheap if info[state] == LazySource.CHEAP else self.accurate
        return table[state]


def lazy_heuristic(
    cheap: Mapping[str, int | float],
    accurate: Mapping[str, int | float],
    ts: TransitionSystem,
) -> LazyHeuristic:
    return LazyHeuristic(cheap, accurate, ts)


class StaticHeuristic(DynamicHeuristic):
    """A fixed table over the constant information source."""

    def __init__(self, table: Mapping[str, int | float], ts: TransitionSystem):
        missing = [s for s in ts.states if s not in table]
        if missing:
            raise ValueError(f"table must cover all states, missing {missing}")
        self.ts = ts
        self.table = {s: ensure_cost(table[s], f"table[{s}]") for s in ts.states}
        self.source = ConstantSource()

    def eval(self, state: str, info: Hashable) -> int | float:
        return self.table[state]


def static_adapter(table: Mapping[str, int | float], ts: TransitionSystem) -> StaticHeuristic:
    return StaticHeuristic(table, ts)


class ScriptedHeuristic(DynamicHeuristic):
    """Reads the per-state value stored in a scripted source's objects."""

    def __init__(self, source: ScriptedSource):
        self.ts = source.ts
        self.source = source

    def eval(self, state: str, info: StateMap) -> int | float:
        return info[state]


def scripted_heuristic(source: ScriptedSource) -> ScriptedHeuristic:
    return ScriptedHeuristic(source)


def _mix(*parts: Any) -> int:
    """Stable 64-bit seed from arbitrary repr-able parts (process-independent)."""
    digest = hashlib.blake2b(repr(parts).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


class AdmissibleOnlySource(InformationSource):
    """Per-state values in [0, h*] raised (never above h*) on refine events."""

    def __init__(self, ts: TransitionSystem, seed: int):
        self.ts = ts
        self.seed = seed
        self.hstar = oracle.hstar_all(ts)
        values = {}
        for s in ts.states:
            bound = self.hstar[s]
            if bound == INF:
                values[s] = INF
            else:
                values[s] = random.Random(_mix(seed, "init", s)).randint(0, bound)
        self._initial = StateMap(values)

    def initial(self) -> StateMap:
        return self._initial

    def update(self, info: StateMap, transition: Transition) -> StateMap:
        return info

    def refine(self, info: StateMap, state: str) -> StateMap:
        bound = self.hstar[state]
        current = info[state]
        if bound == INF or current >= bound:
            return info
        step = random.Random(_mix(self.seed, "refine", state, current)).randint(0, 2)
        raised = min(bound, current + step)
        if raised == current:
            return info
        return info.set(state, raised)


class AdmissibleOnlyHeuristic(DynamicHeuristic):
    """dyn-admissible, dyn-monotonic and dyn-safe, generally not dyn-consistent."""

    def __init__(self, ts: TransitionSystem, seed: int):
        self.ts = ts
        self.source = AdmissibleOnlySource(ts, seed)

    def eval(self, state: str, info: StateMap) -> int | float:
        return info[state]


class ShrinkingSlackSource(InformationSource):
    """A single global slack value that shrinks by one on each refine."""

    def __init__(self, initial_slack: int):
        self._initial = initial_slack

    def initial(self) -> int:
        return self._initial

    def update(self, info: int, transition: Transition) -> int:
        return info

    def refine(self, info: int, state: str) -> int:
        return max(0, info - 1)


class ConsistentMonotoneHeuristic(DynamicHeuristic):
    """h*(s) minus a shrinking global slack, clamped at 0.

    Uniform subtraction clamped at zero preserves the consistency of h*, so
    this family is dyn-admissible, dyn-consistent and dyn-monotonic by
    construction (and equals h* once the slack hits 0).
    """

    def __init__(self, ts: TransitionSystem, seed: int, initial_slack: int | None = None):
        self.ts = ts
        self.hstar = oracle.hstar_all(ts)
        if initial_slack is None:
            finite = [c for c in self.hstar.values() if c != INF]
            cap = max(finite) if finite else 0
            initial_slack = random.Random(_mix(seed, "slack")).randint(0, cap + 2)
        self.source = ShrinkingSlackSource(initial_slack)

    def eval(self, state: str, info: int) -> int | float:
        if self.hstar[state] == INF:
            return INF
        return max(0, self.hstar[state] - info)


def oracle_family(
    ts: TransitionSystem,
    flavor: str,
    seed: int,
    initial_slack: int | None = None,
) -> DynamicHeuristic:
    """Seeded heuristic families with properties known by construction."""
    if flavor == "admissible-only":
        return AdmissibleOnlyHeuristic(ts, seed)
    if flavor == "consistent-monotone":
        return ConsistentMonotoneHeuristic(ts, seed, initial_slack)
    raise ValueError(f"unknown flavor {flavor!r}")


@dataclass(frozen=True)
class Violation:
    """One violated inequality: lhs <= rhs was expected but lhs > rhs."""

    events: tuple
    state: str
    lhs: int | float
    rhs: int | float
    transition: Transition | None = None
    other_state: str | None = None
    event: Any = None  # for dyn-monotone: the update/refine that lowered h

    def to_json(self) -> dict:
        doc: dict[str, Any] = {
            "events": [_event_to_json(e) for e in self.events],
            "state": self.state,
            "lhs": cost_to_json(self.lhs),
            "rhs": cost_to_json(self.rhs),
        }
        if self.transition is not None:
            doc["transition"] = list(self.transition)
        if self.other_state is not None:
            doc["other_state"] = self.other_state
        if self.event is not None:
            doc["event"] = _event_to_json(self.event)
        return doc


def _event_to_json(event) -> Any:
    return list(event) if isinstance(event, Transition) else event


@dataclass(frozen=True)
class PropertyVerdict:
    """Outcome of a bounded property check.

    ``holds`` is "no" with a witness, or "bounded-yes" when no violation was
    found within the enumerated set (the quantifier over all reachable
    information objects is only bounded-tested; "yes" is reserved).  A "no"
    verdict lists every violation found at the first (minimal-witness)
    violating information object; ``witness`` is the first of them in
    deterministic scan order.
    """

    property: str
    holds: str
    depth_bound: int
    infos_checked: int
    witness: Violation | None = None
    violations: tuple[Violation, ...] = ()
    note: str | None = None

    def to_json(self) -> dict:
        doc: dict[str, Any] = {
            "property": self.property,
            "holds": self.holds,
            "depth_bound": self.depth_bound,
            "infos_checked": self.infos_checked,
        }
        if self.witness is not None:
            doc["witness"] = self.witness.to_json()
            doc["violations"] = [v.to_json() for v in self.violations]
        if self.note is not None:
            doc["note"] = self.note
        return doc


def _info_violations(
    ts: TransitionSystem,
    heuristic: DynamicHeuristic,
    prop: str,
    info: Hashable,
    events: tuple,
    hstar: dict,
    pair_distances: dict | None,
) -> list[Violation]:
    """All violations of ``prop`` at one information object, in scan order."""
    found: list[Violation] = []
    h = heuristic.eval
    if prop == "dyn-safe":
        for s in ts.states:
            if h(s, info) == INF and hstar[s] != INF:
                found.append(Violation(events, s, lhs=INF, rhs=hstar[s]))
    elif prop == "dyn-admissible":
        for s in ts.states:
            value = h(s, info)
            if value > hstar[s]:
                found.append(Violation(events, s, lhs=value, rhs=hstar[s]))
    elif prop == "dyn-goal-aware":
        for s in ts.goals:
            value = h(s, info)
            if value != 0:
                found.append(Violation(events, s, lhs=value, rhs=0))
    elif prop == "dyn-consistent":
        for t in ts.transitions:
            lhs = h(t.origin, info)
            rhs = ts.label_cost[t.label] + h(t.target, info)
            if lhs > rhs:
                found.append(Violation(events, t.origin, lhs, rhs, transition=t))
    elif prop == "partial-dyn-consistent":
        assert pair_distances is not None
        defined = [s for s in ts.states if _payload_defined(info, s)]
        for s in defined:
            for s2 in defined:
                d = pair_distances[s][s2]
                if d == INF:
                    continue
                lhs = h(s, info)
                rhs = d + h(s2, info)
                if lhs > rhs:
                    found.append(Violation(events, s, lhs, rhs, other_state=s2))
    elif prop == "dyn-monotone":
        source = heuristic.source
        events_to_try: list = list(ts.transitions) + list(ts.states)
        for event in events_to_try:
            try:
                if isinstance(event, Transition):
                    new_info = source.update(info, event)
                else:
                    new_info = source.refine(info, event)
            except ContractViolation:
                continue  # outside the source's defined domain
            for s in ts.states:
                before = h(s, info)
                after = h(s, new_info)
                if before > after:
                    found.append(Violation(events, s, before, after, event=event))
    else:
        raise ValueError(f"unknown property {prop!r}")
    return found


def _payload_defined(info: Hashable, state: str) -> bool:
    if isinstance(info, Mapping):
        return state in info
    return True  # non-mapping information is treated as total


def check_property(
    ts: TransitionSystem,
    heuristic: DynamicHeuristic,
    prop: str,
    depth_bound: int | None = None,
    max_size: int = 50_000,
) -> PropertyVerdict:
    """Bounded-exhaustively test one dyn-property.

    Enumerates information objects reachable within ``depth_bound`` events
    (only reachable objects are considered, also for partial
    dyn-consistency) and tests the property's inequality over all of them.
    Witnesses are minimal in event-sequence length; among violations at the
    first violating object, states and transitions are scanned in
    declaration order and the first hit becomes the primary witness.
    """
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; expected one of {PROPERTIES}")
    witnesses = reachable_info_witnesses(ts, heuristic.source, depth_bound, max_size)
    effective_bound = (
        depth_bound if depth_bound is not None else len(ts.transitions) + len(ts.states)
    )
    hstar = oracle.hstar_all(ts)
    pair_distances = (
        oracle.all_pairs_distances(ts) if prop == "partial-dyn-consistent" else None
    )
    # BFS insertion order = shortest witness first; ties stay in exploration
    # order, which is itself deterministic.
    ordered = sorted(witnesses.items(), key=lambda kv: len(kv[1]))
    for info, events in ordered:
        violations = _info_violations(ts, heuristic, prop, info, events, hstar, pair_distances)
        if violations:
            return PropertyVerdict(
                property=prop,
                holds="no",
                depth_bound=effective_bound,
                infos_checked=len(witnesses),
                witness=violations[0],
                violations=tuple(violations),
            )
    note = None
    if prop == "partial-dyn-consistent":
        note = "tested over reachable information objects only"
    return PropertyVerdict(
        property=prop,
        holds="bounded-yes",
        depth_bound=effective_bound,
        infos_checked=len(witnesses),
        note=note,
    )
