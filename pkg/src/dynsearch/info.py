"""Information sources and the objects they evolve.

An information source owns an opaque information object and three entry
points: an initial object, ``update`` along a transition, and ``refine`` on a
state.  Objects are immutable values with content-based equality, which is
what makes reachable-set enumeration, deduplication and trace replay safe.

Progression sources keep one payload per state (initial payload, progress
along a transition, merge on rediscovery) and lift to information sources
whose refine is the identity.  The parent source tracks g-values and parent
pointers this way; solution paths are read back out of it.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Mapping
from typing import Any, Hashable, Iterable, Iterator

from .transition_system import Path, Transition, TransitionSystem

UNDEF = None  # parent pointer of the initial state's payload


class ContractViolation(RuntimeError):
    """An information source was driven outside its defined domain."""


class EnumerationOverflow(RuntimeError):
    """Reachable-information enumeration exceeded its size cap."""


class StateMap(Mapping):
    """Immutable partial map from state ids to per-state payloads.

    Equality is content-based and hashing is order-independent, so two maps
    produced by different event orders compare equal when they store the
    same bindings.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, items: Mapping[str, Any] | Iterable[tuple[str, Any]] = ()):
        self._items = dict(items)
        self._hash: int | None = None

    def __getitem__(self, key: str) -> Any:
        return self._items[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def set(self, key: str, value: Any) -> "StateMap":
        new = dict(self._items)
        new[key] = value
        return StateMap(new)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, StateMap):
            return self._items == other._items
        if isinstance(other, Mapping):
            return self._items == dict(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._items.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {v!r}" for k, v in sorted(self._items.items()))
        return f"StateMap({{{inner}}})"


class InformationSource:
    """Behavioral record: initial object plus pure update/refine."""

    def initial(self) -> Hashable:
        raise NotImplementedError

    def update(self, info: Hashable, transition: Transition) -> Hashable:
        raise NotImplementedError

    def refine(self, info: Hashable, state: str) -> Hashable:
        raise NotImplementedError


class ProgressionSource:
    """Per-state payload semantics: initial value, progress, merge."""

    def initial_state_info(self) -> Hashable:
        raise NotImplementedError

    def progress(self, payload: Hashable, transition: Transition) -> Hashable:
        raise NotImplementedError

    def merge(self, a: Hashable, b: Hashable) -> Hashable:
        raise NotImplementedError


class ProgressionInformationSource(InformationSource):
    """Lift a progression source to an information source.

    Information objects are partial maps state -> payload.  ``update`` along
    ``(s, l, s')`` rebinds only ``s'``, to the progressed payload or to the
    merge of the progressed payload (first merge argument) with the existing
    one.  ``refine`` is the identity.  Updating along a transition whose
    origin has no payload is a contract violation: the search algorithms
    never produce it, so an occurrence indicates a bug in the caller.
    """

    def __init__(self, progression: ProgressionSource, ts: TransitionSystem):
        self.progression = progression
        self.ts = ts

    def initial(self) -> StateMap:
        return StateMap({self.ts.init: self.progression.initial_state_info()})

    def update(self, info: StateMap, transition: Transition) -> StateMap:
        origin, _, target = transition
        if origin not in info:
            raise ContractViolation(
                f"update along {transition} but {origin!r} has no payload"
            )
        progressed = self.progression.progress(info[origin], transition)
        if target in info:
            progressed = self.progression.merge(progressed, info[target])
        return info.set(target, progressed)

    def refine(self, info: StateMap, state: str) -> StateMap:
        return info


def progression_to_information(
    progression: ProgressionSource, ts: TransitionSystem
) -> ProgressionInformationSource:
    return ProgressionInformationSource(progression, ts)


class ParentSource(ProgressionSource):
    """g-values and parent pointers as a progression source.

    Payloads are ``(g, transition-or-UNDEF)``.  Merge keeps the pair with the
    smaller g and prefers its first argument on ties; in a lifted update the
    first argument is the freshly progressed pair, so an equal-cost
    rediscovery switches the parent pointer to the new transition.
    """

    def __init__(self, ts: TransitionSystem):
        self.ts = ts

    def initial_state_info(self) -> tuple[int, None]:
        return (0, UNDEF)

    def progress(
        self, payload: tuple[int, Transition | None], transition: Transition
    ) -> tuple[int, Transition]:
        g, _ = payload
        return (g + self.ts.label_cost[transition.label], transition)

    def merge(
        self,
        a: tuple[int, Transition | None],
        b: tuple[int, Transition | None],
    ) -> tuple[int, Transition | None]:
        return a if a[0] <= b[0] else b


def parent_source(ts: TransitionSystem) -> ParentSource:
    return ParentSource(ts)


def extract_path(info: StateMap, state: str) -> Path:
    """Follow parent pointers from ``state`` back to UNDEF.

    The stored g bounds the path cost from above.  A dangling or cyclic
    pointer chain is reported as a contract violation.  Note that the
    equal-g merge rule (the freshly progressed pair wins ties) lets a
    zero-cost cycle redirect pointers into a loop; with strictly positive
    label costs the stored g decreases along every chain, so chains always
    terminate.
    """
    if state not in info:
        raise ContractViolation(f"no payload stored for {state!r}")
    path: list[Transition] = []
    current = state
    for _ in range(len(info) + 1):
        _, pointer = info[current]
        if pointer is UNDEF:
            return tuple(reversed(path))
        path.append(pointer)
        current = pointer.origin
        if current not in info:
            raise ContractViolation(f"dangling parent pointer at {pointer}")
    raise ContractViolation(f"cyclic parent pointers reached from {state!r}")


class LandmarkSource(ProgressionSource):
    """Label landmarks: progress drops the taken label, merge is union."""

    def __init__(self, initial_landmarks: Iterable[str]):
        self._initial = frozenset(initial_landmarks)

    def initial_state_info(self) -> frozenset[str]:
        return self._initial

    def progress(self, payload: frozenset[str], transition: Transition) -> frozenset[str]:
        return payload - {transition.label}

    def merge(self, a: frozenset[str], b: frozenset[str]) -> frozenset[str]:
        return a | b


def landmark_source(initial_landmarks: Iterable[str]) -> LandmarkSource:
    return LandmarkSource(initial_landmarks)


class LazySource(InformationSource):
    """Tracks which of two heuristics a state should be evaluated with.

    Every state starts at "C" (cheap); refining a state switches it to "A"
    (accurate).  Updates do not touch the information.
    """

    CHEAP = "C"
    ACCURATE = "A"

    def __init__(self, ts: TransitionSystem):
        self.ts = ts

    def initial(self) -> StateMap:
        return StateMap({s: self.CHEAP for s in self.ts.states})

    def update(self, info: StateMap, transition: Transition) -> StateMap:
        return info

    def refine(self, info: StateMap, state: str) -> StateMap:
        if info[state] == self.ACCURATE:
            return info
        return info.set(state, self.ACCURATE)


def lazy_source(ts: TransitionSystem) -> LazySource:
    return LazySource(ts)


class ScriptedSource(InformationSource):
    """Per-state heuristic values raised by transition-keyed triggers.

    ``triggers`` maps a transition triple to ``(state, value)``; updating
    along a triggering transition raises that state's stored value to at
    least ``value`` (never lowers it, so the source is monotonic even when a
    trigger fires repeatedly).  ``refine`` is the identity.
    """

    def __init__(
        self,
        ts: TransitionSystem,
        triggers: Mapping[Transition, tuple[str, int]],
        initial_values: Mapping[str, int] | None = None,
    ):
        self.ts = ts
        self.triggers = {Transition(*k): v for k, v in triggers.items()}
        values = dict(initial_values or {})
        self._initial = StateMap({s: values.get(s, 0) for s in ts.states})

    def initial(self) -> StateMap:
        return self._initial

    def update(self, info: StateMap, transition: Transition) -> StateMap:
        hit = self.triggers.get(transition)
        if hit is None:
            return info
        state, value = hit
        if info[state] >= value:
            return info
        return info.set(state, value)

    def refine(self, info: StateMap, state: str) -> StateMap:
        return info


def scripted_source(
    ts: TransitionSystem,
    triggers: Mapping[Transition, tuple[str, int]],
    initial_values: Mapping[str, int] | None = None,
) -> ScriptedSource:
    return ScriptedSource(ts, triggers, initial_values)


class ConstantSource(InformationSource):
    """The trivial source: update and refine do not modify the information."""

    def initial(self) -> None:
        return None

    def update(self, info: None, transition: Transition) -> None:
        return info

    def refine(self, info: None, state: str) -> None:
        return info


class _MaxWrappedSource(InformationSource):
    """Pairs an inner information object with per-state running h-maxima."""

    def __init__(self, heuristic, inner: InformationSource, ts: TransitionSystem):
        self.heuristic = heuristic
        self.inner = inner
        self.ts = ts

    def _maxima_for(self, inner_info: Hashable, old: StateMap | None) -> StateMap:
        values = {}
        for s in self.ts.states:
            current = self.heuristic.eval(s, inner_info)
            if old is not None and old[s] > current:
                current = old[s]
            values[s] = current
        return StateMap(values)

    def initial(self) -> tuple[Hashable, StateMap]:
        inner_info = self.inner.initial()
        return (inner_info, self._maxima_for(inner_info, None))

    def update(self, info: tuple[Hashable, StateMap], transition: Transition):
        inner_info, maxima = info
        new_inner = self.inner.update(inner_info, transition)
        return (new_inner, self._maxima_for(new_inner, maxima))

    def refine(self, info: tuple[Hashable, StateMap], state: str):
        inner_info, maxima = info
        new_inner = self.inner.refine(inner_info, state)
        return (new_inner, self._maxima_for(new_inner, maxima))


class _MaxWrappedHeuristic:
    """Returns the larger of the inner value and the recorded maximum."""

    def __init__(self, inner_heuristic, source: _MaxWrappedSource):
        self.inner = inner_heuristic
        self.source = source

    def eval(self, state: str, info: tuple[Hashable, StateMap]) -> int | float:
        inner_info, maxima = info
        return max(self.inner.eval(state, inner_info), maxima[state])


def monotonic_wrap(heuristic, source: InformationSource | None = None):
    """Make any dynamic heuristic dyn-monotonic by running per-state maxima.

    Returns ``(wrapped_heuristic, wrapped_source)``.  The wrapped information
    object carries the inner object plus the highest value observed so far
    for every state, so values can never decrease across update or refine.
    """
    inner_source = source if source is not None else heuristic.source
    ts = getattr(inner_source, "ts", None) or heuristic.ts
    wrapped_source = _MaxWrappedSource(heuristic, inner_source, ts)
    wrapped = _MaxWrappedHeuristic(heuristic, wrapped_source)
    return wrapped, wrapped_source


# An event is either a state id (refine) or a Transition (update).
Event = str | Transition


def apply_event(src: InformationSource, info: Hashable, event) -> Hashable:
    if isinstance(event, Transition):
        return src.update(info, event)
    return src.refine(info, event)


def validate_witness(
    ts: TransitionSystem,
    src: InformationSource,
    events: Iterable,
    expected: Hashable | None = None,
) -> Hashable:
    """Replay an event sequence and enforce the expansion discipline.

    Refined states and update origins must be the initial state or the
    target of an earlier update in the sequence.  Returns the final
    information object; if ``expected`` is given it must compare equal.
    """
    known = {ts.init}
    info = src.initial()
    for event in events:
        if isinstance(event, Transition):
            if event.origin not in known:
                raise ContractViolation(
                    f"update along {event} but origin is not init or an earlier target"
                )
            info = src.update(info, event)
            known.add(event.target)
        else:
            if event not in known:
                raise ContractViolation(
                    f"refine on {event!r} which is not init or an earlier target"
                )
            info = src.refine(info, event)
    if expected is not None and info != expected:
        raise ContractViolation("witness does not reproduce the expected information")
    return info


def reachable_info_witnesses(
    ts: TransitionSystem,
    src: InformationSource,
    depth_bound: int | None = None,
    max_size: int = 50_000,
) -> dict[Hashable, tuple]:
    """Breadth-first closure of the reachable-information event system.

    Maps every information object discovered within ``depth_bound`` events
    per branch to a shortest witness event sequence.  Branches are tracked
    as (information, known-states) pairs: a refine on a state or an update
    from an origin is only applied once the state is the initial state or
    the target of an earlier update on that branch.  Deduplication is by
    object equality.  Raises EnumerationOverflow beyond ``max_size`` pairs.
    """
    if depth_bound is None:
        depth_bound = len(ts.transitions) + len(ts.states)
    initial = src.initial()
    initial_known = frozenset({ts.init})
    queue = deque([(initial, initial_known, 0, ())])
    visited = {(initial, initial_known)}
    witnesses: dict[Hashable, tuple] = {initial: ()}
    while queue:
        info, known, depth, events = queue.popleft()
        if depth >= depth_bound:
            continue
        candidates: list = [t for t in ts.transitions if t.origin in known]
        candidates.extend(s for s in ts.states if s in known)
        for event in candidates:
            new_info = apply_event(src, info, event)
            new_known = known | {event.target} if isinstance(event, Transition) else known
            node = (new_info, new_known)
            if node in visited:
                continue
            visited.add(node)
            if len(visited) > max_size:
                raise EnumerationOverflow(
                    f"more than {max_size} reachable (information, known) pairs"
                )
            new_events = events + (event,)
            if new_info not in witnesses:
                witnesses[new_info] = new_events
            queue.append((new_info, new_known, depth + 1, new_events))
    return witnesses


def enumerate_reachable_infos(
    ts: TransitionSystem,
    src: InformationSource,
    depth_bound: int | None = None,
    max_size: int = 50_000,
) -> set:
    """The set of information objects reachable within the depth bound."""
    return set(reachable_info_witnesses(ts, src, depth_bound, max_size))
