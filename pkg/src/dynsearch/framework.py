"""Generic dynamic-heuristic search framework.

An executable model of the nondeterministic forward-search loop: a state of
the run holds one information object per source plus the set of known
states, and at every step exactly one applicable operation is chosen and
applied.  The "choose" points are a policy interface receiving the full
applicable set, which is what makes the soundness and completeness
guarantees mechanically testable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable, Hashable, Iterable, Sequence

from .info import InformationSource
from .transition_system import Transition, TransitionSystem

SOLVABLE = "solvable"
UNSOLVABLE = "unsolvable"
STEP_LIMIT = "step_limit"


class InapplicableOperation(ValueError):
    """An operation whose guard does not hold was applied."""


@dataclass(frozen=True)
class GenUnknown:
    transition: Transition

    def sort_key(self) -> tuple:
        return (0, tuple(self.transition))


@dataclass(frozen=True)
class GenKnown:
    transition: Transition

    def sort_key(self) -> tuple:
        return (1, tuple(self.transition))


@dataclass(frozen=True)
class Refine:
    state: str

    def sort_key(self) -> tuple:
        return (2, self.state)


@dataclass(frozen=True)
class DeclareSolvable:
    def sort_key(self) -> tuple:
        return (3,)


@dataclass(frozen=True)
class DeclareUnsolvable:
    def sort_key(self) -> tuple:
        return (4,)


FrameworkOperation = GenUnknown | GenKnown | Refine | DeclareSolvable | DeclareUnsolvable


def sorted_operations(ops: Iterable[FrameworkOperation]) -> list[FrameworkOperation]:
    return sorted(ops, key=lambda op: op.sort_key())


@dataclass(frozen=True)
class FrameworkState:
    """One point of a framework run; immutable, operations return new states."""

    ts: TransitionSystem
    sources: tuple[InformationSource, ...]
    infos: tuple[Hashable, ...]
    known: frozenset[str]
    finished: str | None = None

    @classmethod
    def initial(cls, ts: TransitionSystem, sources: Sequence[InformationSource]) -> "FrameworkState":
        sources = tuple(sources)
        return cls(
            ts=ts,
            sources=sources,
            infos=tuple(src.initial() for src in sources),
            known=frozenset({ts.init}),
        )

    def goal_known(self) -> bool:
        return any(self.ts.is_goal(s) for s in self.known)

    def frontier_transitions(self) -> list[Transition]:
        return [
            t for t in self.ts.transitions
            if t.origin in self.known and t.target not in self.known
        ]


def applicable_operations(state: FrameworkState, ts: TransitionSystem) -> set[FrameworkOperation]:
    """Exactly the operations whose guards hold; never empty."""
    if state.finished is not None:
        raise InapplicableOperation("run already finished")
    ops: set[FrameworkOperation] = set()
    leaving = False
    for t in ts.transitions:
        if t.origin in state.known:
            if t.target in state.known:
                ops.add(GenKnown(t))
            else:
                ops.add(GenUnknown(t))
                leaving = True
    for s in ts.states:
        if s in state.known:
            ops.add(Refine(s))
    if state.goal_known():
        ops.add(DeclareSolvable())
    elif not leaving:
        ops.add(DeclareUnsolvable())
    return ops


def apply_operation(state: FrameworkState, op: FrameworkOperation) -> FrameworkState:
    """Apply one operation, re-checking its guard first."""
    if state.finished is not None:
        raise InapplicableOperation("run already finished")
    if isinstance(op, GenUnknown):
        t = op.transition
        if t.origin not in state.known or t.target in state.known:
            raise InapplicableOperation(f"GenUnknown guard fails for {t}")
        infos = tuple(
            src.update(info, t) for src, info in zip(state.sources, state.infos)
        )
        return replace(state, infos=infos, known=state.known | {t.target})
    if isinstance(op, GenKnown):
        t = op.transition
        if t.origin not in state.known or t.target not in state.known:
            raise InapplicableOperation(f"GenKnown guard fails for {t}")
        infos = tuple(
            src.update(info, t) for src, info in zip(state.sources, state.infos)
        )
        return replace(state, infos=infos)
    if isinstance(op, Refine):
        if op.state not in state.known:
            raise InapplicableOperation(f"Refine guard fails for {op.state!r}")
        infos = tuple(
            src.refine(info, op.state) for src, info in zip(state.sources, state.infos)
        )
        return replace(state, infos=infos)
    if isinstance(op, DeclareSolvable):
        if not state.goal_known():
            raise InapplicableOperation("DeclareSolvable: no goal state is known")
        return replace(state, finished=SOLVABLE)
    if isinstance(op, DeclareUnsolvable):
        if state.goal_known():
            raise InapplicableOperation("DeclareUnsolvable: a goal state is known")
        if state.frontier_transitions():
            raise InapplicableOperation("DeclareUnsolvable: a transition leaves the known set")
        return replace(state, finished=UNSOLVABLE)
    raise InapplicableOperation(f"unknown operation {op!r}")


Policy = Callable[[FrameworkState, set], FrameworkOperation]


class RandomPolicy:
    """Seeded uniform-random choice with decaying Refine/GenKnown weight.

    GenKnown and Refine can in principle loop forever; decaying their weight
    geometrically per step keeps every run finite in practice, which is the
    finiteness hypothesis the completeness theorem needs.
    """

    def __init__(self, seed: int, loop_weight: float = 2.0, decay: float = 0.9):
        self.rng = random.Random(seed)
        self.loop_weight = loop_weight
        self.decay = decay
        self.step = 0

    def __call__(self, state: FrameworkState, ops: set) -> FrameworkOperation:
        ordered = sorted_operations(ops)
        w = self.loop_weight * (self.decay ** self.step)
        self.step += 1
        weights = [w if isinstance(op, (GenKnown, Refine)) else 1.0 for op in ordered]
        return self.rng.choices(ordered, weights=weights, k=1)[0]


class GenUnknownFirstPolicy:
    """Deterministic BFS-like policy: always take the first frontier
    transition, declare as soon as nothing is left to generate."""

    def __call__(self, state: FrameworkState, ops: set) -> FrameworkOperation:
        for op in sorted_operations(ops):
            if isinstance(op, (GenUnknown, DeclareSolvable, DeclareUnsolvable)):
                return op
        raise InapplicableOperation("no progress operation applicable")


class ScriptedPolicy:
    """Replays a fixed operation list."""

    def __init__(self, operations: Sequence[FrameworkOperation]):
        self.pending = list(operations)

    def __call__(self, state: FrameworkState, ops: set) -> FrameworkOperation:
        if not self.pending:
            raise InapplicableOperation("scripted policy ran out of operations")
        return self.pending.pop(0)


@dataclass(frozen=True)
class FrameworkRun:
    """Result of driving a policy: outcome plus the applied-operation log."""

    result: str  # SOLVABLE | UNSOLVABLE | STEP_LIMIT
    operations: tuple[FrameworkOperation, ...]
    final_state: FrameworkState


def run_policy(
    ts: TransitionSystem,
    sources: Sequence[InformationSource],
    policy: Policy,
    step_limit: int,
) -> FrameworkRun:
    """Drive the framework loop until a declaration or the step limit."""
    state = FrameworkState.initial(ts, sources)
    log: list[FrameworkOperation] = []
    for _ in range(step_limit):
        ops = applicable_operations(state, ts)
        op = policy(state, ops)
        if op not in ops:
            raise InapplicableOperation(f"policy chose inapplicable operation {op!r}")
        state = apply_operation(state, op)
        log.append(op)
        if state.finished is not None:
            return FrameworkRun(state.finished, tuple(log), state)
    return FrameworkRun(STEP_LIMIT, tuple(log), state)


def operation_events(operations: Iterable[FrameworkOperation]) -> list:
    """Project an operation log to the update/refine event sequence it drove."""
    events = []
    for op in operations:
        if isinstance(op, (GenUnknown, GenKnown)):
            events.append(op.transition)
        elif isinstance(op, Refine):
            events.append(op.state)
    return events
