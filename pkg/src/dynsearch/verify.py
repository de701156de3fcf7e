"""Post-hoc checks of search-run guarantees against concrete traces.

The checkers are premise-agnostic scanners: they report whether a run
satisfied optimality, non-decreasing popped f-values, zero reopening and
optimal-g expansion, without asking which properties the heuristic had.
Premise verification is the property checkers' job; keeping the two apart is
what lets the suite also exhibit runs where a dropped premise breaks the
conclusion.  All comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from . import oracle
from .costs import INF, cost_to_json
from .dynastar import (
    Expand,
    Insert,
    OpenEntry,
    Pop,
    SearchResult,
    TraceEvent,
    SOLUTION,
    UNSOLVABLE,
)
from .transition_system import TransitionSystem


@dataclass(frozen=True)
class TheoremReport:
    theorem: str
    holds: bool
    violation: dict | None = None
    context: str | None = None

    def to_json(self) -> dict:
        doc: dict[str, Any] = {"theorem": self.theorem, "holds": self.holds}
        if self.violation is not None:
            doc["violation"] = self.violation
        if self.context is not None:
            doc["context"] = self.context
        return doc


def assert_optimal(
    result: SearchResult, ts: TransitionSystem, context: str | None = None
) -> TheoremReport:
    """Solution cost must equal the oracle's; unsolvable must mean cost INF."""
    if result.outcome not in (SOLUTION, UNSOLVABLE):
        raise ValueError(f"expected a finished result, got {result.outcome!r}")
    expected = oracle.optimal_solution_cost(ts)
    if result.outcome == SOLUTION:
        holds = result.cost == expected
        actual = result.cost
    else:
        holds = expected == INF
        actual = INF
    violation = None
    if not holds:
        violation = {
            "expected": cost_to_json(expected),
            "actual": cost_to_json(actual),
            "outcome": result.outcome,
        }
    return TheoremReport("optimality", holds, violation, context)


def _pops(trace: Iterable[TraceEvent | dict]) -> list[tuple[int, int, int]]:
    """(event index, g, h) of every pop, accepting live or deserialized traces."""
    out = []
    for idx, event in enumerate(trace):
        if isinstance(event, Pop):
            out.append((idx, event.entry.g, event.entry.h))
        elif isinstance(event, dict) and event.get("event") == "pop":
            out.append((idx, event["g"], event["h"]))
    return out


def popped_f_nondecreasing(
    trace: Sequence[TraceEvent | dict], context: str | None = None
) -> TheoremReport:
    """The f = g + h sequence of popped entries must never strictly decrease."""
    previous: int | None = None
    previous_idx = -1
    for idx, g, h in _pops(trace):
        f = g + h
        if previous is not None and f < previous:
            return TheoremReport(
                "monotonic-popped-f",
                False,
                {
                    "event_index": idx,
                    "f": f,
                    "previous_f": previous,
                    "previous_event_index": previous_idx,
                },
                context,
            )
        previous, previous_idx = f, idx
    return TheoremReport("monotonic-popped-f", True, None, context)


def reopen_count(trace: Sequence[TraceEvent | dict]) -> int:
    count = 0
    for event in trace:
        kind = event.kind if isinstance(event, TraceEvent) else event.get("event")
        if kind == "reopen":
            count += 1
    return count


def optex(
    trace: Sequence[TraceEvent | dict],
    ts: TransitionSystem,
    context: str | None = None,
) -> TheoremReport:
    """Every expansion must happen at the state's optimal g-value."""
    gstar = oracle.gstar_all(ts)
    for idx, event in enumerate(trace):
        if isinstance(event, Expand):
            state, g = event.state, event.g
        elif isinstance(event, dict) and event.get("event") == "expand":
            state, g = event["state"], event["g"]
        else:
            continue
        if g != gstar[state]:
            return TheoremReport(
                "optex",
                False,
                {
                    "event_index": idx,
                    "state": state,
                    "g": g,
                    "g_star": cost_to_json(gstar[state]),
                },
                context,
            )
    return TheoremReport("optex", True, None, context)


def open_entries_after(trace: Sequence[TraceEvent], index: int) -> list[OpenEntry]:
    """Reconstruct the open-list multiset right after ``trace[index]``.

    Pops remove their entry whether or not a duplicate drop follows, so the
    queue content is exactly inserts minus pops.
    """
    entries: list[OpenEntry] = []
    for event in trace[: index + 1]:
        if isinstance(event, Insert):
            entries.append(event.entry)
        elif isinstance(event, Pop):
            entries.remove(event.entry)
    return entries
