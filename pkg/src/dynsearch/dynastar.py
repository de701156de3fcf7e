"""A* with dynamic heuristics, delayed duplicate detection and re-evaluation.

The search keeps two information objects: the parent source (g-values and
parent pointers, from which solutions are extracted) and the heuristic's own
source.  Open-list entries freeze g and h at insertion time; multiple
entries per state are allowed and stale ones are dropped when popped.  With
``reeval`` enabled, a popped state whose current heuristic value exceeds its
entry's value is re-inserted instead of expanded.

Every run emits a replayable trace.  Times are (iteration, step) pairs
ordered lexicographically; the iteration counter advances at each pop and
the step counter after the pop-refine and after each successor update, so an
event's timestamp names the information version current when it was emitted.

Tie-breaking on the open list (unspecified by the algorithm itself) is
pinned to: f ascending, then h ascending, then insertion order.  The
``reopen`` flag exists only to demonstrate what goes wrong without
reopening; switching it off is non-conforming and skips the cheaper-path
reinsertion for closed states entirely.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import ClassVar, TextIO

from .costs import INF, cost_to_json
from .heuristics import DynamicHeuristic
from .info import extract_path, parent_source, progression_to_information
from .transition_system import Path, Transition, TransitionSystem, path_cost

SOLUTION = "solution"
UNSOLVABLE = "unsolvable"
STEP_LIMIT = "step_limit"

Time = tuple[int, int]  # (iteration, step), lexicographic order


@dataclass(frozen=True)
class OpenEntry:
    state: str
    g: int
    h: int
    seq: int  # global insertion counter; last tie-break key

    @property
    def f(self) -> int:
        return self.g + self.h


@dataclass(frozen=True)
class TraceEvent:
    t: Time

    kind: ClassVar[str] = "event"

    def to_json(self) -> dict:
        return {"t": list(self.t), "event": self.kind}


@dataclass(frozen=True)
class Insert(TraceEvent):
    entry: OpenEntry
    reason: str  # initial | new | cheaper | reeval

    kind: ClassVar[str] = "insert"

    def to_json(self) -> dict:
        return {
            **super().to_json(),
            "state": self.entry.state,
            "g": self.entry.g,
            "h": self.entry.h,
            "seq": self.entry.seq,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class Pop(TraceEvent):
    entry: OpenEntry

    kind: ClassVar[str] = "pop"

    def to_json(self) -> dict:
        return {
            **super().to_json(),
            "state": self.entry.state,
            "g": self.entry.g,
            "h": self.entry.h,
            "seq": self.entry.seq,
        }


@dataclass(frozen=True)
class DuplicateDrop(TraceEvent):
    entry: OpenEntry

    kind: ClassVar[str] = "duplicate_drop"

    def to_json(self) -> dict:
        return {
            **super().to_json(),
            "state": self.entry.state,
            "g": self.entry.g,
            "h": self.entry.h,
            "seq": self.entry.seq,
        }


@dataclass(frozen=True)
class Reevaluate(TraceEvent):
    state: str
    old_h: int
    new_h: int | float

    kind: ClassVar[str] = "reevaluate"

    def to_json(self) -> dict:
        return {
            **super().to_json(),
            "state": self.state,
            "old_h": self.old_h,
            "new_h": cost_to_json(self.new_h),
        }


@dataclass(frozen=True)
class Close(TraceEvent):
    state: str

    kind: ClassVar[str] = "close"

    def to_json(self) -> dict:
        return {**super().to_json(), "state": self.state}


@dataclass(frozen=True)
class Reopen(TraceEvent):
    state: str
    old_g: int
    new_g: int

    kind: ClassVar[str] = "reopen"

    def to_json(self) -> dict:
        return {
            **super().to_json(),
            "state": self.state,
            "old_g": self.old_g,
            "new_g": self.new_g,
        }


@dataclass(frozen=True)
class Expand(TraceEvent):
    state: str
    g: int
    h: int

    kind: ClassVar[str] = "expand"

    def to_json(self) -> dict:
        return {**super().to_json(), "state": self.state, "g": self.g, "h": self.h}


@dataclass(frozen=True)
class Update(TraceEvent):
    transition: Transition

    kind: ClassVar[str] = "update"

    def to_json(self) -> dict:
        return {**super().to_json(), "transition": list(self.transition)}


@dataclass(frozen=True)
class Refine(TraceEvent):
    state: str

    kind: ClassVar[str] = "refine"

    def to_json(self) -> dict:
        return {**super().to_json(), "state": self.state}


@dataclass(frozen=True)
class Prune(TraceEvent):
    state: str
    where: str  # initial | reeval | successor

    kind: ClassVar[str] = "prune"

    def to_json(self) -> dict:
        return {**super().to_json(), "state": self.state, "where": self.where}


@dataclass(frozen=True)
class Return(TraceEvent):
    outcome: str
    cost: int | float | None = None
    path: Path | None = None

    kind: ClassVar[str] = "return"

    def to_json(self) -> dict:
        doc = {**super().to_json(), "outcome": self.outcome}
        if self.outcome == SOLUTION:
            doc["cost"] = cost_to_json(self.cost)
            doc["path"] = [list(t) for t in self.path or ()]
        return doc


Trace = list[TraceEvent]


@dataclass(frozen=True)
class SearchStats:
    expansions: int
    reevaluations: int
    reopenings: int
    duplicate_drops: int
    max_open_size: int
    pops: int

    def to_json(self) -> dict:
        return {
            "expansions": self.expansions,
            "reevaluations": self.reevaluations,
            "reopenings": self.reopenings,
            "duplicate_drops": self.duplicate_drops,
            "max_open_size": self.max_open_size,
            "pops": self.pops,
        }


@dataclass(frozen=True)
class SearchResult:
    outcome: str  # SOLUTION | UNSOLVABLE | STEP_LIMIT
    path: Path | None
    cost: int | float | None
    stats: SearchStats

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "cost": cost_to_json(self.cost) if self.cost is not None else None,
            "path": [list(t) for t in self.path] if self.path is not None else None,
            "stats": self.stats.to_json(),
        }


def search(
    ts: TransitionSystem,
    heuristic: DynamicHeuristic,
    reeval: bool = False,
    reopen: bool = True,
    step_limit: int = 1_000_000,
) -> tuple[SearchResult, Trace]:
    """Run the search; returns the result and the full event trace.

    ``step_limit`` bounds the number of pops; exhausting it yields a
    STEP_LIMIT result with the partial trace.
    """
    p_source = progression_to_information(parent_source(ts), ts)
    h_source = heuristic.source
    info_p = p_source.initial()
    info_h = h_source.initial()

    i, j = 0, 0
    known = {ts.init}
    closed: set[str] = set()
    heap: list[tuple[int, int, int, OpenEntry]] = []
    seq = 0
    trace: Trace = []

    expansions = reevaluations = reopenings = duplicate_drops = pops = 0
    max_open = 0

    def g_of(state: str) -> int:
        return info_p[state][0]

    def h_of(state: str) -> int | float:
        return heuristic.eval(state, info_h)

    def push(state: str, g: int, h: int, reason: str) -> None:
        nonlocal seq, max_open
        entry = OpenEntry(state, g, h, seq)
        seq += 1
        heapq.heappush(heap, (entry.f, entry.h, entry.seq, entry))
        max_open = max(max_open, len(heap))
        trace.append(Insert((i, j), entry=entry, reason=reason))

    def finish(outcome: str, path: Path | None = None, cost=None) -> tuple[SearchResult, Trace]:
        trace.append(Return((i, j), outcome=outcome, cost=cost, path=path))
        stats = SearchStats(
            expansions=expansions,
            reevaluations=reevaluations,
            reopenings=reopenings,
            duplicate_drops=duplicate_drops,
            max_open_size=max_open,
            pops=pops,
        )
        return SearchResult(outcome, path, cost, stats), trace

    h_init = h_of(ts.init)
    if h_init < INF:
        push(ts.init, g_of(ts.init), h_init, reason="initial")
    else:
        trace.append(Prune((i, j), state=ts.init, where="initial"))

    while heap:
        if pops >= step_limit:
            return finish(STEP_LIMIT)
        i += 1
        j = 0
        _, _, _, entry = heapq.heappop(heap)
        pops += 1
        s = entry.state
        trace.append(Pop((i, j), entry=entry))

        if s in closed:
            duplicate_drops += 1
            trace.append(DuplicateDrop((i, j), entry=entry))
            continue

        info_p = p_source.refine(info_p, s)
        info_h = h_source.refine(info_h, s)
        j = 1
        trace.append(Refine((i, j), state=s))

        current_h = h_of(s)
        if reeval and entry.h < current_h:
            reevaluations += 1
            trace.append(Reevaluate((i, j), state=s, old_h=entry.h, new_h=current_h))
            if current_h < INF:
                push(s, g_of(s), current_h, reason="reeval")
            else:
                trace.append(Prune((i, j), state=s, where="reeval"))
            continue

        closed.add(s)
        trace.append(Close((i, j), state=s))
        expansions += 1
        trace.append(Expand((i, j), state=s, g=entry.g, h=entry.h))

        if ts.is_goal(s):
            path = extract_path(info_p, s)
            return finish(SOLUTION, path=path, cost=path_cost(ts, path))

        for t in ts.successors(s):
            s2 = t.target
            g_old = g_of(s2) if s2 in known else None
            info_p = p_source.update(info_p, t)
            info_h = h_source.update(info_h, t)
            j += 1
            trace.append(Update((i, j), transition=t))
            known.add(s2)
            h2 = h_of(s2)
            if h2 == INF:
                trace.append(Prune((i, j), state=s2, where="successor"))
                continue
            g2 = g_of(s2)
            if g_old is None:
                push(s2, g2, h2, reason="new")  # first path to s2
            elif g_old > g2:  # strictly cheaper path to s2
                if s2 in closed:
                    if not reopen:
                        continue  # non-conforming mode: leave s2 closed
                    closed.remove(s2)
                    reopenings += 1
                    trace.append(Reopen((i, j), state=s2, old_g=g_old, new_g=g2))
                push(s2, g2, h2, reason="cheaper")

    return finish(UNSOLVABLE)


def trace_to_json_lines(trace: Trace) -> str:
    """One compact JSON object per event; identical runs serialize identically."""
    return "\n".join(json.dumps(e.to_json(), separators=(",", ":")) for e in trace) + "\n"


def write_trace(trace: Trace, fp: TextIO) -> None:
    fp.write(trace_to_json_lines(trace))


def read_trace_dicts(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]
