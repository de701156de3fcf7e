"""Ground-truth shortest-path quantities.

Dijkstra with exact integer costs, lazy deletion and deterministic
tie-breaking by state index.  These tables are the independent reference
every theorem check compares against, so they are hand-rolled rather than
delegated to a graph library: the checks need exact integer arithmetic and a
pinned, reproducible tie order.
"""

from __future__ import annotations

import heapq

from .costs import INF
from .transition_system import Transition, TransitionSystem

# CostTable: every state of the source system maps to a cost, INF meaning
# unreachable (forward) or dead end (backward).
CostTable = dict[str, "int | float"]


def _dijkstra(
    ts: TransitionSystem,
    sources: list[str],
    edges: dict[str, list[tuple[str, int]]],
) -> CostTable:
    dist: CostTable = {s: INF for s in ts.states}
    heap: list[tuple[int, int, str]] = []
    for s in sources:
        dist[s] = 0
        heapq.heappush(heap, (0, ts.state_index(s), s))
    while heap:
        d, _, s = heapq.heappop(heap)
        if d > dist[s]:
            continue  # stale entry, lazy deletion
        for target, cost in edges[s]:
            nd = d + cost
            if nd < dist[target]:
                dist[target] = nd
                heapq.heappush(heap, (nd, ts.state_index(target), target))
    return dist


def _forward_edges(ts: TransitionSystem) -> dict[str, list[tuple[str, int]]]:
    edges: dict[str, list[tuple[str, int]]] = {s: [] for s in ts.states}
    for t in ts.transitions:
        edges[t.origin].append((t.target, ts.label_cost[t.label]))
    return edges


def _backward_edges(ts: TransitionSystem) -> dict[str, list[tuple[str, int]]]:
    edges: dict[str, list[tuple[str, int]]] = {s: [] for s in ts.states}
    for t in ts.transitions:
        edges[t.target].append((t.origin, ts.label_cost[t.label]))
    return edges


def gstar_all(ts: TransitionSystem) -> CostTable:
    """Optimal path cost from init to every state (INF if unreachable)."""
    return _dijkstra(ts, [ts.init], _forward_edges(ts))


def hstar_all(ts: TransitionSystem) -> CostTable:
    """Optimal solution cost from every state (INF if no goal reachable)."""
    return _dijkstra(ts, list(ts.goals), _backward_edges(ts))


def optimal_solution_cost(ts: TransitionSystem) -> int | float:
    """Cost of an optimal solution; INF iff the system is unsolvable."""
    return hstar_all(ts)[ts.init]


def all_pairs_distances(ts: TransitionSystem) -> dict[str, CostTable]:
    """Minimal path cost between every ordered state pair."""
    edges = _forward_edges(ts)
    return {s: _dijkstra(ts, [s], edges) for s in ts.states}


def solution_path(ts: TransitionSystem) -> tuple[Transition, ...] | None:
    """Some optimal solution path, or None if unsolvable.

    Reconstructed from a forward Dijkstra parent tree, so zero-cost cycles
    cannot trap the walk.
    """
    dist: CostTable = {s: INF for s in ts.states}
    parent: dict[str, Transition] = {}
    dist[ts.init] = 0
    heap: list[tuple[int, int, str]] = [(0, ts.state_index(ts.init), ts.init)]
    while heap:
        d, _, s = heapq.heappop(heap)
        if d > dist[s]:
            continue
        for t in ts.successors(s):
            nd = d + ts.label_cost[t.label]
            if nd < dist[t.target]:
                dist[t.target] = nd
                parent[t.target] = t
                heapq.heappush(heap, (nd, ts.state_index(t.target), t.target))
    best: str | None = None
    for g in ts.goals:
        if dist[g] != INF and (best is None or dist[g] < dist[best]):
            best = g
    if best is None:
        return None
    path: list[Transition] = []
    state = best
    while state != ts.init:
        t = parent[state]
        path.append(t)
        state = t.origin
    return tuple(reversed(path))
