"""Independent reference implementations used only by tests.

The shortest-path tables here are computed by exhaustive enumeration of all
simple paths (no priority queue, no cost-based pruning), so they share no
logic with the Dijkstra oracle they are checked against.  With non-negative
costs some optimal path is always simple, so the minima agree.
"""

from __future__ import annotations

from dynsearch.costs import INF
from dynsearch.transition_system import TransitionSystem


def _edges(ts: TransitionSystem, reverse: bool) -> dict[str, list[tuple[str, int]]]:
    out: dict[str, list[tuple[str, int]]] = {s: [] for s in ts.states}
    for t in ts.transitions:
        cost = ts.label_cost[t.label]
        if reverse:
            out[t.target].append((t.origin, cost))
        else:
            out[t.origin].append((t.target, cost))
    return out


def _min_simple_path_costs(
    edges: dict[str, list[tuple[str, int]]],
    states: tuple[str, ...],
    source: str,
) -> dict[str, int | float]:
    best: dict[str, int | float] = {s: INF for s in states}
    best[source] = 0
    visited = {source}

    def walk(node: str, cost: int) -> None:
        for target, edge_cost in edges[node]:
            if target in visited:
                continue
            total = cost + edge_cost
            if total < best[target]:
                best[target] = total
            visited.add(target)
            walk(target, total)
            visited.remove(target)

    walk(source, 0)
    return best


def gstar_bruteforce(ts: TransitionSystem) -> dict[str, int | float]:
    return _min_simple_path_costs(_edges(ts, reverse=False), ts.states, ts.init)


def hstar_bruteforce(ts: TransitionSystem) -> dict[str, int | float]:
    edges = _edges(ts, reverse=True)
    best: dict[str, int | float] = {s: INF for s in ts.states}
    for goal in ts.goals:
        from_goal = _min_simple_path_costs(edges, ts.states, goal)
        for s, c in from_goal.items():
            if c < best[s]:
                best[s] = c
    return best


def optimal_states_bruteforce(ts: TransitionSystem) -> set[str]:
    """States lying on at least one optimal solution (simple paths only;
    exact whenever all label costs are positive)."""
    hstar = hstar_bruteforce(ts)
    optimal = hstar[ts.init]
    if optimal == INF:
        return set()
    edges = _edges(ts, reverse=False)
    found: set[str] = set()

    def walk(node: str, cost: int, on_path: list[str], visited: set[str]) -> None:
        if ts.is_goal(node) and cost == optimal:
            found.update(on_path)
        for target, edge_cost in edges[node]:
            if target in visited or cost + edge_cost > optimal:
                continue
            visited.add(target)
            on_path.append(target)
            walk(target, cost + edge_cost, on_path, visited)
            on_path.pop()
            visited.remove(target)

    walk(ts.init, 0, [ts.init], {ts.init})
    return found
