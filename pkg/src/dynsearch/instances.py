"""Built-in example instances.

Two small systems ship with the package: a four-state chain used throughout
the landmark examples, and a six-state system whose scripted heuristic
forces a reopening unless popped states are re-evaluated.  Both are stored
as data files (exercising the parser) and exposed here together with the
golden expectations the CLI's self-check compares against.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Mapping

from .costs import ensure_cost
from .heuristics import ScriptedHeuristic, scripted_heuristic
from .info import scripted_source
from .transition_system import Transition, TransitionSystem, parse


def _data_text(name: str) -> str:
    return resources.files("dynsearch.data").joinpath(name).read_text(encoding="utf-8")


def landmark_example() -> TransitionSystem:
    """Four states A-D, labels x (cost 1) and y (cost 2), goal D."""
    return parse(_data_text("landmark_example.ts"))


def reopening_example() -> TransitionSystem:
    """Six states A-F; the direct edge to the goal is a trap for searches
    that never reconsider closed states."""
    return parse(_data_text("reopening_example.ts"))


def load_scripted_sidecar(text: str, ts: TransitionSystem) -> ScriptedHeuristic:
    """Build a scripted heuristic from its JSON sidecar.

    The sidecar is either a bare array of trigger records
    ``{"on": [origin, label, target], "state": id, "h": value}`` or an object
    ``{"initial": {state: value}, "triggers": [...]}`` when some states need
    a nonzero value before any trigger fires.
    """
    doc = json.loads(text)
    if isinstance(doc, list):
        initial: Mapping[str, int] = {}
        trigger_entries = doc
    else:
        initial = doc.get("initial", {})
        trigger_entries = doc.get("triggers", [])
    initial = {s: ensure_cost(v, f"initial[{s}]") for s, v in initial.items()}
    triggers = {}
    for entry in trigger_entries:
        on = entry["on"]
        value = ensure_cost(entry["h"], "trigger value")
        triggers[Transition(on[0], on[1], on[2])] = (entry["state"], value)
    return scripted_heuristic(scripted_source(ts, triggers, initial))


def reopening_heuristic(ts: TransitionSystem | None = None) -> ScriptedHeuristic:
    """The scripted heuristic belonging to the reopening example."""
    if ts is None:
        ts = reopening_example()
    return load_scripted_sidecar(_data_text("reopening_heuristic.json"), ts)


# Golden expectations for the built-in instances, used by the CLI self-check
# and the acceptance tests.
GOLDEN = {
    "landmark-example/reeval-off": {"cost": 3},
    "reopening-example/reeval-off": {
        "cost": 7,
        "expansions": ["A", "B", "C", "D", "E", "D", "F"],
        "reopenings": 1,
    },
    "reopening-example/no-reopen": {"cost": 8},
    "reopening-example/reeval-on": {
        "cost": 7,
        "expansions": ["A", "B", "C", "E", "D", "F"],
        "reopenings": 0,
    },
}
