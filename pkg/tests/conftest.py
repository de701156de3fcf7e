from __future__ import annotations

import pytest

from dynsearch import instances
from dynsearch.transition_system import TransitionSystem, generate_random


@pytest.fixture(scope="session")
def landmark_ts() -> TransitionSystem:
    return instances.landmark_example()


@pytest.fixture(scope="session")
def reopening_ts() -> TransitionSystem:
    return instances.reopening_example()


@pytest.fixture()
def reopening_h(reopening_ts):
    # fresh heuristic per test: sources are stateless but cheap to rebuild
    return instances.reopening_heuristic(reopening_ts)


def small_instance(seed: int, max_states: int = 10, solvable_only: bool = True) -> TransitionSystem:
    """Deterministic small instance derived from a single seed."""
    n_states = 2 + seed % (max_states - 1)
    n_labels = max(1, min(4, 2 * n_states))
    capacity = n_states * n_states * n_labels
    n_transitions = 1 + (seed * 3) % min(30, capacity)
    n_goals = 1 + seed % 2
    return generate_random(
        n_states=n_states,
        n_transitions=n_transitions,
        max_cost=9,
        n_goals=min(n_goals, n_states),
        solvable_only=solvable_only,
        seed=seed,
    )
