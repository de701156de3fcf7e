"""Exact cost arithmetic for search.

Costs are plain non-negative integers (a fixed-point scale of 1); the only
non-integer value that may appear is ``INF``.  Integer arithmetic keeps
f-value comparisons, tie-breaking and theorem checks exactly reproducible,
and ``INF`` absorbs addition, so no code path ever rounds.
"""

from __future__ import annotations

import math

INF: float = math.inf

# A cost is an int, or the float INF.  No other floats are ever produced.
Cost = int | float


def ensure_cost(value: int | float, where: str = "cost") -> int | float:
    """Reject anything that is not a non-negative int or INF.

    Floats other than INF (NaN in particular, which arises from arithmetic
    like ``INF // 2``) would silently break exact comparisons and poison the
    open list's ordering, so they are refused at the boundary.
    """
    if value == INF:
        return INF
    if isinstance(value, int) and not isinstance(value, bool) and value >= 0:
        return value
    raise ValueError(f"{where} must be a non-negative integer or INF, got {value!r}")


def cost_to_json(c: int | float) -> int | None:
    """INF serializes as JSON null; finite costs as plain ints."""
    return None if c == INF else c


def cost_from_json(value: int | None) -> int | float:
    if value is None:
        return INF
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ValueError(f"cost must be a non-negative integer or null, got {value!r}")
    return value
