"""Greedy baseline: the maximum observed throughput."""

from __future__ import annotations

from ..validation import as_values


def greedy_max(data) -> float:
    """Maximum of the values; errors on empty input."""
    return float(as_values(data, name="data").max())
