"""Density-based clustering over 1-D value sets.

Core point: at least ``min_pts`` points (itself included) within ``eps``.
Clusters are the connected components of core points; border points join the
cluster of their lowest-index core neighbor; the rest is noise.  Cluster ids
follow first-visit order, so results are deterministic for a fixed input
order.  The full pairwise distance matrix is materialized (O(N^2) memory).
"""

from __future__ import annotations

import numpy as np

from ..validation import as_values, check_count, check_positive
from .result import NOISE, from_labels

__all__ = ["dbscan"]


def dbscan(data, eps: float, min_pts: int):
    x = as_values(data, name="data")
    eps = check_positive(eps, "eps")
    min_pts = check_count(min_pts, "min_pts", minimum=1)
    n = x.size

    within = np.abs(x[:, None] - x[None, :]) <= eps
    core = within.sum(axis=1) >= min_pts

    labels = np.full(n, NOISE, dtype=int)
    k = 0
    for i in range(n):
        if not core[i] or labels[i] != NOISE:
            continue
        labels[i] = k
        frontier = [i]
        while frontier:
            p = frontier.pop()
            for q in np.nonzero(within[p] & core)[0]:
                if labels[q] == NOISE:
                    labels[q] = k
                    frontier.append(int(q))
        k += 1

    for i in range(n):
        if labels[i] == NOISE and not core[i]:
            reachable = np.nonzero(within[i] & core)[0]
            if reachable.size:
                labels[i] = labels[reachable[0]]

    return from_labels(x, labels)
