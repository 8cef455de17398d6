"""Agglomerative clustering with single/complete/average linkage.

Bottom-up: repeatedly merge the two closest clusters until the smallest
inter-cluster distance exceeds the threshold.  The candidate scan is an
exhaustive argmin over the full distance matrix; merged distances follow the
Lance-Williams updates for the supported linkages.  Ties break toward the
pair with the lowest member indices, and merged clusters keep the lower
slot, so slot order equals lowest-member order throughout.
"""

from __future__ import annotations

import math

import numpy as np

from ..validation import as_values, check_positive
from .result import from_labels

__all__ = ["agglomerative", "LINKAGES"]

LINKAGES = ("single", "complete", "average")


def agglomerative(data, distance_threshold: float, linkage: str = "average"):
    x = as_values(data, name="data")
    distance_threshold = check_positive(distance_threshold, "distance_threshold")
    if linkage not in LINKAGES:
        raise ValueError(f"linkage must be one of {LINKAGES}, got {linkage!r}")
    n = x.size

    dist = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(dist, math.inf)
    alive = np.ones(n, dtype=bool)
    sizes = np.ones(n, dtype=int)
    members: list[list[int]] = [[i] for i in range(n)]

    while alive.sum() > 1:
        flat = int(np.argmin(dist))  # row-major argmin = lowest-index tie-break
        i, j = divmod(flat, n)
        if dist[i, j] > distance_threshold:
            break
        if j < i:
            i, j = j, i
        others = alive.copy()
        others[i] = others[j] = False
        if linkage == "single":
            merged = np.minimum(dist[i], dist[j])
        elif linkage == "complete":
            merged = np.maximum(dist[i], dist[j])
        else:
            merged = (sizes[i] * dist[i] + sizes[j] * dist[j]) / (sizes[i] + sizes[j])
        dist[i, :] = np.where(others, merged, math.inf)
        dist[:, i] = dist[i, :]
        dist[j, :] = math.inf
        dist[:, j] = math.inf
        sizes[i] += sizes[j]
        members[i].extend(members[j])
        alive[j] = False

    labels = np.empty(n, dtype=int)
    for label, slot in enumerate(np.nonzero(alive)[0]):
        labels[members[slot]] = label
    return from_labels(x, labels)
