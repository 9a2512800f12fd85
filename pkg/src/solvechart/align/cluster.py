"""Agglomerative patch clustering under cosine distance.

Average linkage, implemented directly rather than via a library so that
tie-breaking is pinned down: among equally close cluster pairs the
lexicographically smallest (i, j) merges first, and final cluster ids are
assigned by each cluster's smallest member index.  Merging is forced while
more than k_max clusters remain, then continues only while the closest pair
is within linkage_threshold, so the result never has more than k_max
clusters.
"""

from __future__ import annotations

import numpy as np

from .types import ClusterSet, DegenerateInput, PatchGrid

__all__ = ["cluster_patches", "cosine_distances"]

DEFAULT_LINKAGE_THRESHOLD = 0.35
DEFAULT_K_MAX = 12


def cosine_distances(embeddings: np.ndarray) -> np.ndarray:
    """Pairwise cosine distance matrix; zero-norm rows are rejected."""
    norms = np.linalg.norm(embeddings, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateInput("cannot take cosine distance of a zero-norm embedding")
    unit = embeddings / norms[:, None]
    similarity = np.clip(unit @ unit.T, -1.0, 1.0)
    distances = 1.0 - similarity
    np.fill_diagonal(distances, 0.0)
    return distances


def cluster_patches(
    grid: PatchGrid,
    linkage_threshold: float = DEFAULT_LINKAGE_THRESHOLD,
    k_max: int = DEFAULT_K_MAX,
) -> ClusterSet:
    """Groups patches by average-linkage agglomeration.

    Args:
        grid: Patch embeddings to cluster.
        linkage_threshold: Stop once the closest pair of clusters is farther
            apart than this (cosine distance).
        k_max: Hard cap on the number of clusters; merging continues past the
            threshold until the count is within the cap.

    Returns:
        A ClusterSet whose ids are ordered by smallest member index.
    """
    if k_max < 1:
        raise DegenerateInput("k_max must be positive")
    n = grid.count
    pair_distances = cosine_distances(grid.embeddings)

    members: list[list[int]] = [[i] for i in range(n)]
    sizes = np.ones(n)
    # linkage[i, j] is the average pairwise distance between clusters i and j;
    # retired clusters are marked inf so argmin never picks them.
    linkage = pair_distances.copy()
    np.fill_diagonal(linkage, np.inf)
    alive = n

    while alive > 1:
        flat = int(np.argmin(linkage))
        i, j = divmod(flat, linkage.shape[1])
        if i > j:
            i, j = j, i
        closest = linkage[i, j]
        if not np.isfinite(closest):
            break
        if alive <= k_max and closest > linkage_threshold:
            break
        # Lance-Williams update for average linkage: the merged cluster's
        # distance to any other is the size-weighted mean of the parts'.
        combined = (sizes[i] * linkage[i, :] + sizes[j] * linkage[j, :]) / (sizes[i] + sizes[j])
        linkage[i, :] = combined
        linkage[:, i] = combined
        linkage[i, i] = np.inf
        linkage[j, :] = np.inf
        linkage[:, j] = np.inf
        members[i].extend(members[j])
        members[j] = []
        sizes[i] += sizes[j]
        alive -= 1

    survivors = sorted((group for group in members if group), key=min)
    labels = np.empty(n, dtype=np.int64)
    for cluster_id, group in enumerate(survivors):
        labels[group] = cluster_id
    return ClusterSet(labels, len(survivors))
