"""Alignment composition, restricted attention, annotation, and fusion.

The alignment matrix scores cross-cluster patch pairs only: within a
cluster, restricted attention does the talking, so same-cluster entries are
identically zero.  Query-driven annotation then boosts the rows and columns
of the patches the question cares about, and fusion folds the annotated
context back into the patch embeddings with a row-wise layer norm.
"""

from __future__ import annotations

import numpy as np

from .principles import row_softmax
from .types import (
    AlignParams,
    AttentionLayerParams,
    ClusterSet,
    DegenerateInput,
    FuseParams,
    PatchGrid,
    PrincipleMatrices,
    QueryEmbedding,
    ShapeMismatch,
)

__all__ = [
    "cluster_interaction",
    "compose_alignment",
    "cross_cluster_annotate",
    "fuse",
    "intra_cluster_reason",
]

_LAYER_NORM_EPS = 1e-6


def cluster_interaction(grid: PatchGrid, clusters: ClusterSet) -> np.ndarray:
    """Row-stochastic cluster affinity from centroid inner products."""
    if clusters.labels.shape[0] != grid.count:
        raise ShapeMismatch("cluster labels do not cover the grid")
    centroids = np.stack(
        [grid.embeddings[clusters.members(c)].mean(axis=0) for c in range(clusters.k)]
    )
    return row_softmax(centroids @ centroids.T)


def compose_alignment(
    weights: np.ndarray,
    cluster_weights: np.ndarray,
    principles: PrincipleMatrices,
    clusters: ClusterSet,
) -> np.ndarray:
    """Combines the three principles into one cross-cluster alignment matrix.

    Each pair (i, j) in different clusters scores the principle-weighted sum
    of its three relation entries, scaled by the interaction weight of the
    two clusters; same-cluster pairs (the diagonal included) are zero.  All
    factors are non-negative, so the result is non-negative.
    """
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (3,):
        raise ShapeMismatch("expected exactly three principle weights")
    labels = clusters.labels
    n = labels.shape[0]
    if principles.crosshair.shape != (n, n):
        raise ShapeMismatch("principle matrices do not match the grid size")
    if cluster_weights.shape != (clusters.k, clusters.k):
        raise ShapeMismatch("cluster weights must be (k, k)")
    blended = (
        weights[0] * principles.crosshair
        + weights[1] * principles.proximity
        + weights[2] * principles.similarity
    )
    lifted = cluster_weights[labels[:, None], labels[None, :]]
    alignment = blended * lifted
    alignment[labels[:, None] == labels[None, :]] = 0.0
    return alignment


def _layer_norm_rows(array: np.ndarray) -> np.ndarray:
    mean = array.mean(axis=1, keepdims=True)
    var = array.var(axis=1, keepdims=True)
    return (array - mean) / np.sqrt(var + _LAYER_NORM_EPS)


def intra_cluster_reason(
    grid: PatchGrid,
    clusters: ClusterSet,
    layers: tuple[AttentionLayerParams, ...],
) -> np.ndarray:
    """Refines embeddings with attention restricted to each patch's cluster.

    Per layer: scaled dot-product attention where every patch queries only
    its own cluster's keys and values, then a relu feed-forward, each step
    wrapped with a residual connection and a row layer norm.  Equivalent to
    dense attention with cross-cluster logits masked to -inf.
    """
    if not layers:
        raise DegenerateInput("at least one attention layer is required")
    x = grid.embeddings.copy()
    d = grid.dim
    for layer in layers:
        if layer.w_q.shape[0] != d:
            raise ShapeMismatch(f"attention layer expects width {layer.w_q.shape[0]}, grid has {d}")
        queries = x @ layer.w_q
        keys = x @ layer.w_k
        values = x @ layer.w_v
        attended = np.empty_like(x)
        scale = 1.0 / np.sqrt(float(layer.d_k))
        for cluster_id in range(clusters.k):
            idx = clusters.members(cluster_id)
            scores = (queries[idx] @ keys[idx].T) * scale
            attended[idx] = row_softmax(scores) @ values[idx]
        x = _layer_norm_rows(x + attended)
        hidden = np.maximum(x @ layer.ff_w1 + layer.ff_b1, 0.0)
        x = _layer_norm_rows(x + hidden @ layer.ff_w2 + layer.ff_b2)
    return x


def cross_cluster_annotate(
    refined: np.ndarray,
    query: QueryEmbedding,
    alignment: np.ndarray,
    params: AlignParams,
) -> np.ndarray:
    """Boosts alignment rows/columns of the query's focus patches.

    The query scores every refined patch; the top_k scorers are marked (ties
    broken toward the lower index), and the mark propagates to any patch
    aligned with a marked one above params.prop_threshold times the maximum
    alignment value.  Marked rows and columns gain params.annotation_boost;
    everything else is untouched, so the result dominates the input
    entrywise.
    """
    refined = np.asarray(refined, dtype=np.float64)
    n = refined.shape[0]
    if alignment.shape != (n, n):
        raise ShapeMismatch("alignment must be (n, n)")
    if query.q_global.shape[0] != refined.shape[1]:
        raise ShapeMismatch("query width does not match refined embeddings")
    if params.top_k > n:
        raise ShapeMismatch(f"top_k={params.top_k} exceeds patch count {n}")
    scores = row_softmax(refined @ query.q_global)
    # Stable argsort of the negated scores: equal scores keep index order.
    ranked = np.argsort(-scores, kind="stable")
    marked = np.zeros(n, dtype=bool)
    marked[ranked[: params.top_k]] = True
    threshold = params.prop_threshold * float(alignment.max()) if alignment.size else 0.0
    reachable = (alignment[marked, :] > threshold).any(axis=0)
    marked |= reachable
    annotated = alignment.astype(np.float64).copy()
    pair_marked = marked[:, None] | marked[None, :]
    annotated[pair_marked] += params.annotation_boost
    return annotated


def fuse(refined: np.ndarray, annotated: np.ndarray, params: FuseParams) -> np.ndarray:
    """Aggregates annotated context into each patch and layer-norms rows.

    The context of patch i is the annotated-alignment weighted sum of
    refined embeddings; the residual sum is normalized per row to zero mean
    and unit variance before the affine (gamma, beta) is applied.
    """
    refined = np.asarray(refined, dtype=np.float64)
    n, d = refined.shape
    if annotated.shape != (n, n):
        raise ShapeMismatch("annotated alignment must be (n, n)")
    if params.gamma.shape != (d,):
        raise ShapeMismatch("gamma/beta width does not match embeddings")
    context = annotated @ refined
    combined = refined + context
    mean = combined.mean(axis=1, keepdims=True)
    var = combined.var(axis=1, keepdims=True)
    normalized = (combined - mean) / np.sqrt(var + params.epsilon)
    return params.gamma * normalized + params.beta
