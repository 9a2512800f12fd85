"""Structural checks over a pipeline bundle.

check_bundle reports rather than raises: each named invariant maps to a
boolean, so ablated runs (which intentionally break some of them) can still
be inspected, and the shape checks stay meaningful on their own.
"""

from __future__ import annotations

import numpy as np

from .types import AlignmentBundle, PatchGrid

__all__ = ["check_bundle"]

SIMPLEX_ATOL = 1e-6
ROW_SUM_ATOL = 1e-6
LN_MEAN_ATOL = 1e-6
LN_VAR_ATOL = 1e-4


def _shapes_consistent(grid: PatchGrid, bundle: AlignmentBundle) -> bool:
    n, d = grid.count, grid.dim
    k = bundle.clusters.k
    return (
        bundle.clusters.labels.shape == (n,)
        and bundle.principles.crosshair.shape == (n, n)
        and bundle.principles.proximity.shape == (n, n)
        and bundle.principles.similarity.shape == (n, n)
        and bundle.principle_weights.shape == (3,)
        and bundle.cluster_weights.shape == (k, k)
        and bundle.alignment.shape == (n, n)
        and bundle.annotated.shape == (n, n)
        and bundle.refined.shape == (n, d)
        and bundle.fused.shape == (n, d)
        and bool(np.all(np.isfinite(bundle.alignment)))
        and bool(np.all(np.isfinite(bundle.annotated)))
        and bool(np.all(np.isfinite(bundle.refined)))
        and bool(np.all(np.isfinite(bundle.fused)))
    )


def _partition_ok(bundle: AlignmentBundle) -> bool:
    labels = bundle.clusters.labels
    present = np.unique(labels)
    return bool(
        labels.min(initial=0) >= 0
        and present.size == bundle.clusters.k
        and present[-1] == bundle.clusters.k - 1
    )


def _simplex_ok(weights: np.ndarray) -> bool:
    return bool(np.all(weights >= -SIMPLEX_ATOL) and abs(float(weights.sum()) - 1.0) <= SIMPLEX_ATOL)


def _row_stochastic_ok(matrix: np.ndarray) -> bool:
    return bool(
        np.all(matrix >= -ROW_SUM_ATOL)
        and np.allclose(matrix.sum(axis=1), 1.0, atol=ROW_SUM_ATOL)
    )


def _nullity_ok(bundle: AlignmentBundle) -> bool:
    labels = bundle.clusters.labels
    same_cluster = labels[:, None] == labels[None, :]
    return bool(np.all(bundle.alignment[same_cluster] == 0.0))


def _ln_rows_ok(bundle: AlignmentBundle, epsilon: float) -> bool:
    # Recomputes the pre-affine normalized rows from the bundle's own parts.
    combined = bundle.refined + bundle.annotated @ bundle.refined
    mean = combined.mean(axis=1, keepdims=True)
    var = combined.var(axis=1, keepdims=True)
    normalized = (combined - mean) / np.sqrt(var + epsilon)
    row_means = normalized.mean(axis=1)
    row_vars = normalized.var(axis=1)
    return bool(
        np.all(np.abs(row_means) <= LN_MEAN_ATOL) and np.all(np.abs(row_vars - 1.0) <= LN_VAR_ATOL)
    )


def check_bundle(grid: PatchGrid, bundle: AlignmentBundle, epsilon: float = 1e-6) -> dict[str, bool]:
    """Evaluates every structural invariant; ablations show up as False."""
    report = {
        "shapes": _shapes_consistent(grid, bundle),
        "partition": _partition_ok(bundle),
        "principle_weights_simplex": _simplex_ok(bundle.principle_weights),
        "cluster_weights_rows": _row_stochastic_ok(bundle.cluster_weights),
        "same_cluster_nullity": _nullity_ok(bundle),
        "alignment_nonnegative": bool(np.all(bundle.alignment >= 0.0)),
        "annotated_nonnegative": bool(np.all(bundle.annotated >= 0.0)),
        "annotated_dominates": bool(np.all(bundle.annotated >= bundle.alignment - 1e-12)),
        "layer_norm_rows": _ln_rows_ok(bundle, epsilon),
    }
    return report
