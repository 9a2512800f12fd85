"""Pairwise relation matrices and their mixing weights.

Three complementary views of how patches relate: shared row or column
(crosshair), spatial closeness within a straight-line radius (proximity),
and normalized semantic similarity of the embeddings.  A small MLP over the
mean patch embedding decides how much each view matters for this chart.
"""

from __future__ import annotations

import numpy as np

from .types import DegenerateInput, MlpParams, PatchGrid, PrincipleMatrices, ShapeMismatch

__all__ = ["build_principle_matrices", "principle_weights", "row_softmax"]

DEFAULT_PROXIMITY_RADIUS = 3.0


def row_softmax(scores: np.ndarray) -> np.ndarray:
    """Numerically stable softmax over the last axis."""
    shifted = scores - scores.max(axis=-1, keepdims=True)
    weights = np.exp(shifted)
    return weights / weights.sum(axis=-1, keepdims=True)


def build_principle_matrices(grid: PatchGrid, radius: float = DEFAULT_PROXIMITY_RADIUS) -> PrincipleMatrices:
    """Builds the crosshair, proximity, and similarity matrices for a grid.

    All three have zero diagonals.  The binary matrices are symmetric; the
    similarity matrix is a row softmax over cosine similarities with the
    diagonal masked out, so each row sums to one over the off-diagonal
    entries (a single-patch grid has no off-diagonal mass and gets a zero
    row instead).
    """
    if radius <= 0:
        raise DegenerateInput("radius must be positive")
    n = grid.count
    positions = grid.positions
    same_row = positions[:, 0][:, None] == positions[:, 0][None, :]
    same_col = positions[:, 1][:, None] == positions[:, 1][None, :]
    crosshair = (same_row | same_col).astype(np.float64)
    np.fill_diagonal(crosshair, 0.0)

    deltas = positions[:, None, :] - positions[None, :, :]
    euclidean = np.sqrt((deltas ** 2).sum(axis=2))
    proximity = (euclidean <= radius).astype(np.float64)
    np.fill_diagonal(proximity, 0.0)

    norms = np.linalg.norm(grid.embeddings, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateInput("cannot take cosine similarity of a zero-norm embedding")
    unit = grid.embeddings / norms[:, None]
    cosine = np.clip(unit @ unit.T, -1.0, 1.0)
    if n == 1:
        similarity = np.zeros((1, 1))
    else:
        masked = cosine.copy()
        np.fill_diagonal(masked, -np.inf)
        similarity = row_softmax(masked)
        np.fill_diagonal(similarity, 0.0)
    return PrincipleMatrices(crosshair, proximity, similarity)


def principle_weights(grid: PatchGrid, mlp: MlpParams) -> np.ndarray:
    """Softmax weights over the three principles from the pooled embedding."""
    if mlp.w1.shape[1] != grid.dim:
        raise ShapeMismatch(
            f"mlp expects embeddings of width {mlp.w1.shape[1]}, grid has {grid.dim}"
        )
    pooled = grid.embeddings.mean(axis=0)
    hidden = np.maximum(mlp.w1 @ pooled + mlp.b1, 0.0)
    logits = mlp.w2 @ hidden + mlp.b2
    return row_softmax(logits)
