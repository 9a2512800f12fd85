"""End-to-end alignment pipeline with ablation switches.

The stages run in a fixed order: cluster, principle matrices, principle
weights, cluster interaction, alignment composition, intra-cluster
reasoning, query-driven annotation, fusion.  Each ablation replaces exactly
one stage's output and leaves every shape intact, so downstream code cannot
tell the difference structurally:

    disable_alignment:  alignment becomes seeded Gaussian noise.
    disable_intra:      refined embeddings are the raw embeddings.
    disable_cross:      annotation is skipped; annotated == alignment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cluster import DEFAULT_K_MAX, DEFAULT_LINKAGE_THRESHOLD, cluster_patches
from .principles import DEFAULT_PROXIMITY_RADIUS, build_principle_matrices, principle_weights
from .reason import cluster_interaction, compose_alignment, cross_cluster_annotate, fuse, intra_cluster_reason
from .types import AlignParams, AlignmentBundle, PatchGrid, QueryEmbedding

__all__ = ["PipelineConfig", "run_alignment_pipeline"]


@dataclass(frozen=True)
class PipelineConfig:
    linkage_threshold: float = DEFAULT_LINKAGE_THRESHOLD
    k_max: int = DEFAULT_K_MAX
    proximity_radius: float = DEFAULT_PROXIMITY_RADIUS
    disable_alignment: bool = False
    disable_intra: bool = False
    disable_cross: bool = False
    noise_seed: int = 0  # seeds the Gaussian noise used by disable_alignment


def run_alignment_pipeline(
    grid: PatchGrid,
    query: QueryEmbedding,
    params: AlignParams,
    config: PipelineConfig | None = None,
) -> AlignmentBundle:
    """Runs every stage and returns the full bundle of outputs."""
    config = config or PipelineConfig()
    clusters = cluster_patches(grid, config.linkage_threshold, config.k_max)
    principles = build_principle_matrices(grid, config.proximity_radius)
    weights = principle_weights(grid, params.mlp)
    interactions = cluster_interaction(grid, clusters)
    if config.disable_alignment:
        rng = np.random.default_rng(config.noise_seed)
        alignment = rng.normal(size=(grid.count, grid.count))
    else:
        alignment = compose_alignment(weights, interactions, principles, clusters)
    if config.disable_intra:
        refined = grid.embeddings.copy()
    else:
        refined = intra_cluster_reason(grid, clusters, params.attention)
    if config.disable_cross:
        annotated = alignment.copy()
    else:
        annotated = cross_cluster_annotate(refined, query, alignment, params)
    fused = fuse(refined, annotated, params.fuse)
    return AlignmentBundle(
        clusters=clusters,
        principles=principles,
        principle_weights=weights,
        cluster_weights=interactions,
        alignment=alignment,
        annotated=annotated,
        refined=refined,
        fused=fused,
    )
