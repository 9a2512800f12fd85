"""Visual alignment numeric core: clustering, principle matrices, restricted
attention, query-driven annotation, and fusion."""

from __future__ import annotations

from .cluster import cluster_patches
from .invariants import check_bundle
from .pipeline import PipelineConfig, run_alignment_pipeline
from .principles import build_principle_matrices, principle_weights
from .reason import (
    cluster_interaction,
    compose_alignment,
    cross_cluster_annotate,
    fuse,
    intra_cluster_reason,
)
from .synthetic import make_grid, make_params, make_query
from .types import (
    AlignParams,
    AlignmentBundle,
    AttentionLayerParams,
    ClusterSet,
    DegenerateInput,
    FuseParams,
    MlpParams,
    PatchGrid,
    PrincipleMatrices,
    QueryEmbedding,
    ShapeMismatch,
)

__all__ = [
    "AlignParams",
    "AlignmentBundle",
    "AttentionLayerParams",
    "ClusterSet",
    "DegenerateInput",
    "FuseParams",
    "MlpParams",
    "PatchGrid",
    "PipelineConfig",
    "PrincipleMatrices",
    "QueryEmbedding",
    "ShapeMismatch",
    "build_principle_matrices",
    "check_bundle",
    "cluster_interaction",
    "cluster_patches",
    "compose_alignment",
    "cross_cluster_annotate",
    "fuse",
    "intra_cluster_reason",
    "make_grid",
    "make_params",
    "make_query",
    "principle_weights",
    "run_alignment_pipeline",
]
