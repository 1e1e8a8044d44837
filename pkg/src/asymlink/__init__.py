"""Asymmetry-aware tie-strength metrics and link prediction for coauthorship networks."""

__version__ = "0.1.0"

from .graph import (CoauthorGraph, EdgeData, PaperRecord, build_from_papers, common_neighbors,
                    from_author_lists, largest_component)
from .similarity import ScoreKind, score, score_arrays, score_batch
from .model import ModelConfig, simulate
from .evaluation import build_balanced_set, evaluate_all, holdout_scores, pr_auc, roc_auc

__all__ = [
    "CoauthorGraph",
    "EdgeData",
    "PaperRecord",
    "build_from_papers",
    "common_neighbors",
    "from_author_lists",
    "largest_component",
    "ScoreKind",
    "score",
    "score_arrays",
    "score_batch",
    "ModelConfig",
    "simulate",
    "build_balanced_set",
    "evaluate_all",
    "holdout_scores",
    "pr_auc",
    "roc_auc",
]
