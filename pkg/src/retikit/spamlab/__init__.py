"""Connectivity features from a rooted graph and spammer classification."""

from .maxflow import FeatureVector, features_from_root, max_flow_unit
from .tree import DecisionTree
from .evaluate import (
    EvaluationResult,
    SweepResult,
    connectivity_fraction,
    sweep,
    train_evaluate,
)

__all__ = [
    "FeatureVector",
    "features_from_root",
    "max_flow_unit",
    "DecisionTree",
    "EvaluationResult",
    "SweepResult",
    "connectivity_fraction",
    "sweep",
    "train_evaluate",
]
