"""Fall-risk prediction from Hester Davis Score (HDS) time series.

The package compares one-step-ahead scalar predictors (the clinical
threshold rule, k-NN, random forests and gradient-boosted trees) with
sequence-to-point recurrent networks (RNN, LSTM, GRU) under a balanced
10-fold cross-validation protocol. Everything is deterministic under a
single root seed.

License: MIT
Copyright (c) 2025 Jim Schilling
"""

from .cells import CellKind
from .evaluation import (
    ConfusionCounts,
    FoldSplit,
    MetricSet,
    MetricsReport,
    RocCurve,
    balanced_split,
    confusion,
    cross_validate,
    format_table,
    make_folds,
    metrics,
    roc_auc,
)
from .exceptions import (
    HdsFallcastConfigError,
    HdsFallcastDataError,
    HdsFallcastError,
    HdsFallcastNumericError,
    HdsFallcastOSError,
    HdsFallcastTypeError,
    HdsFallcastValueError,
)
from .hds_core import (
    Dataset,
    Encounter,
    HdsSeries,
    Prediction,
    ScaleConfig,
    Violation,
    denormalize,
    derive_onestep_pairs,
    derive_sequence,
    validate_dataset,
)
from .models import FallPredictor, ModelSpec
from .seqnet import HyperParams, ModelParams, TrainState
from .synth import SynthConfig, generate

__version__ = "2025.1.0"
__author__ = "Jim Schilling"
__license__ = "MIT"

__all__ = [
    "__version__",
    "CellKind",
    "ConfusionCounts",
    "Dataset",
    "Encounter",
    "FallPredictor",
    "FoldSplit",
    "HdsFallcastConfigError",
    "HdsFallcastDataError",
    "HdsFallcastError",
    "HdsFallcastNumericError",
    "HdsFallcastOSError",
    "HdsFallcastTypeError",
    "HdsFallcastValueError",
    "HdsSeries",
    "HyperParams",
    "MetricSet",
    "MetricsReport",
    "ModelParams",
    "ModelSpec",
    "Prediction",
    "RocCurve",
    "ScaleConfig",
    "SynthConfig",
    "TrainState",
    "Violation",
    "balanced_split",
    "confusion",
    "cross_validate",
    "denormalize",
    "format_table",
    "derive_onestep_pairs",
    "derive_sequence",
    "generate",
    "make_folds",
    "metrics",
    "roc_auc",
    "validate_dataset",
]
