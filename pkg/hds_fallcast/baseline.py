"""One-step-ahead scalar predictors: the clinical threshold rule and k-NN.

Both consume a single integer feature, the HDS at the prediction origin,
and emit a :class:`~hds_fallcast.hds_core.Prediction`. Tree ensembles over
the same feature live in :mod:`hds_fallcast.trees`.

Ties are resolved toward the fall label: a k-NN vote split evenly, or
equidistant neighbours with different labels, flag risk rather than
dismiss it.

Public API:
    - ThresholdModel, threshold_predict, threshold_sweep, best_threshold
    - KnnModel, knn_fit, knn_predict

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .constants import FALL, NO_FALL
from .evaluation import ConfusionCounts, MetricSet, confusion, metrics
from .exceptions import HdsFallcastConfigError, HdsFallcastDataError
from .hds_core import Prediction, ScaleConfig

Pair = tuple[int, int]


@dataclass(frozen=True)
class ThresholdModel:
    """Flag a fall when the score at the origin reaches ``theta``."""

    theta: int

    KIND = "threshold"

    def check_scale(self, scale: ScaleConfig) -> None:
        """Raise unless ``s_min <= theta <= s_max``."""
        if not scale.contains(self.theta):
            raise HdsFallcastConfigError(
                f"theta {self.theta} outside [{scale.s_min}, {scale.s_max}]",
                error_code="theta-out-of-range",
                details={"theta": self.theta},
            )

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.KIND, "theta": self.theta}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ThresholdModel:
        return cls(theta=int(data["theta"]))


def threshold_predict(m: ThresholdModel, x_last: int) -> Prediction:
    """Apply the threshold rule; the boundary is inclusive."""
    label = FALL if x_last >= m.theta else NO_FALL
    return Prediction(label=label, prob_fall=float(label))


def threshold_sweep(pairs: Sequence[Pair], thetas: Iterable[int]) -> list[tuple[int, ConfusionCounts, MetricSet]]:
    """Score every candidate threshold on ``pairs``.

    Returns:
        ``(theta, counts, metrics)`` per candidate, in the order given.
    """
    truth = [y for _, y in pairs]
    results = []
    for theta in thetas:
        model = ThresholdModel(theta)
        preds = [threshold_predict(model, x).label for x, _ in pairs]
        counts = confusion(preds, truth)
        results.append((theta, counts, metrics(counts)))
    return results


def best_threshold(pairs: Sequence[Pair], scale: ScaleConfig) -> ThresholdModel:
    """Pick the threshold with the highest balanced accuracy; ties go to the lower theta."""
    best_theta = scale.s_min
    best_score = -1.0
    for theta, _, m in threshold_sweep(pairs, range(scale.s_min, scale.s_max + 1)):
        score = (m.tpr + m.tnr) / 2
        if score > best_score:
            best_theta, best_score = theta, score
    return ThresholdModel(best_theta)


@dataclass(frozen=True)
class KnnModel:
    """Memorised ``(x_last, y)`` pairs queried by absolute distance."""

    k: int
    features: tuple[int, ...]
    labels: tuple[int, ...]

    KIND = "knn"

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.KIND, "k": self.k, "pairs": [[x, y] for x, y in zip(self.features, self.labels)]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> KnnModel:
        pairs = [(int(x), int(y)) for x, y in data["pairs"]]
        return knn_fit(pairs, int(data["k"]))


def knn_fit(pairs: Sequence[Pair], k: int) -> KnnModel:
    """Memorise ``pairs``.

    Raises:
        HdsFallcastConfigError: If ``k`` is not positive.
        HdsFallcastDataError: If ``pairs`` is empty or holds fewer than ``k`` entries.
    """
    if k < 1:
        raise HdsFallcastConfigError(f"k must be positive, got {k}", error_code="invalid-k")
    if not pairs:
        raise HdsFallcastDataError("cannot fit k-NN on an empty training set", error_code="empty-training-set")
    if len(pairs) < k:
        raise HdsFallcastDataError(
            f"k={k} exceeds the {len(pairs)} training pairs",
            error_code="k-exceeds-pairs",
            details={"k": k, "pairs": len(pairs)},
        )
    return KnnModel(k=k, features=tuple(int(x) for x, _ in pairs), labels=tuple(int(y) for _, y in pairs))


def knn_predict(m: KnnModel, x_last: int) -> Prediction:
    """Vote among the ``k`` nearest memorised points.

    Equidistant points are ordered fall-first, and an even vote resolves
    to a fall.
    """
    features = np.asarray(m.features, dtype=np.float64)
    labels = np.asarray(m.labels, dtype=np.int64)
    distance = np.abs(features - float(x_last))
    # lexsort: last key is primary; -labels puts fall ahead of no-fall at equal distance
    order = np.lexsort((-labels, distance))
    votes = labels[order[: m.k]]
    prob = float(votes.mean())
    label = FALL if prob >= 0.5 else NO_FALL
    return Prediction(label=label, prob_fall=prob)
