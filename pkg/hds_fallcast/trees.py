"""Axis-threshold trees over the scalar HDS feature, bagged and boosted.

With one integer feature, candidate splits are the midpoints between
consecutive distinct values, and every node's best split is found from
per-value label sums in a single cumulative pass. Queries ``x <= threshold``
go left.

``ForestModel`` bags Gini-split classification trees whose leaves store the
fall fraction. ``GbtModel`` is first-order gradient boosting with logistic
loss: each stage is a squared-error regression tree fit to the residuals
``y - p``, with leaf values ``sum(residual) / (count + l2_reg)``.

Public API:
    - TreeNode
    - ForestModel, forest_fit, forest_predict
    - GbtModel, gbt_fit, gbt_predict

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .constants import FALL, NO_FALL
from .exceptions import HdsFallcastConfigError, HdsFallcastDataError
from .hds_core import Prediction
from .seeding import substream

Pair = tuple[int, int]


@dataclass(frozen=True)
class TreeNode:
    """A split (``threshold`` with children) or a leaf (``value`` only)."""

    value: float
    threshold: float | None = None
    left: TreeNode | None = None
    right: TreeNode | None = None

    @property
    def is_leaf(self) -> bool:
        return self.threshold is None

    def evaluate(self, x: float) -> float:
        node = self
        while node.threshold is not None:
            node = node.left if x <= node.threshold else node.right  # type: ignore[assignment]
        return node.value

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())  # type: ignore[union-attr]

    def to_dict(self) -> dict[str, Any]:
        if self.is_leaf:
            return {"value": self.value}
        return {
            "value": self.value,
            "threshold": self.threshold,
            "left": self.left.to_dict(),  # type: ignore[union-attr]
            "right": self.right.to_dict(),  # type: ignore[union-attr]
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TreeNode:
        if "threshold" not in data:
            return cls(value=float(data["value"]))
        return cls(
            value=float(data["value"]),
            threshold=float(data["threshold"]),
            left=cls.from_dict(data["left"]),
            right=cls.from_dict(data["right"]),
        )


def _value_sums(x: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distinct values of ``x`` with per-value counts and target sums."""
    values, inverse = np.unique(x, return_inverse=True)
    counts = np.bincount(inverse).astype(np.float64)
    sums = np.bincount(inverse, weights=target)
    return values, counts, sums


def _best_split(x: np.ndarray, target: np.ndarray, criterion: str, min_samples_leaf: int) -> tuple[float, float]:
    """Return ``(threshold, gain)`` of the best midpoint split, or ``(nan, 0)``.

    ``criterion`` is ``"gini"`` (binary targets) or ``"squared"``.
    """
    values, counts, sums = _value_sums(x, target)
    if len(values) < 2:
        return math.nan, 0.0

    n_left = np.cumsum(counts)[:-1]
    s_left = np.cumsum(sums)[:-1]
    n_total, s_total = counts.sum(), sums.sum()
    n_right, s_right = n_total - n_left, s_total - s_left

    if criterion == "gini":
        # n * 2p(1 - p) with p = s / n
        def impurity(n: Any, s: Any) -> Any:
            return 2.0 * s * (1.0 - s / n)

    else:
        # squared error up to the constant sum of squares
        def impurity(n: Any, s: Any) -> Any:
            return -(s * s) / n

    gains = impurity(n_total, s_total) - impurity(n_left, s_left) - impurity(n_right, s_right)
    allowed = (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
    gains = np.where(allowed, gains, -np.inf)
    best = int(np.argmax(gains))
    if not np.isfinite(gains[best]) or gains[best] <= 1e-12:
        return math.nan, 0.0
    return float((values[best] + values[best + 1]) / 2.0), float(gains[best])


def _grow(
    x: np.ndarray,
    target: np.ndarray,
    depth: int,
    max_depth: int,
    criterion: str,
    min_samples_leaf: int,
    leaf_value: Any,
) -> TreeNode:
    value = float(leaf_value(target))
    if depth >= max_depth or len(target) < 2 * min_samples_leaf:
        return TreeNode(value=value)
    if criterion == "gini" and (target.min() == target.max()):
        return TreeNode(value=value)
    threshold, _ = _best_split(x, target, criterion, min_samples_leaf)
    if math.isnan(threshold):
        return TreeNode(value=value)
    go_left = x <= threshold
    return TreeNode(
        value=value,
        threshold=threshold,
        left=_grow(x[go_left], target[go_left], depth + 1, max_depth, criterion, min_samples_leaf, leaf_value),
        right=_grow(x[~go_left], target[~go_left], depth + 1, max_depth, criterion, min_samples_leaf, leaf_value),
    )


def _arrays(pairs: Sequence[Pair]) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray([p[0] for p in pairs], dtype=np.float64)
    y = np.asarray([p[1] for p in pairs], dtype=np.float64)
    return x, y


def _require_both_classes(y: np.ndarray, model: str) -> None:
    if len(y) == 0 or y.min() == y.max():
        raise HdsFallcastDataError(
            f"{model} needs both classes in the training pairs",
            error_code="single-class",
            details={"pairs": int(len(y)), "falls": int(y.sum()) if len(y) else 0},
        )


@dataclass(frozen=True)
class ForestModel:
    """Bagged classification trees; each leaf stores its fall fraction."""

    trees: tuple[TreeNode, ...]
    tree_count: int
    max_depth: int

    KIND = "forest"

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.KIND,
            "tree_count": self.tree_count,
            "max_depth": self.max_depth,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ForestModel:
        return cls(
            trees=tuple(TreeNode.from_dict(t) for t in data["trees"]),
            tree_count=int(data["tree_count"]),
            max_depth=int(data["max_depth"]),
        )


def forest_fit(
    pairs: Sequence[Pair],
    tree_count: int = 300,
    max_depth: int = 10,
    seed: int = 0,
    *,
    min_samples_leaf: int = 1,
    bootstrap: bool = True,
) -> ForestModel:
    """Grow ``tree_count`` Gini trees on bootstrap resamples of ``pairs``.

    Raises:
        HdsFallcastConfigError: On non-positive ``tree_count``, negative ``max_depth``
            or ``min_samples_leaf < 1``.
        HdsFallcastDataError: If ``pairs`` holds a single class.
    """
    if tree_count < 1 or max_depth < 0 or min_samples_leaf < 1:
        raise HdsFallcastConfigError(
            "forest needs tree_count >= 1, max_depth >= 0 and min_samples_leaf >= 1",
            error_code="invalid-forest",
            details={"tree_count": tree_count, "max_depth": max_depth, "min_samples_leaf": min_samples_leaf},
        )
    x, y = _arrays(pairs)
    _require_both_classes(y, "forest")
    rng = substream(seed, "forest")
    trees = []
    for _ in range(tree_count):
        if bootstrap:
            rows = rng.integers(0, len(y), size=len(y))
            xs, ys = x[rows], y[rows]
        else:
            xs, ys = x, y
        trees.append(_grow(xs, ys, 0, max_depth, "gini", min_samples_leaf, np.mean))
    return ForestModel(trees=tuple(trees), tree_count=tree_count, max_depth=max_depth)


def forest_predict(m: ForestModel, x_last: int) -> Prediction:
    """Average the trees' leaf fall fractions."""
    prob = float(np.mean([t.evaluate(float(x_last)) for t in m.trees]))
    return Prediction(label=FALL if prob >= 0.5 else NO_FALL, prob_fall=prob)


@dataclass(frozen=True)
class GbtModel:
    """Boosted regression trees on the logit scale."""

    init_logit: float
    stages: tuple[TreeNode, ...]
    learning_rate: float
    stage_count: int
    l2_reg: float

    KIND = "gbt"

    def logit(self, x: float) -> float:
        return self.init_logit + self.learning_rate * sum(s.evaluate(x) for s in self.stages)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.KIND,
            "init_logit": self.init_logit,
            "learning_rate": self.learning_rate,
            "stage_count": self.stage_count,
            "l2_reg": self.l2_reg,
            "stages": [s.to_dict() for s in self.stages],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> GbtModel:
        return cls(
            init_logit=float(data["init_logit"]),
            stages=tuple(TreeNode.from_dict(s) for s in data["stages"]),
            learning_rate=float(data["learning_rate"]),
            stage_count=int(data["stage_count"]),
            l2_reg=float(data["l2_reg"]),
        )


def _logistic(z: np.ndarray | float) -> np.ndarray | float:
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(z)))


def gbt_fit(
    pairs: Sequence[Pair],
    stage_count: int = 300,
    learning_rate: float = 0.1,
    l2_reg: float = 1.0,
    seed: int = 0,
    *,
    max_depth: int = 1,
    subsample: float = 1.0,
) -> GbtModel:
    """Fit ``stage_count`` regression trees to logistic-loss residuals.

    The model starts from the prior log-odds of the training labels.

    Raises:
        HdsFallcastConfigError: On negative counts or rates, or ``subsample`` outside (0, 1].
        HdsFallcastDataError: If ``pairs`` holds a single class.
    """
    if stage_count < 0 or learning_rate < 0 or l2_reg < 0 or max_depth < 1 or not 0 < subsample <= 1:
        raise HdsFallcastConfigError(
            "invalid boosting hyperparameters",
            error_code="invalid-gbt",
            details={
                "stage_count": stage_count,
                "learning_rate": learning_rate,
                "l2_reg": l2_reg,
                "max_depth": max_depth,
                "subsample": subsample,
            },
        )
    x, y = _arrays(pairs)
    _require_both_classes(y, "gbt")
    prior = float(y.mean())
    init_logit = math.log(prior / (1.0 - prior))

    def leaf_value(residual: np.ndarray) -> float:
        return float(residual.sum() / (len(residual) + l2_reg))

    rng = substream(seed, "gbt")
    logits = np.full(len(y), init_logit)
    stages = []
    for _ in range(stage_count):
        residual = y - _logistic(logits)
        if subsample < 1.0:
            rows = rng.random(len(y)) < subsample
            if not rows.any():
                rows[rng.integers(0, len(y))] = True
            stage = _grow(x[rows], residual[rows], 0, max_depth, "squared", 1, leaf_value)
        else:
            stage = _grow(x, residual, 0, max_depth, "squared", 1, leaf_value)
        stages.append(stage)
        logits = logits + learning_rate * np.array([stage.evaluate(v) for v in x])

    return GbtModel(
        init_logit=init_logit,
        stages=tuple(stages),
        learning_rate=learning_rate,
        stage_count=stage_count,
        l2_reg=l2_reg,
    )


def gbt_predict(m: GbtModel, x_last: int) -> Prediction:
    """Logistic of the staged logit."""
    prob = float(_logistic(m.logit(float(x_last))))
    return Prediction(label=FALL if prob >= 0.5 else NO_FALL, prob_fall=prob)
