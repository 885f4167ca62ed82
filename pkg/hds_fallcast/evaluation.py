"""Metrics, ROC/AUC and the balanced cross-validation harness.

Folds follow the balanced sampling protocol: each fold's test set holds
``floor(0.10 * m)`` encounters of each class (``m`` = minority-class size),
minority-class test sets partition that class across folds, majority-class
test encounters are resampled independently per fold, and the training pool
keeps every remaining minority encounter plus an equal-sized random draw
from the majority. A class-stratified 10% of the pool is held out as the
validation split.

Public API:
    - ConfusionCounts, MetricSet, confusion, metrics
    - RocCurve, roc_auc, write_roc_csv
    - FoldSplit, make_folds, balanced_split
    - FoldOutcome, MetricsReport, format_table, run_folds, cross_validate

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np
from splurge_pub_sub import PubSubSolo

from .constants import EVENT_SCOPE, FALL, NO_FALL
from .encounter_io import write_text_atomic
from .exceptions import HdsFallcastDataError, HdsFallcastError, HdsFallcastValueError
from .hds_core import Dataset
from .seeding import substream

if TYPE_CHECKING:
    from .models import FallPredictor

logger = logging.getLogger(__name__)

METRIC_NAMES = ("accuracy", "f1", "specificity", "sensitivity", "ppv", "auc")
TEST_FRACTION = 0.10
VALIDATION_FRACTION = 0.10


@dataclass(frozen=True)
class ConfusionCounts:
    """Tallies of a binary confusion table."""

    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.tn + self.fp


@dataclass(frozen=True)
class MetricSet:
    """Threshold metrics of one confusion table."""

    accuracy: float
    f1: float
    tnr: float
    tpr: float
    ppv: float


def confusion(preds: Sequence[int], truth: Sequence[int]) -> ConfusionCounts:
    """Tally predicted against true labels.

    Raises:
        HdsFallcastValueError: If the sequences differ in length.
    """
    if len(preds) != len(truth):
        raise HdsFallcastValueError(
            f"preds and truth differ in length ({len(preds)} != {len(truth)})",
            error_code="length-mismatch",
        )
    tp = tn = fp = fn = 0
    for p, t in zip(preds, truth):
        if t == FALL:
            if p == FALL:
                tp += 1
            else:
                fn += 1
        elif p == FALL:
            fp += 1
        else:
            tn += 1
    return ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)


def metrics(c: ConfusionCounts) -> MetricSet:
    """Accuracy, F1, specificity, sensitivity and PPV of ``c``.

    A ratio whose denominator is zero reports 0.0.

    Raises:
        HdsFallcastValueError: If the table is empty.
    """
    total = c.positives + c.negatives
    if total == 0:
        raise HdsFallcastValueError("metrics need at least one labelled example", error_code="empty-confusion")

    def ratio(num: int, den: int) -> float:
        return num / den if den else 0.0

    return MetricSet(
        accuracy=(c.tp + c.tn) / total,
        f1=ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn),
        tnr=ratio(c.tn, c.tn + c.fp),
        tpr=ratio(c.tp, c.tp + c.fn),
        ppv=ratio(c.tp, c.tp + c.fp),
    )


@dataclass(frozen=True)
class RocCurve:
    """ROC operating points ``(threshold, fpr, tpr)`` and the area under them.

    The first point is ``(inf, 0, 0)``; thresholds then descend through the
    distinct scores, so the last point is ``(min score, 1, 1)``.
    """

    auc: float
    points: tuple[tuple[float, float, float], ...]


def roc_auc(scores: Sequence[float], truth: Sequence[int]) -> RocCurve:
    """Build the ROC curve by a descending-score sweep.

    Tied scores form a single step, so the trapezoid area equals the
    Mann-Whitney statistic with ties counted one half. The area is summed
    in integer units and divided once, making it exact.

    Raises:
        HdsFallcastValueError: On length mismatch.
        HdsFallcastDataError: If ``truth`` lacks one of the classes.
    """
    if len(scores) != len(truth):
        raise HdsFallcastValueError(
            f"scores and truth differ in length ({len(scores)} != {len(truth)})",
            error_code="length-mismatch",
        )
    y = np.asarray(truth, dtype=np.int64)
    s = np.asarray(scores, dtype=np.float64)
    n_pos = int(np.sum(y == FALL))
    n_neg = int(np.sum(y == NO_FALL))
    if n_pos == 0 or n_neg == 0:
        raise HdsFallcastDataError(
            "ROC needs at least one fall and one non-fall example",
            error_code="single-class",
            details={"positives": n_pos, "negatives": n_neg},
        )

    order = np.argsort(-s, kind="mergesort")
    s, y = s[order], y[order]
    # last index of every tie group
    group_ends = np.flatnonzero(np.diff(s) != 0).tolist() + [len(s) - 1]
    tp_cum = np.cumsum(y == FALL)
    fp_cum = np.cumsum(y == NO_FALL)

    points = [(math.inf, 0.0, 0.0)]
    twice_area = 0
    prev_tp = prev_fp = 0
    for end in group_ends:
        tp, fp = int(tp_cum[end]), int(fp_cum[end])
        twice_area += (fp - prev_fp) * (tp + prev_tp)
        points.append((float(s[end]), fp / n_neg, tp / n_pos))
        prev_tp, prev_fp = tp, fp

    return RocCurve(auc=twice_area / (2 * n_pos * n_neg), points=tuple(points))


@dataclass(frozen=True)
class FoldSplit:
    """Encounter ids of one fold.

    ``train_ids`` and ``validation_ids`` together form the balanced training
    pool; ``test_ids`` is balanced and may be empty for hold-out splits.
    """

    fold_index: int
    train_ids: tuple[str, ...]
    validation_ids: tuple[str, ...]
    test_ids: tuple[str, ...]


def _class_ids(d: Dataset) -> tuple[list[str], list[str]]:
    """Return ``(minority, majority)`` id lists; falls count as minority on ties."""
    falls, nofalls = d.fall_ids(), d.nofall_ids()
    return (falls, nofalls) if len(falls) <= len(nofalls) else (nofalls, falls)


def _stratified_validation(
    minority: Sequence[str], majority: Sequence[str], rng: np.random.Generator, fraction: float
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    train: list[str] = []
    validation: list[str] = []
    for ids in (minority, majority):
        shuffled = [ids[i] for i in rng.permutation(len(ids))]
        n_val = max(1, math.floor(fraction * len(shuffled))) if len(shuffled) >= 2 else 0
        validation.extend(shuffled[:n_val])
        train.extend(shuffled[n_val:])
    return tuple(train), tuple(validation)


def make_folds(d: Dataset, k: int = 10, seed: int = 0) -> list[FoldSplit]:
    """Construct ``k`` balanced folds.

    Args:
        d: Dataset to split.
        k: Number of folds.
        seed: Root seed; folds draw from its ``"folds"`` sub-stream.

    Returns:
        ``k`` fold splits, deterministic under ``seed``.

    Raises:
        HdsFallcastDataError: If a class has fewer than ``k`` encounters or is
            too small to give every fold a non-empty disjoint test share.
    """
    if k < 1:
        raise HdsFallcastValueError(f"k must be positive, got {k}", error_code="invalid-k")
    minority, majority = _class_ids(d)
    n_test = math.floor(TEST_FRACTION * len(minority))
    if len(minority) < k or n_test < 1 or n_test * k > len(minority):
        raise HdsFallcastDataError(
            f"class sizes {len(d.fall_ids())} fall / {len(d.nofall_ids())} non-fall are too small for {k} folds",
            error_code="class-too-small",
            details={"fall": len(d.fall_ids()), "nofall": len(d.nofall_ids()), "k": k},
        )

    rng = substream(seed, "folds")
    minority_order = [minority[i] for i in rng.permutation(len(minority))]

    folds = []
    for fold_index in range(k):
        test_minority = minority_order[fold_index * n_test : (fold_index + 1) * n_test]
        picked = set(test_minority)
        remaining_minority = [i for i in minority_order if i not in picked]

        majority_perm = [majority[i] for i in rng.permutation(len(majority))]
        test_majority = majority_perm[:n_test]
        pool_majority = majority_perm[n_test : n_test + len(remaining_minority)]

        train, validation = _stratified_validation(remaining_minority, pool_majority, rng, VALIDATION_FRACTION)
        folds.append(
            FoldSplit(
                fold_index=fold_index,
                train_ids=train,
                validation_ids=validation,
                test_ids=tuple(test_minority + test_majority),
            )
        )
    return folds


def balanced_split(d: Dataset, seed: int = 0, validation_fraction: float = VALIDATION_FRACTION) -> FoldSplit:
    """Balance the whole dataset by majority subsampling and hold out a stratified validation split.

    Raises:
        HdsFallcastDataError: If either class is empty.
    """
    minority, majority = _class_ids(d)
    if not minority:
        raise HdsFallcastDataError("both classes are required", error_code="single-class")
    rng = substream(seed, "holdout")
    pool_majority = [majority[i] for i in rng.permutation(len(majority))][: len(minority)]
    train, validation = _stratified_validation(minority, pool_majority, rng, validation_fraction)
    return FoldSplit(fold_index=0, train_ids=train, validation_ids=validation, test_ids=())


@dataclass(frozen=True)
class FoldOutcome:
    """Test-set predictions and metrics of one fold."""

    fold_index: int
    truth: tuple[int, ...]
    labels: tuple[int, ...]
    scores: tuple[float, ...]
    values: dict[str, float]


@dataclass(frozen=True)
class MetricsReport:
    """Per-fold metrics with their mean and population standard deviation."""

    model: str
    folds: tuple[dict[str, float], ...]
    mean: dict[str, float]
    std: dict[str, float]

    @classmethod
    def from_outcomes(cls, model: str, outcomes: Sequence[FoldOutcome]) -> MetricsReport:
        per_fold = tuple({"fold_index": o.fold_index, **o.values} for o in outcomes)
        mean = {name: float(np.mean([o.values[name] for o in outcomes])) for name in METRIC_NAMES}
        std = {name: float(np.std([o.values[name] for o in outcomes], ddof=0)) for name in METRIC_NAMES}
        return cls(model=model, folds=per_fold, mean=mean, std=std)

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "folds": [dict(f) for f in self.folds],
            "aggregate": {name: {"mean": self.mean[name], "std": self.std[name]} for name in METRIC_NAMES},
        }

    def format_row(self) -> str:
        """One table row: ``model | 0.57±0.01 | ...``."""
        cells = [f"{self.mean[n]:.2f}±{self.std[n]:.2f}" for n in METRIC_NAMES]
        return " | ".join([self.model, *cells])


def format_table(reports: Sequence[MetricsReport]) -> str:
    """Render reports as a pipe table with an ``Avg.±Std.`` cell per metric."""
    lines = [" | ".join(["model", *METRIC_NAMES])]
    lines.extend(report.format_row() for report in reports)
    return "\n".join(lines) + "\n"


def write_roc_csv(path: Path | str, curve: RocCurve) -> None:
    """Write ``threshold,fpr,tpr`` rows atomically."""
    lines = ["threshold,fpr,tpr"]
    lines.extend(f"{t!r},{fpr!r},{tpr!r}" for t, fpr, tpr in curve.points)
    write_text_atomic(path, "\n".join(lines) + "\n")


def _evaluate_fold(
    factory: Callable[[int], FallPredictor], d: Dataset, fold: FoldSplit, correlation_id: str | None
) -> FoldOutcome:
    PubSubSolo.publish(
        topic="hds.eval.fold.begin",
        data={"fold_index": fold.fold_index},
        correlation_id=correlation_id,
        scope=EVENT_SCOPE,
    )
    try:
        model = factory(fold.fold_index)
        model.fit(d.by_id(fold.train_ids), d.by_id(fold.validation_ids), d.scale)
        test = d.by_id(fold.test_ids)
        predictions = model.predict_many(test)
    except HdsFallcastError as e:
        PubSubSolo.publish(
            topic="hds.eval.fold.error",
            data={"fold_index": fold.fold_index, "error": e},
            correlation_id=correlation_id,
            scope=EVENT_SCOPE,
        )
        e.attach_context(key="fold_index", value=fold.fold_index)
        raise

    truth = tuple(e.outcome for e in test)
    labels = tuple(p.label for p in predictions)
    scores = tuple(p.prob_fall for p in predictions)
    m = metrics(confusion(labels, truth))
    values = {
        "accuracy": m.accuracy,
        "f1": m.f1,
        "specificity": m.tnr,
        "sensitivity": m.tpr,
        "ppv": m.ppv,
        "auc": roc_auc(scores, truth).auc,
    }
    logger.debug("fold %d: %s", fold.fold_index, values)
    PubSubSolo.publish(
        topic="hds.eval.fold.end",
        data={"fold_index": fold.fold_index, "metrics": values},
        correlation_id=correlation_id,
        scope=EVENT_SCOPE,
    )
    return FoldOutcome(fold_index=fold.fold_index, truth=truth, labels=labels, scores=scores, values=values)


def run_folds(
    factory: Callable[[int], FallPredictor],
    d: Dataset,
    folds: Sequence[FoldSplit],
    *,
    workers: int = 1,
    correlation_id: str | None = None,
) -> list[FoldOutcome]:
    """Train a fresh model per fold and evaluate it on the fold's test set.

    With ``workers > 1`` folds run in worker processes (``factory`` must be
    picklable, as :class:`~hds_fallcast.models.ModelSpec` is). Outcomes are
    returned in fold order regardless of completion order.
    """
    if workers <= 1:
        return [_evaluate_fold(factory, d, fold, correlation_id) for fold in folds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_evaluate_fold, factory, d, fold, correlation_id) for fold in folds]
        return [f.result() for f in futures]


def cross_validate(
    factory: Callable[[int], FallPredictor],
    d: Dataset,
    k: int = 10,
    seed: int = 0,
    *,
    folds: Sequence[FoldSplit] | None = None,
    workers: int = 1,
    model_name: str | None = None,
    correlation_id: str | None = None,
) -> MetricsReport:
    """Run balanced k-fold cross-validation and aggregate the metrics.

    Args:
        factory: Called with the fold index; returns an unfitted predictor.
        d: Dataset.
        k: Number of folds (ignored when ``folds`` is given).
        seed: Root seed for fold construction.
        folds: Precomputed folds, shared when several models are compared.
        workers: Worker processes for fold-level parallelism.
        model_name: Report label; defaults to the factory's ``name`` attribute.
        correlation_id: Optional id attached to lifecycle events.

    Raises:
        HdsFallcastError: Any fold failure, with ``fold_index`` attached as context.
    """
    name = model_name or getattr(factory, "name", "model")
    if folds is None:
        folds = make_folds(d, k, seed)
    PubSubSolo.publish(
        topic="hds.eval.cv.begin",
        data={"model": name, "folds": len(folds)},
        correlation_id=correlation_id,
        scope=EVENT_SCOPE,
    )
    outcomes = run_folds(factory, d, folds, workers=workers, correlation_id=correlation_id)
    report = MetricsReport.from_outcomes(name, outcomes)
    PubSubSolo.publish(
        topic="hds.eval.cv.end",
        data={"model": name, "mean": report.mean},
        correlation_id=correlation_id,
        scope=EVENT_SCOPE,
    )
    return report
