"""Random hyperparameter search scored by validation AUC.

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from splurge_pub_sub import PubSubSolo

from .constants import DEFAULT_S_MAX, DEFAULT_S_MIN, EVENT_SCOPE
from .evaluation import roc_auc
from .exceptions import HdsFallcastConfigError
from .hds_core import Encounter, ScaleConfig
from .models import SEQUENCE_KINDS, ModelSpec
from .seeding import substream

logger = logging.getLogger(__name__)

_SEQUENCE_SPACE: dict[str, tuple[Any, ...]] = {"hidden_size": (32, 64, 128, 256), "lr0": (0.1, 0.01)}

DEFAULT_SPACES: dict[str, dict[str, tuple[Any, ...]]] = {
    "threshold": {"theta": tuple(range(DEFAULT_S_MIN, DEFAULT_S_MAX + 1))},
    "knn": {"k": tuple(range(1, 11))},
    "forest": {"tree_count": (100, 200, 300, 400, 500)},
    "gbt": {"stage_count": (100, 200, 300, 400, 500)},
    **{kind: _SEQUENCE_SPACE for kind in SEQUENCE_KINDS},
}


@dataclass(frozen=True)
class Trial:
    index: int
    settings: dict[str, Any]
    score: float


@dataclass(frozen=True)
class SearchResult:
    """Best spec found plus every trial in the order run."""

    best: ModelSpec
    best_score: float
    trials: tuple[Trial, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "best": self.best.to_dict(),
            "best_score": self.best_score,
            "trials": [{"index": t.index, "settings": t.settings, "score": t.score} for t in self.trials],
        }


def random_search(
    base: ModelSpec,
    space: Mapping[str, Sequence[Any]] | None,
    train: Sequence[Encounter],
    validation: Sequence[Encounter],
    scale: ScaleConfig,
    trials: int = 10,
    seed: int = 0,
    *,
    correlation_id: str | None = None,
) -> SearchResult:
    """Sample ``trials`` settings from ``space`` and keep the best validation AUC.

    Each candidate is ``base`` updated with one value drawn per key. Scalar
    candidates fit on ``train`` alone; recurrent ones early-stop on
    ``validation``. Ties keep the earlier trial.

    Raises:
        HdsFallcastConfigError: If ``trials < 1`` or the space is empty.
    """
    space = DEFAULT_SPACES[base.kind] if space is None else space
    if trials < 1 or not space or any(len(values) == 0 for values in space.values()):
        raise HdsFallcastConfigError(
            "random search needs trials >= 1 and a non-empty value list per key",
            error_code="invalid-search",
            details={"trials": trials, "keys": sorted(space)},
        )
    rng = substream(seed, "tuning", base.kind)
    # scalar adapters fit on train and validation together
    fit_validation = validation if base.kind in SEQUENCE_KINDS else ()
    truth = [e.outcome for e in validation]
    results: list[Trial] = []
    best: tuple[float, ModelSpec] | None = None

    for index in range(trials):
        settings = {key: values[int(rng.integers(len(values)))] for key, values in sorted(space.items())}
        spec = base.with_settings(**settings)
        predictor = spec(index)
        predictor.fit(train, fit_validation, scale)
        scores = [p.prob_fall for p in predictor.predict_many(validation)]
        score = roc_auc(scores, truth).auc
        results.append(Trial(index=index, settings=settings, score=score))
        logger.debug("trial %d %s: auc %.4f", index, settings, score)
        PubSubSolo.publish(
            topic="hds.tuning.trial",
            data={"kind": base.kind, "index": index, "settings": settings, "score": score},
            correlation_id=correlation_id,
            scope=EVENT_SCOPE,
        )
        if best is None or score > best[0]:
            best = (score, spec)

    assert best is not None
    return SearchResult(best=best[1], best_score=best[0], trials=tuple(results))
