"""Synthetic encounters standing in for a private clinical cohort.

Each encounter draws a stay length and a per-encounter baseline score;
every step adds Gaussian noise. Fall encounters also carry an upward drift
of ``trend_slope`` score units per step up to the fall, which is placed on
the final step, so their prediction origin is ``length - 1``. Non-fall
encounters are drift-free and predicted from their last step. Scores are
rounded and clamped onto the scale.

The generator's marginal distributions are placeholders, not clinical
estimates.

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np
from splurge_pub_sub import PubSubSolo

from .constants import EVENT_SCOPE, FALL, NO_FALL
from .exceptions import HdsFallcastConfigError
from .hds_core import Dataset, Encounter, HdsSeries, ScaleConfig
from .seeding import substream

logger = logging.getLogger(__name__)

ID_FORMAT = "enc-{:06d}"


@dataclass(frozen=True)
class SynthConfig:
    """Generator settings.

    Defaults mirror a 1:10 fall to non-fall cohort at a tenth of its size.

    Raises:
        HdsFallcastConfigError: If counts or spreads are negative, the slope is
            negative, or the length bounds are not ``2 <= min_length <= max_length``.
    """

    n_fall: int = 425
    n_nofall: int = 4250
    baseline_mean: float = 10.0
    baseline_std: float = 3.0
    trend_slope: float = 1.0
    noise_std: float = 1.5
    min_length: int = 4
    max_length: int = 20
    seed: int = 0
    scale: ScaleConfig = field(default_factory=ScaleConfig)

    def __post_init__(self) -> None:
        problems = []
        if self.n_fall < 0 or self.n_nofall < 0:
            problems.append("counts must be non-negative")
        if self.baseline_std < 0 or self.noise_std < 0:
            problems.append("standard deviations must be non-negative")
        if self.trend_slope < 0:
            problems.append("trend_slope must be non-negative")
        if not 2 <= self.min_length <= self.max_length:
            problems.append("lengths need 2 <= min_length <= max_length")
        if problems:
            raise HdsFallcastConfigError(
                "; ".join(problems), error_code="invalid-synth-config", details=self.to_dict()
            )

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["scale"] = self.scale.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SynthConfig:
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise HdsFallcastConfigError(
                f"unknown synth settings: {', '.join(sorted(unknown))}",
                error_code="unknown-key",
                details={"keys": sorted(unknown)},
            )
        values = dict(data)
        if "scale" in values and not isinstance(values["scale"], ScaleConfig):
            values["scale"] = ScaleConfig(**values["scale"])
        return cls(**values)


def _series(c: SynthConfig, rng: np.random.Generator, outcome: int) -> tuple[tuple[int, ...], int]:
    length = int(rng.integers(c.min_length, c.max_length + 1))
    baseline = rng.normal(c.baseline_mean, c.baseline_std) if c.baseline_std > 0 else c.baseline_mean
    steps = np.arange(length, dtype=np.float64)
    values = np.full(length, baseline)
    if c.noise_std > 0:
        values = values + rng.normal(0.0, c.noise_std, size=length)
    if outcome == FALL:
        values = values + c.trend_slope * steps
    scores = np.clip(np.rint(values), c.scale.s_min, c.scale.s_max).astype(int)
    origin = length - 1 if outcome == FALL else length
    return tuple(int(s) for s in scores), origin


def generate(c: SynthConfig, *, correlation_id: str | None = None) -> Dataset:
    """Draw ``c.n_fall + c.n_nofall`` encounters, classes shuffled together.

    Ids are ``enc-000001`` onwards in dataset order. The same config always
    yields the same dataset.
    """
    PubSubSolo.publish(
        topic="hds.synth.generate.begin", data=c.to_dict(), correlation_id=correlation_id, scope=EVENT_SCOPE
    )
    rng = substream(c.seed, "synth")
    outcomes = np.asarray([FALL] * c.n_fall + [NO_FALL] * c.n_nofall)[rng.permutation(c.n_fall + c.n_nofall)]
    encounters = []
    for index, outcome in enumerate(outcomes, start=1):
        scores, origin = _series(c, rng, int(outcome))
        encounters.append(Encounter(HdsSeries(ID_FORMAT.format(index), scores), int(outcome), origin))

    logger.debug("generated %d fall / %d non-fall encounters", c.n_fall, c.n_nofall)
    PubSubSolo.publish(
        topic="hds.synth.generate.end",
        data={"encounters": len(encounters)},
        correlation_id=correlation_id,
        scope=EVENT_SCOPE,
    )
    return Dataset.of(encounters, c.scale)
