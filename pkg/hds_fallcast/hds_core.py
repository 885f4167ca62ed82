"""Domain types and dataset derivations shared by every model family.

An encounter is one hospital admission: an HDS series sampled every
``delta_t_hours``, a binary fall outcome, and the prediction origin (the
last observed index whose history feeds the prediction for the next
interval). Types are frozen dataclasses holding tuples, so they can be
shared between workers without copying or locking.

Validation is deliberately separate from construction: ``validate_dataset``
reports every violated invariant as data so loaders can surface all
problems at once.

Public API:
    - ScaleConfig, HdsSeries, Encounter, Dataset, Prediction, Violation
    - validate_dataset, derive_onestep_pairs, derive_sequence, denormalize

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from .constants import DEFAULT_DELTA_T_HOURS, DEFAULT_S_MAX, DEFAULT_S_MIN, FALL, NO_FALL
from .exceptions import HdsFallcastConfigError, HdsFallcastDataError, HdsFallcastValueError


@dataclass(frozen=True)
class ScaleConfig:
    """Numeric range of the score and its sampling interval.

    Args:
        s_min: Integer HDS floor.
        s_max: Integer HDS ceiling.
        delta_t_hours: Hours between consecutive assessments.

    Raises:
        HdsFallcastConfigError: If ``s_min >= s_max`` or ``delta_t_hours <= 0``.
    """

    s_min: int = DEFAULT_S_MIN
    s_max: int = DEFAULT_S_MAX
    delta_t_hours: float = DEFAULT_DELTA_T_HOURS

    def __post_init__(self) -> None:
        bounds = (self.s_min, self.s_max)
        if any(isinstance(b, bool) or not isinstance(b, int) for b in bounds):
            raise HdsFallcastConfigError(
                "s_min and s_max must be integers",
                error_code="invalid-scale",
                details={"s_min": self.s_min, "s_max": self.s_max},
            )
        if self.s_min >= self.s_max:
            raise HdsFallcastConfigError(
                f"s_min must be below s_max, got {self.s_min} >= {self.s_max}",
                error_code="invalid-scale",
                details={"s_min": self.s_min, "s_max": self.s_max},
            )
        if not (self.delta_t_hours > 0 and math.isfinite(self.delta_t_hours)):
            raise HdsFallcastConfigError(
                f"delta_t_hours must be positive, got {self.delta_t_hours}",
                error_code="invalid-scale",
                details={"delta_t_hours": self.delta_t_hours},
            )

    @property
    def span(self) -> int:
        return self.s_max - self.s_min

    def contains(self, score: int) -> bool:
        return self.s_min <= score <= self.s_max

    def to_dict(self) -> dict[str, int | float]:
        return {"s_min": self.s_min, "s_max": self.s_max, "delta_t_hours": float(self.delta_t_hours)}


@dataclass(frozen=True)
class HdsSeries:
    """Chronological HDS values of one encounter, one per ``delta_t_hours``."""

    encounter_id: str
    scores: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class Encounter:
    """An HDS series with its outcome and prediction origin.

    ``origin`` is 1-based: ``scores[origin - 1]`` is the last value used to
    predict the outcome at the following interval.
    """

    series: HdsSeries
    outcome: int
    origin: int

    @property
    def encounter_id(self) -> str:
        return self.series.encounter_id

    @property
    def x_last(self) -> int:
        """Score at the prediction origin."""
        if not 1 <= self.origin <= len(self.series.scores):
            raise HdsFallcastDataError(
                f"Encounter '{self.encounter_id}' has origin {self.origin} outside 1..{len(self.series.scores)}",
                error_code="origin-out-of-range",
                details={"encounter_id": self.encounter_id, "origin": self.origin},
            )
        return self.series.scores[self.origin - 1]


@dataclass(frozen=True)
class Prediction:
    """Binary label plus the fall score used for ranking (ROC)."""

    label: int
    prob_fall: float


@dataclass(frozen=True)
class Violation:
    """One broken invariant, reported by :func:`validate_dataset`."""

    encounter_id: str
    rule: str
    message: str


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of encounters on a common scale."""

    encounters: tuple[Encounter, ...]
    scale: ScaleConfig = field(default_factory=ScaleConfig)

    def __len__(self) -> int:
        return len(self.encounters)

    def __iter__(self) -> Iterator[Encounter]:
        return iter(self.encounters)

    @classmethod
    def of(cls, encounters: Iterable[Encounter], scale: ScaleConfig | None = None) -> Dataset:
        return cls(encounters=tuple(encounters), scale=scale or ScaleConfig())

    def ids(self) -> list[str]:
        return [e.encounter_id for e in self.encounters]

    def fall_ids(self) -> list[str]:
        return [e.encounter_id for e in self.encounters if e.outcome == FALL]

    def nofall_ids(self) -> list[str]:
        return [e.encounter_id for e in self.encounters if e.outcome == NO_FALL]

    def by_id(self, ids: Iterable[str]) -> list[Encounter]:
        """Return encounters for ``ids`` in the order given.

        Raises:
            HdsFallcastDataError: If an id is unknown.
        """
        index = {e.encounter_id: e for e in self.encounters}
        selected = []
        for encounter_id in ids:
            if encounter_id not in index:
                raise HdsFallcastDataError(
                    f"Unknown encounter id '{encounter_id}'",
                    error_code="unknown-encounter",
                    details={"encounter_id": encounter_id},
                )
            selected.append(index[encounter_id])
        return selected

    def subset(self, ids: Iterable[str]) -> Dataset:
        return Dataset(encounters=tuple(self.by_id(ids)), scale=self.scale)


def validate_dataset(d: Dataset) -> list[Violation]:
    """Check every type invariant of ``d``.

    Violations are returned, never raised. The list is empty iff the
    dataset is well formed.

    Args:
        d: Dataset to check.

    Returns:
        One :class:`Violation` per broken rule, in dataset order.
    """
    violations: list[Violation] = []
    seen: set[str] = set()
    scale = d.scale

    for encounter in d.encounters:
        eid = encounter.encounter_id
        scores = encounter.series.scores

        if eid in seen:
            violations.append(Violation(eid, "duplicate-id", f"encounter id '{eid}' appears more than once"))
        seen.add(eid)

        if len(scores) == 0:
            violations.append(Violation(eid, "empty-series", "score list is empty"))

        for position, score in enumerate(scores, start=1):
            if isinstance(score, bool) or not isinstance(score, (int, np.integer)):
                violations.append(Violation(eid, "non-integer-score", f"score {score!r} at index {position}"))
            elif not scale.contains(int(score)):
                violations.append(
                    Violation(
                        eid,
                        "score-out-of-range",
                        f"score {score} at index {position} outside [{scale.s_min}, {scale.s_max}]",
                    )
                )

        if encounter.outcome not in (NO_FALL, FALL):
            violations.append(Violation(eid, "invalid-outcome", f"outcome {encounter.outcome!r} is not 0 or 1"))

        if len(scores) > 0 and not 1 <= encounter.origin <= len(scores):
            violations.append(
                Violation(eid, "origin-out-of-range", f"origin {encounter.origin} outside 1..{len(scores)}")
            )

    return violations


def derive_onestep_pairs(d: Dataset | Sequence[Encounter]) -> list[tuple[int, int]]:
    """Pair each encounter's score at the origin with its outcome.

    Args:
        d: A validated dataset, or any sequence of encounters.

    Returns:
        ``(x_last, y)`` per encounter, in input order.

    Raises:
        HdsFallcastDataError: If an encounter's origin is out of range.
    """
    encounters = d.encounters if isinstance(d, Dataset) else d
    return [(encounter.x_last, encounter.outcome) for encounter in encounters]


def derive_sequence(e: Encounter, scale: ScaleConfig) -> np.ndarray:
    """Min-max normalise the history ``scores[1..origin]`` into [0, 1].

    Args:
        e: A validated encounter.
        scale: Scale the scores live on.

    Returns:
        Float array of length ``origin``.
    """
    history = np.asarray(e.series.scores[: e.origin], dtype=np.float64)
    return (history - scale.s_min) / scale.span


def denormalize(values: Sequence[float] | np.ndarray, scale: ScaleConfig) -> tuple[int, ...]:
    """Map normalised values back onto integer scores.

    Raises:
        HdsFallcastValueError: If a value is not finite.
    """
    array = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(array)):
        raise HdsFallcastValueError("cannot denormalize non-finite values", error_code="non-finite")
    return tuple(int(v) for v in np.rint(array * scale.span + scale.s_min))
