"""Unit tests for the domain types and dataset derivations."""

import numpy as np
import pytest

from hds_fallcast.exceptions import HdsFallcastConfigError, HdsFallcastDataError, HdsFallcastValueError
from hds_fallcast.hds_core import (
    Dataset,
    ScaleConfig,
    denormalize,
    derive_onestep_pairs,
    derive_sequence,
    validate_dataset,
)
from tests.conftest import make_encounter


class TestScaleConfig:
    """Validation of the score scale."""

    def test_defaults(self) -> None:
        scale = ScaleConfig()
        assert (scale.s_min, scale.s_max, scale.delta_t_hours) == (0, 30, 8.0)
        assert scale.span == 30

    @pytest.mark.parametrize("s_min,s_max", [(5, 5), (10, 3)])
    def test_rejects_empty_range(self, s_min: int, s_max: int) -> None:
        with pytest.raises(HdsFallcastConfigError) as info:
            ScaleConfig(s_min=s_min, s_max=s_max)
        assert info.value.error_code == "invalid-scale"

    @pytest.mark.parametrize("delta", [0.0, -8.0, float("inf")])
    def test_rejects_bad_interval(self, delta: float) -> None:
        with pytest.raises(HdsFallcastConfigError):
            ScaleConfig(delta_t_hours=delta)

    def test_rejects_non_integer_bounds(self) -> None:
        with pytest.raises(HdsFallcastConfigError):
            ScaleConfig(s_min=0.5, s_max=30)  # type: ignore[arg-type]

    def test_contains_is_inclusive(self) -> None:
        scale = ScaleConfig()
        assert scale.contains(0) and scale.contains(30)
        assert not scale.contains(-1) and not scale.contains(31)


class TestValidateDataset:
    """Violations are reported, never raised."""

    def test_well_formed_dataset(self, small_dataset: Dataset) -> None:
        assert validate_dataset(small_dataset) == []

    def test_empty_series(self) -> None:
        d = Dataset.of([make_encounter("x", (), 0, 1)])
        violations = validate_dataset(d)
        assert [v.rule for v in violations] == ["empty-series"]
        assert violations[0].encounter_id == "x"

    def test_out_of_range_score(self) -> None:
        d = Dataset.of([make_encounter("x", (3, 999), 1)])
        violations = validate_dataset(d)
        assert [v.rule for v in violations] == ["score-out-of-range"]

    def test_duplicate_ids(self) -> None:
        d = Dataset.of([make_encounter("x", (3,), 1), make_encounter("x", (4,), 0)])
        assert [v.rule for v in validate_dataset(d)] == ["duplicate-id"]

    def test_bad_outcome_and_origin(self) -> None:
        d = Dataset.of([make_encounter("x", (3, 4), 2, 5)])
        assert {v.rule for v in validate_dataset(d)} == {"invalid-outcome", "origin-out-of-range"}

    def test_non_integer_score(self) -> None:
        d = Dataset.of([make_encounter("x", (3, 4.5), 0)])  # type: ignore[arg-type]
        assert [v.rule for v in validate_dataset(d)] == ["non-integer-score"]

    def test_every_problem_is_reported(self) -> None:
        d = Dataset.of([make_encounter("x", (), 0, 1), make_encounter("y", (40, 50), 1)])
        assert len(validate_dataset(d)) == 3


class TestDerivations:
    """One-step pairs, normalised histories and their inverse."""

    def test_onestep_pair_uses_origin(self) -> None:
        d = Dataset.of([make_encounter("a", (4, 9, 15), 1, 3)])
        assert derive_onestep_pairs(d) == [(15, 1)]

    def test_onestep_single_sample(self) -> None:
        assert derive_onestep_pairs(Dataset.of([make_encounter("a", (7,), 0, 1)])) == [(7, 0)]

    def test_onestep_empty(self) -> None:
        assert derive_onestep_pairs(Dataset.of([])) == []

    def test_onestep_preserves_order(self, small_dataset: Dataset) -> None:
        assert derive_onestep_pairs(small_dataset) == [(15, 1), (7, 0), (11, 0)]

    def test_onestep_rejects_bad_origin(self) -> None:
        with pytest.raises(HdsFallcastDataError) as info:
            derive_onestep_pairs([make_encounter("bad", (1, 2), 0, 3)])
        assert info.value.details["encounter_id"] == "bad"

    def test_sequence_endpoints(self) -> None:
        seq = derive_sequence(make_encounter("a", (0, 30), 0, 2), ScaleConfig())
        assert seq.tolist() == [0.0, 1.0]

    def test_sequence_midpoint(self) -> None:
        assert derive_sequence(make_encounter("a", (15,), 0), ScaleConfig()).tolist() == [0.5]

    def test_sequence_stops_at_origin(self) -> None:
        seq = derive_sequence(make_encounter("a", (3, 6, 9, 30), 1, 2), ScaleConfig(s_min=0, s_max=30))
        assert seq.tolist() == [0.1, 0.2]

    def test_constant_series_maps_to_equal_values(self) -> None:
        seq = derive_sequence(make_encounter("a", (7, 7, 7), 0), ScaleConfig())
        assert len(set(seq.tolist())) == 1

    def test_denormalize_recovers_scores(self) -> None:
        scale = ScaleConfig(s_min=-3, s_max=17)
        e = make_encounter("a", (-3, 0, 5, 17, 11), 0)
        assert denormalize(derive_sequence(e, scale), scale) == e.series.scores

    def test_denormalize_rejects_nan(self) -> None:
        with pytest.raises(HdsFallcastValueError):
            denormalize(np.array([0.5, np.nan]), ScaleConfig())


class TestDataset:
    """Id lookups."""

    def test_class_ids(self, small_dataset: Dataset) -> None:
        assert small_dataset.fall_ids() == ["a"]
        assert small_dataset.nofall_ids() == ["b", "c"]

    def test_subset_keeps_requested_order(self, small_dataset: Dataset) -> None:
        assert small_dataset.subset(["c", "a"]).ids() == ["c", "a"]

    def test_unknown_id(self, small_dataset: Dataset) -> None:
        with pytest.raises(HdsFallcastDataError) as info:
            small_dataset.by_id(["nope"])
        assert info.value.error_code == "unknown-encounter"
