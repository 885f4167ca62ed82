"""Unit tests for the synthetic encounter generator."""

import pytest

from hds_fallcast.encounter_io import format_csv
from hds_fallcast.evaluation import roc_auc
from hds_fallcast.exceptions import HdsFallcastConfigError
from hds_fallcast.hds_core import ScaleConfig, validate_dataset
from hds_fallcast.synth import SynthConfig, generate


class TestSynthConfig:
    """Settings validation and dictionary form."""

    def test_defaults(self) -> None:
        c = SynthConfig()
        assert (c.n_fall, c.n_nofall) == (425, 4250)
        assert (c.trend_slope, c.noise_std) == (1.0, 1.5)

    @pytest.mark.parametrize(
        "settings",
        [
            {"n_fall": -1},
            {"noise_std": -0.5},
            {"trend_slope": -1.0},
            {"min_length": 1},
            {"min_length": 8, "max_length": 6},
        ],
    )
    def test_invalid(self, settings: dict) -> None:
        with pytest.raises(HdsFallcastConfigError) as info:
            SynthConfig(**settings)
        assert info.value.error_code == "invalid-synth-config"

    def test_from_dict_round_trip(self) -> None:
        c = SynthConfig(n_fall=3, n_nofall=9, scale=ScaleConfig(s_min=0, s_max=40))
        assert SynthConfig.from_dict(c.to_dict()) == c

    def test_from_dict_unknown_key(self) -> None:
        with pytest.raises(HdsFallcastConfigError) as info:
            SynthConfig.from_dict({"n_falls": 3})
        assert info.value.error_code == "unknown-key"


class TestGenerate:
    """Shape and determinism of generated cohorts."""

    def test_degenerate_generator_is_constant(self) -> None:
        c = SynthConfig(n_fall=5, n_nofall=5, trend_slope=0.0, noise_std=0.0, baseline_std=0.0, baseline_mean=10.0)
        for encounter in generate(c):
            assert set(encounter.series.scores) == {10}

    def test_no_falls(self) -> None:
        d = generate(SynthConfig(n_fall=0, n_nofall=12))
        assert len(d) == 12
        assert d.fall_ids() == []

    def test_class_counts_and_ids(self) -> None:
        d = generate(SynthConfig(n_fall=7, n_nofall=21, seed=3))
        assert len(d.fall_ids()) == 7 and len(d.nofall_ids()) == 21
        assert d.ids()[0] == "enc-000001" and d.ids()[-1] == "enc-000028"

    def test_output_is_valid(self) -> None:
        c = SynthConfig(n_fall=30, n_nofall=30, baseline_mean=28.0, trend_slope=3.0, seed=1)
        d = generate(c)
        assert validate_dataset(d) == []
        assert max(max(e.series.scores) for e in d) <= 30

    def test_lengths_and_origins(self) -> None:
        c = SynthConfig(n_fall=20, n_nofall=20, min_length=5, max_length=9, seed=2)
        for encounter in generate(c):
            length = len(encounter.series)
            assert 5 <= length <= 9
            assert encounter.origin == (length - 1 if encounter.outcome == 1 else length)

    def test_fall_series_drift_upward(self) -> None:
        c = SynthConfig(n_fall=10, n_nofall=0, noise_std=0.0, baseline_std=0.0, baseline_mean=2.0, trend_slope=1.0)
        for encounter in generate(c):
            scores = encounter.series.scores
            assert list(scores) == list(range(2, 2 + len(scores)))

    def test_same_seed_same_bytes(self) -> None:
        c = SynthConfig(n_fall=15, n_nofall=60, seed=42)
        assert format_csv(generate(c)) == format_csv(generate(c))

    def test_seed_changes_output(self) -> None:
        assert format_csv(generate(SynthConfig(n_fall=15, n_nofall=60, seed=1))) != format_csv(
            generate(SynthConfig(n_fall=15, n_nofall=60, seed=2))
        )

    def test_planted_trend_is_detectable_from_last_score(self) -> None:
        d = generate(SynthConfig(n_fall=100, n_nofall=400, noise_std=0.3, seed=5))
        encounters = list(d)
        curve = roc_auc([float(e.x_last) for e in encounters], [e.outcome for e in encounters])
        assert curve.auc >= 0.7
