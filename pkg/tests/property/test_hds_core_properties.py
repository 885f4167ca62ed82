"""
Property-based tests for the HDS data model, baselines and one-step derivations.
"""

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from hds_fallcast.baseline import knn_fit, knn_predict, threshold_sweep
from hds_fallcast.hds_core import (
    Dataset,
    ScaleConfig,
    denormalize,
    derive_onestep_pairs,
    derive_sequence,
    validate_dataset,
)
from tests.conftest import dataset_strategy, encounter_strategy, scale_strategy

pairs_strategy = st.lists(
    st.tuples(st.integers(min_value=0, max_value=30), st.sampled_from([0, 1])), min_size=1, max_size=40
)


class TestDerivationProperties:
    """Validation and derived views of generated datasets."""

    @given(d=dataset_strategy(max_size=8))
    def test_generated_datasets_are_valid(self, d: Dataset) -> None:
        assert validate_dataset(d) == []

    @given(d=dataset_strategy(max_size=8))
    def test_one_pair_per_encounter(self, d: Dataset) -> None:
        pairs = derive_onestep_pairs(d)
        assert len(pairs) == len(d)
        for (x, y), encounter in zip(pairs, d):
            assert d.scale.contains(x)
            assert y == encounter.outcome

    @given(data=st.data(), scale=scale_strategy())
    def test_sequence_normalisation(self, data: st.DataObject, scale: ScaleConfig) -> None:
        encounter = data.draw(encounter_strategy(scale))
        seq = derive_sequence(encounter, scale)
        history = encounter.series.scores[: encounter.origin]
        assert len(seq) == encounter.origin
        assert np.all((seq >= 0.0) & (seq <= 1.0))
        order = np.argsort(history, kind="stable")
        assert np.all(np.diff(seq[order]) >= 0)
        assert denormalize(seq, scale) == tuple(history)


class TestBaselineProperties:
    """Threshold monotonicity and k-NN invariance."""

    @given(pairs=pairs_strategy)
    def test_raising_theta_trades_sensitivity_for_specificity(self, pairs: list[tuple[int, int]]) -> None:
        rows = threshold_sweep(pairs, range(0, 32))
        for (_, _, low), (_, _, high) in zip(rows, rows[1:]):
            assert high.tpr <= low.tpr
            assert high.tnr >= low.tnr

    @given(
        pairs=pairs_strategy,
        query=st.integers(min_value=-5, max_value=35),
        k=st.integers(min_value=1, max_value=5),
        shift=st.integers(min_value=-100, max_value=100),
        stretch=st.integers(min_value=1, max_value=4),
    )
    def test_knn_invariant_under_affine_maps(
        self, pairs: list[tuple[int, int]], query: int, k: int, shift: int, stretch: int
    ) -> None:
        if k > len(pairs):
            k = len(pairs)
        moved = [(stretch * x + shift, y) for x, y in pairs]
        original = knn_predict(knn_fit(pairs, k), query)
        mapped = knn_predict(knn_fit(moved, k), stretch * query + shift)
        assert mapped == original
