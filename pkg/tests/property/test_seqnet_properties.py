"""
Property-based tests for the recurrent cells.
"""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from hds_fallcast.cells import CellKind, softmax
from hds_fallcast.seqnet import ModelParams, forward, init_params

sequence_strategy = st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=12)


def _scaled(kind: CellKind, hidden: int, seed: int, gain: float) -> ModelParams:
    p = init_params(kind, hidden, seed, activation="tanh")
    for name in p.arrays:
        p.arrays[name] = p.arrays[name] * gain + (gain - 1.0) * 0.1
    return p


class TestGruProperties:
    """Each GRU state is a convex combination of the previous state and the candidate."""

    @settings(max_examples=1000, deadline=None)
    @given(
        seq=sequence_strategy,
        hidden=st.integers(min_value=1, max_value=8),
        seed=st.integers(min_value=0, max_value=10_000),
        gain=st.floats(min_value=0.1, max_value=6.0),
    )
    def test_state_between_previous_and_candidate(self, seq: list[float], hidden: int, seed: int, gain: float) -> None:
        trajectory = forward(CellKind.GRU, _scaled(CellKind.GRU, hidden, seed, gain), seq)
        previous = trajectory.hidden[:-1]
        current = trajectory.hidden[1:]
        candidate = trajectory.candidates
        low = np.minimum(previous, candidate) - 1e-12
        high = np.maximum(previous, candidate) + 1e-12
        assert np.all((low <= current) & (current <= high))


class TestReadoutProperties:
    """Softmax and probability outputs."""

    @given(
        logits=st.lists(
            st.tuples(st.floats(min_value=-500, max_value=500), st.floats(min_value=-500, max_value=500)),
            min_size=1,
            max_size=10,
        )
    )
    def test_softmax_rows_sum_to_one(self, logits: list[tuple[float, float]]) -> None:
        probs = softmax(np.asarray(logits))
        assert np.all(probs >= 0.0)
        assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-12)

    @settings(deadline=None)
    @given(
        kind=st.sampled_from(list(CellKind)),
        seq=sequence_strategy,
        seed=st.integers(min_value=0, max_value=1000),
    )
    def test_prob_fall_in_unit_interval(self, kind: CellKind, seq: list[float], seed: int) -> None:
        trajectory = forward(kind, init_params(kind, 4, seed), seq)
        assert 0.0 <= trajectory.prob_fall <= 1.0
        assert trajectory.hidden.shape == (len(seq) + 1, 4)
        assert np.all(trajectory.hidden[0] == 0.0)
