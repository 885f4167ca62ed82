"""Unit tests for the batched cell kernels."""

import numpy as np
import pytest

from hds_fallcast.cells import (
    ACTIVATIONS,
    GATES,
    CellKind,
    backward_batch,
    check_activation,
    forward_batch,
    pad_batch,
    softmax,
)
from hds_fallcast.exceptions import HdsFallcastConfigError, HdsFallcastNumericError, HdsFallcastValueError
from hds_fallcast.seqnet import init_params


class TestPadBatch:
    """Left padding with a validity mask."""

    def test_left_padding(self) -> None:
        x, mask = pad_batch([np.array([0.1, 0.2, 0.3]), np.array([0.9])])
        assert x.tolist() == [[0.1, 0.2, 0.3], [0.0, 0.0, 0.9]]
        assert mask.tolist() == [[1.0, 1.0, 1.0], [0.0, 0.0, 1.0]]

    def test_empty_batch(self) -> None:
        with pytest.raises(HdsFallcastValueError):
            pad_batch([])

    def test_empty_sequence(self) -> None:
        with pytest.raises(HdsFallcastValueError) as info:
            pad_batch([np.array([0.5]), np.array([])])
        assert info.value.details["position"] == 1


class TestActivations:
    """Activation table and softmax."""

    def test_derivatives_from_outputs(self) -> None:
        a = np.array([-1.0, 0.5, 2.0])
        for name, (fn, derivative) in ACTIVATIONS.items():
            step = 1e-6
            numeric = (fn(a + step) - fn(a - step)) / (2 * step)
            assert np.allclose(derivative(fn(a)), numeric, atol=1e-6), name

    def test_unknown_activation(self) -> None:
        with pytest.raises(HdsFallcastConfigError) as info:
            check_activation("swish")
        assert info.value.error_code == "invalid-activation"

    def test_softmax_is_shift_invariant(self) -> None:
        logits = np.array([[1000.0, 1001.0], [0.0, 0.0]])
        probs = softmax(logits)
        assert np.allclose(probs[0], softmax(np.array([0.0, 1.0])))
        assert probs[1].tolist() == [0.5, 0.5]


class TestMasking:
    """Padded steps carry the state through unchanged."""

    @pytest.mark.parametrize("kind", list(CellKind))
    def test_padded_batch_matches_single_sequences(self, kind: CellKind) -> None:
        p = init_params(kind, 5, seed=3, activation="tanh")
        seqs = [np.array([0.2, 0.4, 0.9, 0.1]), np.array([0.7, 0.3])]
        x, mask = pad_batch(seqs)
        batched = forward_batch(p.arrays, kind, "tanh", x, mask)
        for row, seq in enumerate(seqs):
            xs, ms = pad_batch([seq])
            single = forward_batch(p.arrays, kind, "tanh", xs, ms)
            assert np.allclose(batched.logits[row], single.logits[0], atol=1e-14)

    @pytest.mark.parametrize("kind", list(CellKind))
    def test_gate_shapes(self, kind: CellKind) -> None:
        p = init_params(kind, 3, seed=0)
        x, mask = pad_batch([np.array([0.1, 0.2])])
        fp = forward_batch(p.arrays, kind, "relu", x, mask)
        assert set(fp.gates) == set(GATES[kind])
        assert fp.hidden.shape == (1, 3, 3)
        assert fp.probs.shape == (1, 2)


class TestNumericErrors:
    """Non-finite values are reported with their location."""

    def test_forward_overflow_names_step(self) -> None:
        p = init_params(CellKind.RNN, 2, seed=0)
        p.arrays["W_h"][:] = 1e300
        p.arrays["U_h"][:] = 1e300
        x, mask = pad_batch([np.array([1.0, 1.0, 1.0])])
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(HdsFallcastNumericError) as info:
                forward_batch(p.arrays, CellKind.RNN, "relu", x, mask)
        assert info.value.error_code == "non-finite-forward"
        assert info.value.details["step"] == 2

    def test_backward_overflow_names_parameter(self) -> None:
        p = init_params(CellKind.RNN, 2, seed=0, activation="tanh")
        x, mask = pad_batch([np.array([0.5])])
        fp = forward_batch(p.arrays, CellKind.RNN, "tanh", x, mask)
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(HdsFallcastNumericError) as info:
                backward_batch(p.arrays, "tanh", fp, np.array([[np.inf, -np.inf]]))
        assert info.value.error_code == "non-finite-gradient"
        assert "parameter" in info.value.details
