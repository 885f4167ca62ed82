"""Batched forward passes and backpropagation through time for RNN, LSTM and GRU cells.

Parameters are plain ``dict[str, np.ndarray]`` keyed per gate ``g``:
``W_g`` (hidden x 1) input weights, ``U_g`` (hidden x hidden) recurrent
weights and ``b_g`` (hidden) biases, plus the readout ``W_out`` (2 x hidden)
and ``b_out`` (2). Gate names per cell:

    rnn:  h
    lstm: i (input), f (forget), c (candidate cell), o (output)
    gru:  z (update), r (reset), h (candidate state)

Batches are left-padded. ``x`` and ``mask`` are ``(batch, steps)`` and a
step with mask 0 carries the previous state through unchanged, so the last
column holds every sequence's true final state and the readout only ever
looks there.

Gates use the logistic sigmoid and candidates use tanh. The configurable
hidden activation only applies to the plain RNN update.

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .exceptions import HdsFallcastConfigError, HdsFallcastNumericError, HdsFallcastValueError

Arrays = dict[str, np.ndarray]


class CellKind(str, Enum):
    """Recurrent cell families."""

    RNN = "rnn"
    LSTM = "lstm"
    GRU = "gru"


GATES: dict[CellKind, tuple[str, ...]] = {
    CellKind.RNN: ("h",),
    CellKind.LSTM: ("i", "f", "c", "o"),
    CellKind.GRU: ("z", "r", "h"),
}


def sigmoid(a: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * a))


def _relu(a: np.ndarray) -> np.ndarray:
    return np.maximum(a, 0.0)


# activation -> (function, derivative expressed through the function's output)
ACTIVATIONS: dict[str, tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]] = {
    "relu": (_relu, lambda out: (out > 0.0).astype(np.float64)),
    "tanh": (np.tanh, lambda out: 1.0 - out * out),
    "logistic": (sigmoid, lambda out: out * (1.0 - out)),
}


def check_activation(name: str) -> None:
    if name not in ACTIVATIONS:
        raise HdsFallcastConfigError(
            f"unknown hidden activation '{name}'",
            error_code="invalid-activation",
            details={"activation": name, "choices": sorted(ACTIVATIONS)},
        )


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def pad_batch(seqs: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Left-pad 1-D sequences into ``(x, mask)`` arrays of shape ``(batch, steps)``.

    Raises:
        HdsFallcastValueError: If the batch or any sequence is empty.
    """
    if len(seqs) == 0:
        raise HdsFallcastValueError("cannot pad an empty batch", error_code="empty-batch")
    lengths = [len(s) for s in seqs]
    if min(lengths) == 0:
        raise HdsFallcastValueError(
            "sequences must be non-empty",
            error_code="empty-sequence",
            details={"position": lengths.index(0)},
        )
    steps = max(lengths)
    x = np.zeros((len(seqs), steps))
    mask = np.zeros((len(seqs), steps))
    for row, seq in enumerate(seqs):
        x[row, steps - len(seq) :] = seq
        mask[row, steps - len(seq) :] = 1.0
    return x, mask


@dataclass
class ForwardPass:
    """Everything a forward pass keeps for the backward pass.

    ``hidden`` and ``cells`` are ``(batch, steps + 1, hidden)`` with the zero
    initial state at index 0. ``gates`` holds the post-activation value of
    every gate per step, ``(batch, steps, hidden)``; ``candidates`` aliases the
    gate that proposes the new state (RNN: the new state itself).
    """

    kind: CellKind
    x: np.ndarray
    mask: np.ndarray
    hidden: np.ndarray
    gates: dict[str, np.ndarray]
    readout_input: np.ndarray
    dropout_mask: np.ndarray | None
    logits: np.ndarray
    probs: np.ndarray
    cells: np.ndarray | None = None
    # LSTM only: tanh of the unmasked new cell state per step
    cell_tanh: np.ndarray | None = field(default=None, repr=False)

    @property
    def candidates(self) -> np.ndarray:
        return self.gates["c" if self.kind is CellKind.LSTM else "h"]


def _require_finite(values: np.ndarray, kind: CellKind, step: int | str) -> None:
    if not np.all(np.isfinite(values)):
        raise HdsFallcastNumericError(
            f"non-finite {kind.value} state at step {step}",
            error_code="non-finite-forward",
            details={"cell": kind.value, "step": step},
        )


def _pre(arrays: Arrays, gate: str, x_t: np.ndarray, h_prev: np.ndarray) -> np.ndarray:
    return x_t @ arrays[f"W_{gate}"].T + h_prev @ arrays[f"U_{gate}"].T + arrays[f"b_{gate}"]


def forward_batch(
    arrays: Arrays,
    kind: CellKind,
    activation: str,
    x: np.ndarray,
    mask: np.ndarray,
    dropout_mask: np.ndarray | None = None,
) -> ForwardPass:
    """Run the cell over a padded batch and apply the softmax readout.

    Args:
        arrays: Parameter arrays for ``kind``.
        kind: Cell family.
        activation: Hidden activation for the plain RNN.
        x: ``(batch, steps)`` padded inputs.
        mask: ``(batch, steps)`` validity mask.
        dropout_mask: Optional ``(batch, hidden)`` multiplier applied to the
            final hidden state (already carrying the inverted-dropout scale).

    Raises:
        HdsFallcastNumericError: If a state or the readout becomes non-finite.
    """
    batch, steps = x.shape
    size = arrays["W_out"].shape[1]
    hidden = np.zeros((batch, steps + 1, size))
    gates = {g: np.zeros((batch, steps, size)) for g in GATES[kind]}
    cells = np.zeros((batch, steps + 1, size)) if kind is CellKind.LSTM else None
    cell_tanh = np.zeros((batch, steps, size)) if kind is CellKind.LSTM else None
    act = ACTIVATIONS[activation][0]

    for t in range(steps):
        x_t = x[:, t, None]
        m = mask[:, t, None]
        h_prev = hidden[:, t]

        if kind is CellKind.RNN:
            h_new = act(_pre(arrays, "h", x_t, h_prev))
            gates["h"][:, t] = h_new
        elif kind is CellKind.LSTM:
            assert cells is not None and cell_tanh is not None
            c_prev = cells[:, t]
            i = sigmoid(_pre(arrays, "i", x_t, h_prev))
            f = sigmoid(_pre(arrays, "f", x_t, h_prev))
            g = np.tanh(_pre(arrays, "c", x_t, h_prev))
            o = sigmoid(_pre(arrays, "o", x_t, h_prev))
            c_new = f * c_prev + i * g
            tc = np.tanh(c_new)
            h_new = o * tc
            for name, value in (("i", i), ("f", f), ("c", g), ("o", o)):
                gates[name][:, t] = value
            cell_tanh[:, t] = tc
            cells[:, t + 1] = m * c_new + (1.0 - m) * c_prev
        else:
            z = sigmoid(_pre(arrays, "z", x_t, h_prev))
            r = sigmoid(_pre(arrays, "r", x_t, h_prev))
            n = np.tanh(x_t @ arrays["W_h"].T + (r * h_prev) @ arrays["U_h"].T + arrays["b_h"])
            h_new = (1.0 - z) * h_prev + z * n
            gates["z"][:, t] = z
            gates["r"][:, t] = r
            gates["h"][:, t] = n

        hidden[:, t + 1] = m * h_new + (1.0 - m) * h_prev
        _require_finite(hidden[:, t + 1], kind, t + 1)

    final = hidden[:, steps]
    readout_input = final if dropout_mask is None else final * dropout_mask
    logits = readout_input @ arrays["W_out"].T + arrays["b_out"]
    _require_finite(logits, kind, "readout")
    return ForwardPass(
        kind=kind,
        x=x,
        mask=mask,
        hidden=hidden,
        gates=gates,
        readout_input=readout_input,
        dropout_mask=dropout_mask,
        logits=logits,
        probs=softmax(logits),
        cells=cells,
        cell_tanh=cell_tanh,
    )


def backward_batch(arrays: Arrays, activation: str, fp: ForwardPass, dlogits: np.ndarray) -> Arrays:
    """Backpropagate ``dlogits`` (``(batch, 2)``) through the readout and every step.

    Returns:
        Gradients keyed and shaped like ``arrays``.

    Raises:
        HdsFallcastNumericError: If a gradient is non-finite, naming the parameter.
    """
    kind = fp.kind
    grads = {name: np.zeros_like(value) for name, value in arrays.items()}
    grads["W_out"] = dlogits.T @ fp.readout_input
    grads["b_out"] = dlogits.sum(axis=0)
    dh = dlogits @ arrays["W_out"]
    if fp.dropout_mask is not None:
        dh = dh * fp.dropout_mask
    dc = np.zeros_like(dh)
    derivative = ACTIVATIONS[activation][1]

    for t in range(fp.x.shape[1] - 1, -1, -1):
        x_t = fp.x[:, t, None]
        m = fp.mask[:, t, None]
        h_prev = fp.hidden[:, t]
        dh_new = m * dh
        carried = (1.0 - m) * dh

        if kind is CellKind.RNN:
            da = dh_new * derivative(fp.gates["h"][:, t])
            pre_grads = {"h": da}
            dh = carried
        elif kind is CellKind.LSTM:
            assert fp.cells is not None and fp.cell_tanh is not None
            i, f, g, o = (fp.gates[name][:, t] for name in ("i", "f", "c", "o"))
            tc = fp.cell_tanh[:, t]
            c_prev = fp.cells[:, t]
            dc_new = m * dc + dh_new * o * (1.0 - tc * tc)
            pre_grads = {
                "i": dc_new * g * i * (1.0 - i),
                "f": dc_new * c_prev * f * (1.0 - f),
                "c": dc_new * i * (1.0 - g * g),
                "o": dh_new * tc * o * (1.0 - o),
            }
            dc = (1.0 - m) * dc + dc_new * f
            dh = carried
        else:
            z, r, n = (fp.gates[name][:, t] for name in ("z", "r", "h"))
            da_n = dh_new * z * (1.0 - n * n)
            d_reset_h = da_n @ arrays["U_h"]
            pre_grads = {
                "z": dh_new * (n - h_prev) * z * (1.0 - z),
                "r": d_reset_h * h_prev * r * (1.0 - r),
            }
            grads["W_h"] += da_n.T @ x_t
            grads["U_h"] += da_n.T @ (r * h_prev)
            grads["b_h"] += da_n.sum(axis=0)
            dh = carried + dh_new * (1.0 - z) + d_reset_h * r

        for gate, da in pre_grads.items():
            grads[f"W_{gate}"] += da.T @ x_t
            grads[f"U_{gate}"] += da.T @ h_prev
            grads[f"b_{gate}"] += da.sum(axis=0)
            dh = dh + da @ arrays[f"U_{gate}"]

    for name, value in grads.items():
        if not np.all(np.isfinite(value)):
            raise HdsFallcastNumericError(
                f"non-finite gradient for {name}",
                error_code="non-finite-gradient",
                details={"cell": kind.value, "parameter": name},
            )
    return grads
