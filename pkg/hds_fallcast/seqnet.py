"""Sequence-to-point recurrent fall classifiers.

A single recurrent layer (RNN, LSTM or GRU) reads the normalised HDS
history of an encounter; its final hidden state feeds a two-way softmax
readout whose fall column is the predicted fall probability. Training
minimises mean binary cross-entropy with Adam, an exponentially decaying
learning rate, inverted dropout on the final hidden state and early
stopping on the validation loss.

Readout column 0 is no-fall and column 1 is fall.

Public API:
    - CellKind, HyperParams, ModelParams, TrainState, Trajectory
    - init_params, forward, loss, backward, grad_check
    - AdamOptimizer, EarlyStopping, train
    - predict, predict_many
    - save_checkpoint, load_checkpoint, Checkpoint

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from splurge_pub_sub import PubSubSolo

from .cells import GATES, Arrays, CellKind, backward_batch, check_activation, forward_batch, pad_batch
from .constants import EVENT_SCOPE, FALL, FALL_CLASS_INDEX, NO_FALL, PROB_CLIP_EPS
from .encounter_io import read_json, write_json_atomic
from .exceptions import HdsFallcastConfigError, HdsFallcastDataError, HdsFallcastNumericError, HdsFallcastValueError
from .hds_core import Encounter, Prediction, ScaleConfig, derive_sequence
from .seeding import substream

logger = logging.getLogger(__name__)

CHECKPOINT_SCHEMA_VERSION = 1
_PREDICT_BATCH = 256

__all__ = [
    "AdamOptimizer",
    "CellKind",
    "Checkpoint",
    "EarlyStopping",
    "HyperParams",
    "ModelParams",
    "TrainState",
    "Trajectory",
    "backward",
    "forward",
    "grad_check",
    "init_params",
    "load_checkpoint",
    "loss",
    "predict",
    "predict_many",
    "relative_error",
    "save_checkpoint",
    "train",
]


@dataclass(frozen=True)
class HyperParams:
    """Network and training settings.

    Args:
        hidden_size: Hidden units (searched over 32, 64, 128, 256).
        layers: Recurrent layers; only 1 is supported.
        lr0: Initial Adam learning rate.
        lr_decay: Per-epoch decay factor; the rate at epoch ``e`` is ``lr0 * lr_decay**e``.
        batch_size: Sequences per minibatch.
        max_epochs: Epoch cap.
        patience: Epochs without validation improvement before stopping.
        dropout: Drop probability on the final hidden state.
        hidden_activation: ``relu``, ``tanh`` or ``logistic``; plain RNN only.
        forget_bias_init: Initial LSTM forget-gate bias.
        update_bias_init: Initial GRU update-gate bias.
        seed: Root seed for initialisation, shuffling and dropout.

    Raises:
        HdsFallcastConfigError: On any out-of-range value.
    """

    hidden_size: int = 64
    layers: int = 1
    lr0: float = 0.1
    lr_decay: float = 0.95
    batch_size: int = 32
    max_epochs: int = 200
    patience: int = 5
    dropout: float = 0.5
    hidden_activation: str = "relu"
    forget_bias_init: float = 1.0
    update_bias_init: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        problems = []
        if self.hidden_size < 1:
            problems.append("hidden_size must be positive")
        if self.layers != 1:
            problems.append("only single-layer networks are supported")
        if not self.lr0 > 0:
            problems.append("lr0 must be positive")
        if not 0 < self.lr_decay <= 1:
            problems.append("lr_decay must lie in (0, 1]")
        if self.batch_size < 1:
            problems.append("batch_size must be positive")
        if self.max_epochs < 1:
            problems.append("max_epochs must be positive")
        if self.patience < 1:
            problems.append("patience must be positive")
        if not 0 <= self.dropout < 1:
            problems.append("dropout must lie in [0, 1)")
        if problems:
            raise HdsFallcastConfigError(
                "; ".join(problems), error_code="invalid-hyperparameters", details=self.to_dict()
            )
        check_activation(self.hidden_activation)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> HyperParams:
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise HdsFallcastConfigError(
                f"unknown hyperparameters: {', '.join(sorted(unknown))}",
                error_code="unknown-key",
                details={"keys": sorted(unknown)},
            )
        return cls(**data)


@dataclass
class ModelParams:
    """Weights of one network together with the settings needed to run it."""

    kind: CellKind
    hidden_size: int
    activation: str
    arrays: Arrays

    def names(self) -> list[str]:
        return sorted(self.arrays)

    def copy(self) -> ModelParams:
        return ModelParams(
            kind=self.kind,
            hidden_size=self.hidden_size,
            activation=self.activation,
            arrays={name: value.copy() for name, value in self.arrays.items()},
        )

    def expected_shapes(self) -> dict[str, tuple[int, ...]]:
        size = self.hidden_size
        shapes: dict[str, tuple[int, ...]] = {"W_out": (2, size), "b_out": (2,)}
        for gate in GATES[self.kind]:
            shapes[f"W_{gate}"] = (size, 1)
            shapes[f"U_{gate}"] = (size, size)
            shapes[f"b_{gate}"] = (size,)
        return shapes

    def validate(self) -> None:
        """Raise unless every array is present, correctly shaped and finite."""
        expected = self.expected_shapes()
        actual = {name: value.shape for name, value in self.arrays.items()}
        if actual != expected:
            raise HdsFallcastDataError(
                f"{self.kind.value} parameters do not match hidden_size {self.hidden_size}",
                error_code="parameter-shape",
                details={"expected": {k: list(v) for k, v in expected.items()}},
            )
        for name, value in self.arrays.items():
            if not np.all(np.isfinite(value)):
                raise HdsFallcastNumericError(
                    f"parameter {name} has non-finite entries",
                    error_code="non-finite-parameter",
                    details={"parameter": name},
                )


def init_params(
    kind: CellKind | str,
    hidden_size: int,
    seed: int = 0,
    *,
    activation: str = "relu",
    forget_bias: float = 1.0,
    update_bias: float = 0.0,
) -> ModelParams:
    """Glorot-uniform weights and zero biases.

    The LSTM forget-gate bias starts at ``forget_bias`` and the GRU
    update-gate bias at ``update_bias``.
    """
    kind = CellKind(kind)
    check_activation(activation)
    rng = substream(seed, "init", kind.value)
    params = ModelParams(kind=kind, hidden_size=hidden_size, activation=activation, arrays={})
    for name, shape in params.expected_shapes().items():
        if name.startswith("b_"):
            params.arrays[name] = np.zeros(shape)
            continue
        fan_out, fan_in = shape
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        params.arrays[name] = rng.uniform(-limit, limit, size=shape)
    if kind is CellKind.LSTM:
        params.arrays["b_f"][:] = forget_bias
    elif kind is CellKind.GRU:
        params.arrays["b_z"][:] = update_bias
    return params


def _check_kind(kind: CellKind | str, p: ModelParams) -> CellKind:
    kind = CellKind(kind)
    if kind is not p.kind:
        raise HdsFallcastValueError(
            f"parameters belong to a {p.kind.value} network, not {kind.value}",
            error_code="kind-mismatch",
        )
    return kind


@dataclass(frozen=True)
class Trajectory:
    """Forward pass of one sequence.

    ``hidden`` is ``(steps + 1, hidden)`` starting from the zero state;
    ``candidates`` is ``(steps, hidden)``; ``cells`` is set for LSTMs only.
    """

    hidden: np.ndarray
    candidates: np.ndarray
    logits: np.ndarray
    probs: np.ndarray
    cells: np.ndarray | None = None

    @property
    def prob_fall(self) -> float:
        return float(self.probs[FALL_CLASS_INDEX])


def forward(
    kind: CellKind | str,
    p: ModelParams,
    seq: Sequence[float] | np.ndarray,
    dropout_mask: np.ndarray | None = None,
) -> Trajectory:
    """Run one sequence through the network.

    Args:
        kind: Cell family; must match ``p``.
        p: Parameters.
        seq: Normalised scores, oldest first.
        dropout_mask: Optional ``(hidden,)`` multiplier on the final state.

    Raises:
        HdsFallcastValueError: If ``seq`` is empty.
        HdsFallcastNumericError: If a state becomes non-finite; ``details["step"]`` names it.
    """
    kind = _check_kind(kind, p)
    x, mask = pad_batch([np.asarray(seq, dtype=np.float64)])
    fp = forward_batch(
        p.arrays, kind, p.activation, x, mask, None if dropout_mask is None else np.asarray(dropout_mask)[None, :]
    )
    return Trajectory(
        hidden=fp.hidden[0],
        candidates=fp.candidates[0],
        logits=fp.logits[0],
        probs=fp.probs[0],
        cells=None if fp.cells is None else fp.cells[0],
    )


def loss(probs_fall: Sequence[float] | np.ndarray, labels: Sequence[int] | np.ndarray) -> float:
    """Mean binary cross-entropy with probabilities clipped to ``[eps, 1 - eps]``.

    Raises:
        HdsFallcastValueError: On a length mismatch or empty input.
    """
    p = np.asarray(probs_fall, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if p.shape != y.shape or p.size == 0:
        raise HdsFallcastValueError(
            f"loss needs equal, non-empty inputs, got {p.size} probabilities and {y.size} labels",
            error_code="length-mismatch",
        )
    p = np.clip(p, PROB_CLIP_EPS, 1.0 - PROB_CLIP_EPS)
    return float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))))


def _one_hot(labels: np.ndarray) -> np.ndarray:
    target = np.zeros((len(labels), 2))
    target[np.arange(len(labels)), np.where(labels == FALL, FALL_CLASS_INDEX, 1 - FALL_CLASS_INDEX)] = 1.0
    return target


def _loss_and_grads(
    p: ModelParams, seqs: Sequence[np.ndarray], labels: np.ndarray, dropout_mask: np.ndarray | None
) -> tuple[float, Arrays]:
    x, mask = pad_batch(seqs)
    fp = forward_batch(p.arrays, p.kind, p.activation, x, mask, dropout_mask)
    value = loss(fp.probs[:, FALL_CLASS_INDEX], labels)
    dlogits = (fp.probs - _one_hot(labels)) / len(labels)
    return value, backward_batch(p.arrays, p.activation, fp, dlogits)


def backward(
    kind: CellKind | str,
    p: ModelParams,
    seqs: Sequence[Sequence[float] | np.ndarray],
    labels: Sequence[int],
    dropout_masks: np.ndarray | None = None,
) -> Arrays:
    """Gradient of the mean batch loss with respect to every parameter.

    Args:
        kind: Cell family; must match ``p``.
        p: Parameters.
        seqs: Batch of normalised sequences (any lengths).
        labels: Outcome per sequence.
        dropout_masks: Optional ``(batch, hidden)`` multipliers on the final states.

    Raises:
        HdsFallcastNumericError: If a gradient is non-finite.
    """
    _check_kind(kind, p)
    if len(seqs) != len(labels):
        raise HdsFallcastValueError(
            f"{len(seqs)} sequences but {len(labels)} labels", error_code="length-mismatch"
        )
    arrays = [np.asarray(s, dtype=np.float64) for s in seqs]
    return _loss_and_grads(p, arrays, np.asarray(labels), dropout_masks)[1]


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Largest entry-wise ``|a - n| / max(1e-8, |a| + |n|)``; 0.0 for empty arrays."""
    a = np.asarray(analytic, dtype=np.float64)
    n = np.asarray(numeric, dtype=np.float64)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - n) / np.maximum(1e-8, np.abs(a) + np.abs(n))))


def grad_check(
    kind: CellKind | str,
    hidden_size: int = 4,
    seq_len: int = 6,
    seed: int = 0,
    *,
    batch_size: int = 3,
    epsilon: float = 1e-3,
) -> float:
    """Compare BPTT gradients against central finite differences.

    A random tanh network with moderately scaled weights is evaluated on a
    batch of random sequences whose lengths vary up to ``seq_len``. Each
    numeric gradient entry uses the fourth-order central stencil
    ``(f(-2h) - 8 f(-h) + 8 f(h) - f(2h)) / 12h`` with ``h = epsilon``.

    Returns:
        The largest entry-wise relative error over every parameter
        (see :func:`relative_error`).
    """
    kind = CellKind(kind)
    rng = substream(seed, "gradcheck", kind.value)
    p = init_params(kind, hidden_size, seed, activation="tanh")
    for name in p.arrays:
        p.arrays[name] = rng.normal(0.0, 0.5, size=p.arrays[name].shape)
    lengths = rng.integers(1, seq_len + 1, size=batch_size)
    lengths[0] = seq_len
    seqs = [rng.uniform(0.0, 1.0, size=int(n)) for n in lengths]
    labels = rng.integers(0, 2, size=batch_size)

    _, analytic = _loss_and_grads(p, seqs, labels, None)
    worst = 0.0
    for name in p.names():
        values = p.arrays[name]
        numeric = np.zeros_like(values)
        for index in np.ndindex(values.shape):
            original = values[index]
            shifted = []
            for step in (-2.0, -1.0, 1.0, 2.0):
                values[index] = original + step * epsilon
                shifted.append(_loss_and_grads(p, seqs, labels, None)[0])
            values[index] = original
            numeric[index] = (shifted[0] - 8.0 * shifted[1] + 8.0 * shifted[2] - shifted[3]) / (12.0 * epsilon)
        error = relative_error(analytic[name], numeric)
        logger.debug("grad check %s %s: %.3e", kind.value, name, error)
        worst = max(worst, error)
    return worst


@dataclass
class TrainState:
    """Optimiser moments and early-stopping bookkeeping of a training run."""

    first_moment: Arrays
    second_moment: Arrays
    step: int = 0
    epoch: int = 0
    best_val_loss: float = math.inf
    epochs_since_improvement: int = 0
    history: list[dict[str, float]] = field(default_factory=list)

    @classmethod
    def fresh(cls, p: ModelParams) -> TrainState:
        return cls(
            first_moment={name: np.zeros_like(v) for name, v in p.arrays.items()},
            second_moment={name: np.zeros_like(v) for name, v in p.arrays.items()},
        )


@dataclass(frozen=True)
class AdamOptimizer:
    """Adam with bias-corrected moments; moments live in :class:`TrainState`."""

    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def step(self, p: ModelParams, grads: Arrays, state: TrainState, lr: float) -> None:
        """Update ``p`` in place."""
        state.step += 1
        correction1 = 1.0 - self.beta1**state.step
        correction2 = 1.0 - self.beta2**state.step
        for name, grad in grads.items():
            m = state.first_moment[name]
            v = state.second_moment[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad * grad
            p.arrays[name] -= lr * (m / correction1) / (np.sqrt(v / correction2) + self.eps)


class EarlyStopping:
    """Track the best validation loss and count epochs without improvement."""

    def __init__(self, patience: int) -> None:
        if patience < 1:
            raise HdsFallcastConfigError(f"patience must be positive, got {patience}", error_code="invalid-patience")
        self.patience = patience
        self.best = math.inf
        self.wait = 0

    def update(self, val_loss: float) -> bool:
        """Record an epoch's validation loss; return True on strict improvement."""
        if val_loss < self.best:
            self.best = val_loss
            self.wait = 0
            return True
        self.wait += 1
        return False

    @property
    def should_stop(self) -> bool:
        return self.wait >= self.patience


def _length_batches(lengths: np.ndarray, batch_size: int, rng: np.random.Generator) -> list[np.ndarray]:
    # shuffle, group by similar length, then shuffle the batch order
    order = rng.permutation(len(lengths))
    order = order[np.argsort(lengths[order], kind="stable")]
    batches = [order[i : i + batch_size] for i in range(0, len(order), batch_size)]
    return [batches[i] for i in rng.permutation(len(batches))]


def _fall_probabilities(p: ModelParams, seqs: Sequence[np.ndarray]) -> np.ndarray:
    lengths = np.asarray([len(s) for s in seqs])
    order = np.argsort(lengths, kind="stable")
    out = np.empty(len(seqs))
    for start in range(0, len(order), _PREDICT_BATCH):
        rows = order[start : start + _PREDICT_BATCH]
        x, mask = pad_batch([seqs[i] for i in rows])
        out[rows] = forward_batch(p.arrays, p.kind, p.activation, x, mask).probs[:, FALL_CLASS_INDEX]
    return out


def _sequences(encounters: Sequence[Encounter], scale: ScaleConfig) -> tuple[list[np.ndarray], np.ndarray]:
    return [derive_sequence(e, scale) for e in encounters], np.asarray([e.outcome for e in encounters])


def train(
    kind: CellKind | str,
    train_set: Sequence[Encounter],
    validation_set: Sequence[Encounter],
    h: HyperParams,
    scale: ScaleConfig | None = None,
    *,
    correlation_id: str | None = None,
) -> tuple[ModelParams, TrainState]:
    """Fit a network and return the parameters with the best validation loss.

    Each epoch reshuffles the training set into length-grouped minibatches,
    draws fresh dropout masks and takes one Adam step per batch at rate
    ``h.lr0 * h.lr_decay**epoch``. Training stops after ``h.patience`` epochs
    without a strict validation improvement, or at ``h.max_epochs``.

    Raises:
        HdsFallcastDataError: If either split is empty.
        HdsFallcastNumericError: If a loss becomes non-finite; ``details["epoch"]`` names it.
    """
    kind = CellKind(kind)
    scale = scale or ScaleConfig()
    if not train_set or not validation_set:
        raise HdsFallcastDataError(
            "training needs non-empty train and validation splits",
            error_code="empty-split",
            details={"train": len(train_set), "validation": len(validation_set)},
        )
    seqs, labels = _sequences(train_set, scale)
    val_seqs, val_labels = _sequences(validation_set, scale)
    lengths = np.asarray([len(s) for s in seqs])

    params = init_params(
        kind,
        h.hidden_size,
        h.seed,
        activation=h.hidden_activation,
        forget_bias=h.forget_bias_init,
        update_bias=h.update_bias_init,
    )
    best = params.copy()
    state = TrainState.fresh(params)
    optimizer = AdamOptimizer()
    stopper = EarlyStopping(h.patience)
    shuffle_rng = substream(h.seed, "shuffle")
    dropout_rng = substream(h.seed, "dropout")

    PubSubSolo.publish(
        topic="hds.seqnet.train.begin",
        data={"kind": kind.value, "train": len(seqs), "validation": len(val_seqs), "hyper": h.to_dict()},
        correlation_id=correlation_id,
        scope=EVENT_SCOPE,
    )
    try:
        for epoch in range(h.max_epochs):
            lr = h.lr0 * h.lr_decay**epoch
            total = 0.0
            for rows in _length_batches(lengths, h.batch_size, shuffle_rng):
                mask = None
                if h.dropout > 0:
                    keep = dropout_rng.random((len(rows), h.hidden_size)) >= h.dropout
                    mask = keep / (1.0 - h.dropout)
                value, grads = _loss_and_grads(params, [seqs[i] for i in rows], labels[rows], mask)
                optimizer.step(params, grads, state, lr)
                total += value * len(rows)
            train_loss = total / len(seqs)
            val_loss = loss(_fall_probabilities(params, val_seqs), val_labels)
            if not (math.isfinite(train_loss) and math.isfinite(val_loss)):
                raise HdsFallcastNumericError(
                    f"training diverged at epoch {epoch}",
                    error_code="divergence",
                    details={"epoch": epoch, "train_loss": train_loss, "val_loss": val_loss},
                )

            if stopper.update(val_loss):
                best = params.copy()
            state.epoch = epoch
            state.best_val_loss = stopper.best
            state.epochs_since_improvement = stopper.wait
            record = {"epoch": epoch, "lr": lr, "train_loss": train_loss, "val_loss": val_loss}
            state.history.append(record)
            logger.debug("%s epoch %d: train %.6f val %.6f", kind.value, epoch, train_loss, val_loss)
            PubSubSolo.publish(
                topic="hds.seqnet.train.epoch",
                data={"kind": kind.value, **record},
                correlation_id=correlation_id,
                scope=EVENT_SCOPE,
            )
            if stopper.should_stop:
                break
    except HdsFallcastNumericError as e:
        PubSubSolo.publish(
            topic="hds.seqnet.train.error",
            data={"kind": kind.value, "epoch": len(state.history), "error": e},
            correlation_id=correlation_id,
            scope=EVENT_SCOPE,
        )
        e.attach_context(key="epoch", value=len(state.history))
        raise

    PubSubSolo.publish(
        topic="hds.seqnet.train.end",
        data={"kind": kind.value, "epochs": len(state.history), "best_val_loss": state.best_val_loss},
        correlation_id=correlation_id,
        scope=EVENT_SCOPE,
    )
    return best, state


def _prediction(prob_fall: float) -> Prediction:
    # argmax with a tie resolved to the fall label
    return Prediction(label=FALL if prob_fall >= 0.5 else NO_FALL, prob_fall=prob_fall)


def predict(kind: CellKind | str, p: ModelParams, e: Encounter, scale: ScaleConfig | None = None) -> Prediction:
    """Classify one encounter from its history; dropout is off."""
    return _prediction(forward(kind, p, derive_sequence(e, scale or ScaleConfig())).prob_fall)


def predict_many(
    kind: CellKind | str, p: ModelParams, encounters: Sequence[Encounter], scale: ScaleConfig | None = None
) -> list[Prediction]:
    """Batched :func:`predict`, in input order."""
    _check_kind(kind, p)
    if not encounters:
        return []
    seqs, _ = _sequences(encounters, scale or ScaleConfig())
    return [_prediction(float(prob)) for prob in _fall_probabilities(p, seqs)]


@dataclass(frozen=True)
class Checkpoint:
    """A saved network: parameters, the settings that produced them and the loss history."""

    params: ModelParams
    hyper: HyperParams
    history: tuple[dict[str, float], ...] = ()


def checkpoint_dict(params: ModelParams, hyper: HyperParams, state: TrainState | None = None) -> dict[str, Any]:
    best = None if state is None or not math.isfinite(state.best_val_loss) else state.best_val_loss
    return {
        "schema_version": CHECKPOINT_SCHEMA_VERSION,
        "kind": params.kind.value,
        "hidden_size": params.hidden_size,
        "activation": params.activation,
        "hyper": hyper.to_dict(),
        "params": {
            name: {"shape": list(value.shape), "values": [float(v) for v in value.ravel()]}
            for name, value in sorted(params.arrays.items())
        },
        "history": [] if state is None else list(state.history),
        "best_val_loss": best,
    }


def checkpoint_from_dict(data: dict[str, Any]) -> Checkpoint:
    """Rebuild a :class:`Checkpoint`.

    Raises:
        HdsFallcastDataError: On a schema mismatch or malformed parameter block.
    """
    if data.get("schema_version") != CHECKPOINT_SCHEMA_VERSION:
        raise HdsFallcastDataError(
            f"unsupported checkpoint schema {data.get('schema_version')!r}",
            error_code="schema-version",
            details={"expected": CHECKPOINT_SCHEMA_VERSION},
        )
    try:
        arrays = {
            name: np.asarray(block["values"], dtype=np.float64).reshape(block["shape"])
            for name, block in data["params"].items()
        }
        params = ModelParams(
            kind=CellKind(data["kind"]),
            hidden_size=int(data["hidden_size"]),
            activation=str(data["activation"]),
            arrays=arrays,
        )
        hyper = HyperParams.from_dict(data["hyper"])
    except (KeyError, TypeError, ValueError) as e:
        raise HdsFallcastDataError(f"malformed checkpoint: {e}", error_code="malformed-checkpoint") from e
    params.validate()
    return Checkpoint(params=params, hyper=hyper, history=tuple(data.get("history", [])))


def save_checkpoint(
    path: Path | str, params: ModelParams, hyper: HyperParams, state: TrainState | None = None
) -> None:
    """Write a checkpoint JSON atomically; floats round-trip bit-exactly."""
    write_json_atomic(path, checkpoint_dict(params, hyper, state))


def load_checkpoint(path: Path | str) -> Checkpoint:
    """Read a checkpoint written by :func:`save_checkpoint`."""
    return checkpoint_from_dict(read_json(path))
