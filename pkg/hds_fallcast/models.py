"""Uniform fit/predict adapters over every model family.

The evaluation harness and the CLI only see :class:`FallPredictor`. A
:class:`ModelSpec` names a model kind plus its settings; calling it with a
fold index returns a fresh, unfitted predictor whose seed is derived from
its own seed and the fold. A ModelSpec is plain frozen data, so it pickles
into worker processes.

Scalar baselines fit on train and validation together (they have nothing
to early-stop). Recurrent models train on train and early-stop on
validation.

Spec strings, as accepted on the command line::

    threshold               best-θ threshold chosen on the training pairs
    threshold:theta=20
    knn:k=7
    forest:tree_count=100,max_depth=6
    gru:hidden_size=32,lr0=0.01

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, fields
from typing import Any, Protocol, runtime_checkable

import yaml

from . import baseline, seqnet, trees
from .cells import CellKind
from .exceptions import HdsFallcastConfigError
from .hds_core import Encounter, Prediction, ScaleConfig, derive_onestep_pairs
from .seeding import child_seed

SCALAR_KINDS = ("threshold", "knn", "forest", "gbt")
SEQUENCE_KINDS = tuple(kind.value for kind in CellKind)
MODEL_KINDS = SCALAR_KINDS + SEQUENCE_KINDS


@runtime_checkable
class FallPredictor(Protocol):
    """What the evaluation harness needs from a model."""

    name: str

    def fit(self, train: Sequence[Encounter], validation: Sequence[Encounter], scale: ScaleConfig) -> None: ...

    def predict(self, e: Encounter) -> Prediction: ...

    def predict_many(self, encounters: Sequence[Encounter]) -> list[Prediction]: ...

    def to_dict(self) -> dict[str, Any]: ...


class _NotFitted:
    def _require(self, model: object | None) -> Any:
        if model is None:
            raise HdsFallcastConfigError(f"{type(self).__name__} used before fit", error_code="not-fitted")
        return model


class ThresholdPredictor(_NotFitted):
    """Threshold rule; with ``theta=None`` the best balanced-accuracy θ on the training pairs is used."""

    def __init__(self, theta: int | None = None, name: str = "threshold") -> None:
        self.theta = theta
        self.name = name
        self.model: baseline.ThresholdModel | None = None

    def fit(self, train: Sequence[Encounter], validation: Sequence[Encounter], scale: ScaleConfig) -> None:
        if self.theta is None:
            self.model = baseline.best_threshold(derive_onestep_pairs([*train, *validation]), scale)
        else:
            self.model = baseline.ThresholdModel(self.theta)
        self.model.check_scale(scale)

    def predict(self, e: Encounter) -> Prediction:
        return baseline.threshold_predict(self._require(self.model), e.x_last)

    def predict_many(self, encounters: Sequence[Encounter]) -> list[Prediction]:
        return [self.predict(e) for e in encounters]

    def to_dict(self) -> dict[str, Any]:
        return self._require(self.model).to_dict()


class KnnPredictor(_NotFitted):
    """k-nearest neighbours on the score at the origin; 1-NN unless ``k`` is set."""

    def __init__(self, k: int = 1, name: str = "knn") -> None:
        self.k = k
        self.name = name
        self.model: baseline.KnnModel | None = None

    def fit(self, train: Sequence[Encounter], validation: Sequence[Encounter], scale: ScaleConfig) -> None:
        self.model = baseline.knn_fit(derive_onestep_pairs([*train, *validation]), self.k)

    def predict(self, e: Encounter) -> Prediction:
        return baseline.knn_predict(self._require(self.model), e.x_last)

    def predict_many(self, encounters: Sequence[Encounter]) -> list[Prediction]:
        model = self._require(self.model)
        return [baseline.knn_predict(model, e.x_last) for e in encounters]

    def to_dict(self) -> dict[str, Any]:
        return self._require(self.model).to_dict()


class ForestPredictor(_NotFitted):
    def __init__(self, seed: int = 0, name: str = "forest", **settings: Any) -> None:
        self.seed = seed
        self.settings = settings
        self.name = name
        self.model: trees.ForestModel | None = None

    def fit(self, train: Sequence[Encounter], validation: Sequence[Encounter], scale: ScaleConfig) -> None:
        self.model = trees.forest_fit(derive_onestep_pairs([*train, *validation]), seed=self.seed, **self.settings)

    def predict(self, e: Encounter) -> Prediction:
        return trees.forest_predict(self._require(self.model), e.x_last)

    def predict_many(self, encounters: Sequence[Encounter]) -> list[Prediction]:
        model = self._require(self.model)
        return [trees.forest_predict(model, e.x_last) for e in encounters]

    def to_dict(self) -> dict[str, Any]:
        return self._require(self.model).to_dict()


class GbtPredictor(_NotFitted):
    def __init__(self, seed: int = 0, name: str = "gbt", **settings: Any) -> None:
        self.seed = seed
        self.settings = settings
        self.name = name
        self.model: trees.GbtModel | None = None

    def fit(self, train: Sequence[Encounter], validation: Sequence[Encounter], scale: ScaleConfig) -> None:
        self.model = trees.gbt_fit(derive_onestep_pairs([*train, *validation]), seed=self.seed, **self.settings)

    def predict(self, e: Encounter) -> Prediction:
        return trees.gbt_predict(self._require(self.model), e.x_last)

    def predict_many(self, encounters: Sequence[Encounter]) -> list[Prediction]:
        model = self._require(self.model)
        return [trees.gbt_predict(model, e.x_last) for e in encounters]

    def to_dict(self) -> dict[str, Any]:
        return self._require(self.model).to_dict()


class SequencePredictor(_NotFitted):
    """Recurrent network trained with early stopping on the validation split."""

    def __init__(self, kind: CellKind | str, hyper: seqnet.HyperParams, name: str | None = None) -> None:
        self.kind = CellKind(kind)
        self.hyper = hyper
        self.name = name or self.kind.value
        self.params: seqnet.ModelParams | None = None
        self.state: seqnet.TrainState | None = None
        self.scale = ScaleConfig()

    def fit(self, train: Sequence[Encounter], validation: Sequence[Encounter], scale: ScaleConfig) -> None:
        self.scale = scale
        self.params, self.state = seqnet.train(self.kind, train, validation, self.hyper, scale)

    def predict(self, e: Encounter) -> Prediction:
        return seqnet.predict(self.kind, self._require(self.params), e, self.scale)

    def predict_many(self, encounters: Sequence[Encounter]) -> list[Prediction]:
        return seqnet.predict_many(self.kind, self._require(self.params), encounters, self.scale)

    def to_dict(self) -> dict[str, Any]:
        return seqnet.checkpoint_dict(self._require(self.params), self.hyper, self.state)


_HYPER_FIELDS = frozenset(f.name for f in fields(seqnet.HyperParams)) - {"seed"}

# accepted settings per scalar kind; "seed" is always supplied by ModelSpec.seed
_SETTINGS: dict[str, frozenset[str]] = {
    "threshold": frozenset({"theta"}),
    "knn": frozenset({"k"}),
    "forest": frozenset({"tree_count", "max_depth", "min_samples_leaf", "bootstrap"}),
    "gbt": frozenset({"stage_count", "learning_rate", "l2_reg", "max_depth", "subsample"}),
    **{kind: _HYPER_FIELDS for kind in SEQUENCE_KINDS},
}


@dataclass(frozen=True)
class ModelSpec:
    """A model kind with its settings; calling it builds an unfitted predictor.

    Raises:
        HdsFallcastConfigError: On an unknown kind or setting.
    """

    kind: str
    settings: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0
    label: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise HdsFallcastConfigError(
                f"unknown model kind '{self.kind}'",
                error_code="unknown-model",
                details={"kind": self.kind, "choices": list(MODEL_KINDS)},
            )
        unknown = set(self.settings) - _SETTINGS[self.kind]
        if unknown:
            raise HdsFallcastConfigError(
                f"unknown settings for {self.kind}: {', '.join(sorted(unknown))}",
                error_code="unknown-key",
                details={"kind": self.kind, "keys": sorted(unknown), "allowed": sorted(_SETTINGS[self.kind])},
            )
        object.__setattr__(self, "settings", dict(self.settings))

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if not self.settings:
            return self.kind
        return f"{self.kind}:" + ",".join(f"{key}={value}" for key, value in sorted(self.settings.items()))

    @property
    def is_sequence(self) -> bool:
        return self.kind in SEQUENCE_KINDS

    def hyper(self, fold_index: int = 0) -> seqnet.HyperParams:
        """Hyperparameters for a recurrent kind, seeded for ``fold_index``."""
        return seqnet.HyperParams(**self.settings, seed=child_seed(self.seed, self.kind, fold_index))

    def __call__(self, fold_index: int = 0) -> FallPredictor:
        seed = child_seed(self.seed, self.kind, fold_index)
        settings = dict(self.settings)
        if self.kind == "threshold":
            return ThresholdPredictor(settings.get("theta"), name=self.name)
        if self.kind == "knn":
            return KnnPredictor(**settings, name=self.name)
        if self.kind == "forest":
            return ForestPredictor(seed=seed, name=self.name, **settings)
        if self.kind == "gbt":
            return GbtPredictor(seed=seed, name=self.name, **settings)
        return SequencePredictor(self.kind, self.hyper(fold_index), name=self.name)

    def with_settings(self, **updates: Any) -> ModelSpec:
        return ModelSpec(kind=self.kind, settings={**self.settings, **updates}, seed=self.seed, label=self.label)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "settings": dict(self.settings), "seed": self.seed, "label": self.label}

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> ModelSpec:
        """Parse ``kind[:key=value,...]``; values are read as YAML scalars.

        Raises:
            HdsFallcastConfigError: On a malformed setting, unknown kind or unknown key.
        """
        kind, _, rest = text.strip().partition(":")
        settings: dict[str, Any] = {}
        for item in filter(None, (part.strip() for part in rest.split(","))):
            key, sep, value = item.partition("=")
            if not sep or not key.strip():
                raise HdsFallcastConfigError(
                    f"malformed model setting '{item}' in '{text}'",
                    error_code="malformed-model-spec",
                    details={"spec": text},
                )
            settings[key.strip()] = yaml.safe_load(value.strip())
        return cls(kind=kind.strip(), settings=settings, seed=seed)


def predictor_from_dict(data: Mapping[str, Any]) -> Any:
    """Rebuild a fitted model from :meth:`FallPredictor.to_dict` output.

    Returns the underlying model object: a baseline or tree model, or a
    :class:`~hds_fallcast.seqnet.Checkpoint` for recurrent kinds.

    Raises:
        HdsFallcastConfigError: On an unknown kind.
    """
    kind = data.get("kind")
    loaders = {
        baseline.ThresholdModel.KIND: baseline.ThresholdModel.from_dict,
        baseline.KnnModel.KIND: baseline.KnnModel.from_dict,
        trees.ForestModel.KIND: trees.ForestModel.from_dict,
        trees.GbtModel.KIND: trees.GbtModel.from_dict,
    }
    if kind in loaders:
        return loaders[kind](dict(data))
    if kind in SEQUENCE_KINDS:
        return seqnet.checkpoint_from_dict(dict(data))
    raise HdsFallcastConfigError(f"unknown model kind {kind!r}", error_code="unknown-model")
