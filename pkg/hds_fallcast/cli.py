"""Command-line interface for hds-fallcast.

Subcommands:
    synth      Generate a synthetic encounter CSV (plus metadata sidecar).
    train      Fit every configured model on a balanced split; write models and histories.
    cv         Balanced k-fold cross-validation of every model on shared folds.
    roc        Pooled out-of-fold ROC curve per model, as CSV.
    gradcheck  Compare BPTT gradients with finite differences for all cells.
    tune       Random hyperparameter search on the validation split.

Exit codes: 0 success, 1 configuration error, 2 data or I/O error,
3 numeric error (including a failed gradient check), 130 interrupted.

Public API:
    - parse_arguments: Build and parse the CLI argument parser.
    - cmd_synth, cmd_train, cmd_cv, cmd_roc, cmd_gradcheck, cmd_tune
    - run_cli: Main entrypoint invoked by ``__main__``.

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
import uuid
from collections.abc import Callable, Sequence
from dataclasses import replace
from pathlib import Path

from . import __version__
from .cells import CellKind
from .config import RunConfig, load_run_config
from .encounter_io import load_csv, metadata_path, save_csv, write_json_atomic
from .evaluation import (
    balanced_split,
    cross_validate,
    format_table,
    make_folds,
    roc_auc,
    run_folds,
    write_roc_csv,
)
from .exceptions import HdsFallcastConfigError, HdsFallcastError
from .hds_core import Dataset
from .seqnet import grad_check
from .synth import generate
from .tuning import random_search

logger = logging.getLogger(__name__)

EXIT_NUMERIC = 3
EXIT_INTERRUPTED = 130


def parse_arguments(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Construct and parse command-line arguments.

    Args:
        argv: Arguments without the program name; defaults to ``sys.argv[1:]``.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", "-c", type=str, help="YAML config file (values overridden by CLI flags)")
    common.add_argument("--seed", type=int, help="Root seed (default: $HDS_FALLCAST_SEED, else 0)")
    common.add_argument("--out", "-o", type=str, help="Output directory (default: out)")
    common.add_argument("--workers", type=int, help="Worker processes for fold-level work (default: 1)")
    common.add_argument(
        "--model",
        "-m",
        dest="models",
        action="append",
        help="Model spec 'kind[:key=value,...]', kind in {threshold,knn,forest,gbt,rnn,lstm,gru}; repeatable",
    )
    common.add_argument("--theta", type=int, help="Threshold for 'threshold' models that do not set one")
    common.add_argument("--data", "-d", type=str, help="Input encounter CSV")
    common.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")

    parser = argparse.ArgumentParser(
        prog="hds-fallcast",
        description="Fall-risk prediction from Hester Davis Score time series",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  hds-fallcast synth --out data --seed 7
  hds-fallcast cv --data data/encounters.csv --model threshold:theta=7 --model threshold:theta=20 --model gru
  hds-fallcast roc --data data/encounters.csv --model knn:k=7 --workers 4
  hds-fallcast gradcheck
  hds-fallcast tune --data data/encounters.csv --model gru --config tune.yaml
    """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("synth", "generate a synthetic encounter CSV"),
        ("train", "fit models on a balanced split"),
        ("cv", "balanced k-fold cross-validation"),
        ("roc", "pooled out-of-fold ROC curves"),
        ("gradcheck", "finite-difference gradient check"),
        ("tune", "random hyperparameter search"),
    ):
        sub.add_parser(name, parents=[common], help=help_text)
    sub.choices["cv"].add_argument("--folds", dest="k_folds", type=int, help="Number of folds (default: 10)")
    sub.choices["roc"].add_argument("--folds", dest="k_folds", type=int, help="Number of folds (default: 10)")
    sub.choices["tune"].add_argument("--trials", type=int, help="Trials per model (default: 10)")

    return parser.parse_args(list(sys.argv[1:] if argv is None else argv))


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.=-]+", "_", name)


def _load_data(config: RunConfig, correlation_id: str | None = None) -> Dataset:
    if config.data is None:
        raise HdsFallcastConfigError("this command needs --data <csv>", error_code="missing-data")
    scale = None if metadata_path(config.data).exists() else config.scale
    return load_csv(config.data, scale, correlation_id=correlation_id)


def cmd_synth(config: RunConfig, correlation_id: str | None = None) -> Path:
    """Write ``encounters.csv``, its metadata and ``synth_config.json`` under ``config.out``."""
    synth = replace(config.synth, seed=config.seed)
    dataset = generate(synth, correlation_id=correlation_id)
    out = Path(config.out)
    target = out / "encounters.csv"
    save_csv(target, dataset, correlation_id=correlation_id)
    write_json_atomic(out / "synth_config.json", synth.to_dict())
    return target


def cmd_train(config: RunConfig, correlation_id: str | None = None) -> list[Path]:
    """Fit each model on one balanced split; write ``<model>.model.json`` (and ``.history.json``)."""
    dataset = _load_data(config, correlation_id)
    split = balanced_split(dataset, config.seed)
    train, validation = dataset.by_id(split.train_ids), dataset.by_id(split.validation_ids)
    out = Path(config.out)
    written = []
    for spec in config.model_specs():
        predictor = spec(0)
        predictor.fit(train, validation, dataset.scale)
        model_path = out / f"{_safe_name(spec.name)}.model.json"
        document = predictor.to_dict()
        write_json_atomic(model_path, document)
        written.append(model_path)
        if spec.is_sequence:
            history_path = out / f"{_safe_name(spec.name)}.history.json"
            write_json_atomic(history_path, {"model": spec.name, "history": document["history"]})
            written.append(history_path)
        logger.info("trained %s -> %s", spec.name, model_path)
    return written


def cmd_cv(config: RunConfig, correlation_id: str | None = None) -> Path:
    """Cross-validate every model on one shared set of folds; write ``cv_report.json``."""
    dataset = _load_data(config, correlation_id)
    folds = make_folds(dataset, config.k_folds, config.seed)
    reports = [
        cross_validate(
            spec, dataset, folds=folds, workers=config.workers, model_name=spec.name, correlation_id=correlation_id
        )
        for spec in config.model_specs()
    ]
    target = Path(config.out) / "cv_report.json"
    write_json_atomic(
        target,
        {
            "seed": config.seed,
            "k_folds": len(folds),
            "folds": [
                {
                    "fold_index": f.fold_index,
                    "test": len(f.test_ids),
                    "train": len(f.train_ids),
                    "validation": len(f.validation_ids),
                }
                for f in folds
            ],
            "reports": [report.to_dict() for report in reports],
        },
    )
    print(format_table(reports), end="")
    return target


def cmd_roc(config: RunConfig, correlation_id: str | None = None) -> list[Path]:
    """Pool every fold's test predictions per model and write ``roc_<model>.csv``."""
    dataset = _load_data(config, correlation_id)
    folds = make_folds(dataset, config.k_folds, config.seed)
    written = []
    for spec in config.model_specs():
        outcomes = run_folds(spec, dataset, folds, workers=config.workers, correlation_id=correlation_id)
        scores = [s for o in outcomes for s in o.scores]
        truth = [t for o in outcomes for t in o.truth]
        curve = roc_auc(scores, truth)
        target = Path(config.out) / f"roc_{_safe_name(spec.name)}.csv"
        write_roc_csv(target, curve)
        print(f"{spec.name}: pooled AUC {curve.auc:.4f} -> {target}")
        written.append(target)
    return written


def cmd_gradcheck(config: RunConfig, correlation_id: str | None = None) -> bool:
    """Check every cell kind; write ``gradcheck.json``. Returns True when all pass."""
    errors = {kind.value: grad_check(kind, seed=config.seed) for kind in CellKind}
    passed = all(error < config.gradcheck_tolerance for error in errors.values())
    for kind, error in errors.items():
        status = "ok" if error < config.gradcheck_tolerance else "FAIL"
        print(f"{kind}: max relative error {error:.3e} {status}")
    write_json_atomic(
        Path(config.out) / "gradcheck.json",
        {"seed": config.seed, "tolerance": config.gradcheck_tolerance, "errors": errors, "passed": passed},
    )
    return passed


def cmd_tune(config: RunConfig, correlation_id: str | None = None) -> Path:
    """Random search per model on one balanced split; write ``tuning.json``."""
    dataset = _load_data(config, correlation_id)
    split = balanced_split(dataset, config.seed)
    train, validation = dataset.by_id(split.train_ids), dataset.by_id(split.validation_ids)
    results = []
    for spec in config.model_specs():
        result = random_search(
            spec, None, train, validation, dataset.scale, config.trials, config.seed, correlation_id=correlation_id
        )
        print(f"{spec.name}: best validation AUC {result.best_score:.4f} with {result.best.name}")
        results.append({"model": spec.name, **result.to_dict()})
    target = Path(config.out) / "tuning.json"
    write_json_atomic(target, {"seed": config.seed, "results": results})
    return target


def _dispatch(command: str, config: RunConfig, correlation_id: str) -> int:
    handlers: dict[str, Callable[[RunConfig, str | None], object]] = {
        "synth": cmd_synth,
        "train": cmd_train,
        "cv": cmd_cv,
        "roc": cmd_roc,
        "tune": cmd_tune,
    }
    if command == "gradcheck":
        return 0 if cmd_gradcheck(config, correlation_id) else EXIT_NUMERIC
    result = handlers[command](config, correlation_id)
    for path in result if isinstance(result, list) else [result]:
        print(f"wrote {path}")
    return 0


def run_cli(argv: Sequence[str] | None = None) -> int:
    """Main entry point for the hds-fallcast CLI.

    Returns:
        Exit code (0 success, otherwise the failing error category's code).
    """
    try:
        args = parse_arguments(argv)
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else logging.WARNING,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
        overrides = {
            "seed": args.seed,
            "out": args.out,
            "workers": args.workers,
            "models": args.models,
            "theta": args.theta,
            "data": args.data,
            "k_folds": getattr(args, "k_folds", None),
            "trials": getattr(args, "trials", None),
        }
        config = load_run_config(args.config, overrides, os.environ)
        return _dispatch(args.command, config, uuid.uuid4().hex)

    except KeyboardInterrupt:
        print("\nOperation cancelled by user.", file=sys.stderr)
        return EXIT_INTERRUPTED
    except HdsFallcastError as e:
        print(f"Error: {e.message}", file=sys.stderr)
        if e.details:
            print(f"Details: {e.details}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        print(f"Unexpected error: {e}", file=sys.stderr)
        return 1
