"""Encounter CSV persistence and atomic artifact writes.

CSV layout, one row per score::

    encounter_id,seq_index,hds,outcome,origin
    enc-000001,1,9,0,4
    enc-000001,2,10,0,4

``seq_index`` is 1-based, and rows of one encounter are contiguous and
ascending. The scale lives in a sidecar ``<stem>.meta.json`` holding
``{s_min, s_max, delta_t_hours}``.

Every artifact (CSV, JSON, checkpoints, reports) is buffered through
``splurge_safe_io.open_safe_text_writer`` into a sibling temporary file and
moved over the target with ``os.replace``, so readers never see a partial
file. Reads go through ``SafeTextFileReader`` for newline normalisation and
path validation. I/O failures surface as :class:`HdsFallcastOSError`.

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from __future__ import annotations

import json
import logging
import os
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any

from splurge_dsv import DsvHelper, SplurgeDsvError, SplurgeDsvTypeError
from splurge_pub_sub import PubSubSolo
from splurge_safe_io import SafeTextFileReader, SplurgeSafeIoError, open_safe_text_writer

from .constants import EVENT_SCOPE
from .exceptions import (
    HdsFallcastDataError,
    HdsFallcastError,
    HdsFallcastOSError,
    HdsFallcastTypeError,
    HdsFallcastValueError,
)
from .hds_core import Dataset, Encounter, HdsSeries, ScaleConfig, validate_dataset

logger = logging.getLogger(__name__)

CSV_HEADER = ("encounter_id", "seq_index", "hds", "outcome", "origin")
DELIMITER = ","
METADATA_SUFFIX = ".meta.json"
# Violations quoted in a load error; the count is always complete.
MAX_REPORTED_VIOLATIONS = 20


def metadata_path(csv_path: Path | str) -> Path:
    """Sidecar path for ``csv_path``: ``data.csv`` -> ``data.meta.json``."""
    return Path(csv_path).with_suffix(METADATA_SUFFIX)


@contextmanager
def _io_errors(path: Path) -> Iterator[None]:
    try:
        yield
    except SplurgeSafeIoError as ex:
        raise HdsFallcastOSError(
            message=f"{ex.message} : {path}", error_code=ex.error_code or "io", details={"path": str(path)}
        ) from ex
    except OSError as ex:
        raise HdsFallcastOSError(
            message=f"OS error for {path}: {ex}", error_code="io", details={"path": str(path)}
        ) from ex


def write_text_atomic(path: Path | str, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary sibling and ``os.replace``.

    Raises:
        HdsFallcastOSError: If the file cannot be written.
    """
    target = Path(path)
    temp = target.with_name(f".{target.name}.{os.getpid()}.tmp")
    with _io_errors(target):
        try:
            with open_safe_text_writer(temp, create_parents=True) as buffer:
                buffer.write(text)
            os.replace(temp, target)
        finally:
            if temp.exists():
                temp.unlink()
    logger.debug("wrote %s (%d chars)", target, len(text))


def dumps_json(data: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, shortest round-trip floats.

    Raises:
        HdsFallcastValueError: If ``data`` holds NaN or infinity.
        HdsFallcastTypeError: If ``data`` holds an object JSON cannot represent.
    """
    try:
        return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"
    except ValueError as e:
        raise HdsFallcastValueError(f"cannot serialise to JSON: {e}", error_code="non-finite-json") from e
    except TypeError as e:
        raise HdsFallcastTypeError(f"cannot serialise to JSON: {e}", error_code="unserialisable-json") from e


def write_json_atomic(path: Path | str, data: Any) -> None:
    write_text_atomic(path, dumps_json(data))


def read_text(path: Path | str) -> list[str]:
    """Read ``path`` as normalised lines.

    Raises:
        HdsFallcastOSError: If the file is missing or unreadable.
    """
    source = Path(path)
    with _io_errors(source):
        return SafeTextFileReader(source).readlines()


def read_json(path: Path | str) -> Any:
    """Parse a JSON document.

    Raises:
        HdsFallcastOSError: If the file is missing or unreadable.
        HdsFallcastDataError: If the content is not valid JSON.
    """
    text = "\n".join(read_text(path))
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise HdsFallcastDataError(
            f"invalid JSON in {path}: {e.msg}",
            error_code="malformed-json",
            details={"path": str(path), "line": e.lineno},
        ) from e


def _tokenize(lines: list[str], correlation_id: str | None) -> list[list[str]]:
    try:
        return DsvHelper.parses(lines, delimiter=DELIMITER, strip=True, correlation_id=correlation_id)
    except SplurgeDsvTypeError as ex:
        raise HdsFallcastTypeError(
            f"encounter rows must be a list of strings: {ex.message}", error_code="invalid-rows"
        ) from ex
    except SplurgeDsvError as ex:
        raise HdsFallcastDataError(
            f"cannot tokenize encounter rows: {ex.message}",
            error_code="malformed-row",
            details={"dsv_error": ex.error_code},
        ) from ex


def _malformed(line_number: int, message: str, **details: Any) -> HdsFallcastDataError:
    return HdsFallcastDataError(
        f"line {line_number}: {message}",
        error_code="malformed-row",
        details={"line": line_number, **details},
    )


def parse_csv_lines(
    lines: list[str], scale: ScaleConfig | None = None, *, correlation_id: str | None = None
) -> Dataset:
    """Parse encounter rows (header included) into a :class:`Dataset`.

    Lines are tokenized with ``splurge_dsv.DsvHelper``; the row checks below
    run on its tokens so errors can name the line. The result is not validated against ``scale``; :func:`load_csv` does that.

    Raises:
        HdsFallcastDataError: On a missing header or any malformed row, naming
            the 1-based line number.
    """
    rows = _tokenize(lines, correlation_id)
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise HdsFallcastDataError(
            f"expected header '{DELIMITER.join(CSV_HEADER)}'",
            error_code="missing-header",
            details={"line": 1},
        )

    encounters: list[Encounter] = []
    closed: set[str] = set()
    current: str | None = None
    scores: list[int] = []
    outcome = origin = 0

    def close() -> None:
        if current is not None:
            encounters.append(Encounter(HdsSeries(current, tuple(scores)), outcome, origin))
            closed.add(current)

    for line_number, (line, fields) in enumerate(zip(lines[1:], rows[1:], strict=True), start=2):
        if not line.strip():
            continue
        if len(fields) != len(CSV_HEADER):
            raise _malformed(line_number, f"expected {len(CSV_HEADER)} fields, found {len(fields)}")
        encounter_id = fields[0]
        if not encounter_id:
            raise _malformed(line_number, "empty encounter_id")
        try:
            seq_index, hds, row_outcome, row_origin = (int(value) for value in fields[1:])
        except ValueError as e:
            raise _malformed(line_number, f"non-integer field ({e})") from e

        if encounter_id != current:
            if encounter_id in closed:
                raise HdsFallcastDataError(
                    f"line {line_number}: rows for encounter '{encounter_id}' are not contiguous",
                    error_code="non-contiguous-encounter",
                    details={"line": line_number, "encounter_id": encounter_id},
                )
            close()
            current, scores, outcome, origin = encounter_id, [], row_outcome, row_origin
        elif (row_outcome, row_origin) != (outcome, origin):
            raise _malformed(line_number, "outcome and origin must be constant within an encounter")

        if seq_index != len(scores) + 1:
            raise _malformed(line_number, f"seq_index {seq_index} should be {len(scores) + 1}")
        scores.append(hds)

    close()
    return Dataset.of(encounters, scale)


def load_csv(path: Path | str, scale: ScaleConfig | None = None, *, correlation_id: str | None = None) -> Dataset:
    """Load and validate an encounter CSV.

    The scale comes from ``scale`` when given, else from the metadata
    sidecar, else the defaults.

    Raises:
        HdsFallcastOSError: If the file cannot be read.
        HdsFallcastDataError: On malformed rows or validation violations; the
            violations are listed in ``details``.
    """
    source = Path(path)
    PubSubSolo.publish(
        topic="hds.io.load.begin", data={"path": str(source)}, correlation_id=correlation_id, scope=EVENT_SCOPE
    )
    try:
        if scale is None:
            sidecar = metadata_path(source)
            scale = load_metadata(sidecar) if sidecar.exists() else ScaleConfig()
        dataset = parse_csv_lines(read_text(source), scale, correlation_id=correlation_id)
        violations = validate_dataset(dataset)
        if violations:
            raise HdsFallcastDataError(
                f"{source}: {len(violations)} validation violation(s), first: {violations[0].message}",
                error_code="invalid-dataset",
                details={
                    "path": str(source),
                    "count": len(violations),
                    "violations": [
                        {"encounter_id": v.encounter_id, "rule": v.rule, "message": v.message}
                        for v in violations[:MAX_REPORTED_VIOLATIONS]
                    ],
                },
            )
    except HdsFallcastError as e:
        PubSubSolo.publish(
            topic="hds.io.load.error",
            data={"path": str(source), "error": e},
            correlation_id=correlation_id,
            scope=EVENT_SCOPE,
        )
        raise

    logger.debug("loaded %d encounters from %s", len(dataset), source)
    PubSubSolo.publish(
        topic="hds.io.load.end",
        data={"path": str(source), "encounters": len(dataset)},
        correlation_id=correlation_id,
        scope=EVENT_SCOPE,
    )
    return dataset


def format_csv(d: Dataset) -> str:
    lines = [DELIMITER.join(CSV_HEADER)]
    for encounter in d:
        for seq_index, score in enumerate(encounter.series.scores, start=1):
            row = (encounter.encounter_id, seq_index, score, encounter.outcome, encounter.origin)
            lines.append(DELIMITER.join(str(value) for value in row))
    return "\n".join(lines) + "\n"


def save_csv(path: Path | str, d: Dataset, *, correlation_id: str | None = None) -> None:
    """Write ``d`` and its metadata sidecar.

    Raises:
        HdsFallcastDataError: If ``d`` fails validation or an id contains the delimiter.
        HdsFallcastOSError: If a file cannot be written.
    """
    target = Path(path)
    PubSubSolo.publish(
        topic="hds.io.save.begin", data={"path": str(target)}, correlation_id=correlation_id, scope=EVENT_SCOPE
    )
    try:
        violations = validate_dataset(d)
        if violations:
            raise HdsFallcastDataError(
                f"refusing to save an invalid dataset: {violations[0].message}",
                error_code="invalid-dataset",
                details={"count": len(violations)},
            )
        bad_ids = [eid for eid in d.ids() if DELIMITER in eid or eid != eid.strip()]
        if bad_ids:
            raise HdsFallcastDataError(
                f"encounter id '{bad_ids[0]}' cannot be written to CSV",
                error_code="invalid-encounter-id",
                details={"encounter_id": bad_ids[0]},
            )
        write_text_atomic(target, format_csv(d))
        write_json_atomic(metadata_path(target), d.scale.to_dict())
    except HdsFallcastError as e:
        PubSubSolo.publish(
            topic="hds.io.save.error",
            data={"path": str(target), "error": e},
            correlation_id=correlation_id,
            scope=EVENT_SCOPE,
        )
        raise
    PubSubSolo.publish(
        topic="hds.io.save.end",
        data={"path": str(target), "encounters": len(d)},
        correlation_id=correlation_id,
        scope=EVENT_SCOPE,
    )


def load_metadata(path: Path | str) -> ScaleConfig:
    """Read a ``{s_min, s_max, delta_t_hours}`` sidecar.

    Raises:
        HdsFallcastDataError: If keys are missing or unknown, or the values do
            not form a valid scale.
    """
    data = read_json(path)
    expected = {"s_min", "s_max", "delta_t_hours"}
    if not isinstance(data, dict) or set(data) != expected:
        raise HdsFallcastDataError(
            f"metadata {path} must hold exactly {sorted(expected)}",
            error_code="malformed-metadata",
            details={"path": str(path)},
        )
    try:
        return ScaleConfig(s_min=data["s_min"], s_max=data["s_max"], delta_t_hours=float(data["delta_t_hours"]))
    except (HdsFallcastError, TypeError, ValueError) as ex:
        raise HdsFallcastDataError(
            f"metadata {path} does not describe a valid scale: {ex}",
            error_code="malformed-metadata",
            details={"path": str(path), **{key: data[key] for key in sorted(expected)}},
        ) from ex
