"""JSON and CSV encodings for distributions, samples, models and reports.

JSON documents written by the CLI have two top-level keys: ``metadata``
(timestamp and run id, which vary between runs) and ``payload`` (a function
of the inputs and seed only). Non-finite floats are written as the strings
"inf", "-inf" and "nan" so every document is strict JSON.

CSV numbers use 17 significant digits, enough to round-trip a double.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from ..core.distributions import DiscreteJoint, SampleSet
from ..utils.ids import new_run_id
from ..utils.time import now_rfc3339

CSV_FLOAT_FORMAT = ".17g"


class CodecError(ValueError):
    """Raised when a document does not match the expected schema."""


def _finite_or_token(value: float) -> float | str:
    if math.isfinite(value):
        return value
    if math.isnan(value):
        return "nan"
    return "inf" if value > 0 else "-inf"


def to_jsonable(value: Any) -> Any:
    """Convert numpy values and non-finite floats into strict-JSON values."""
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, list | tuple):
        return [to_jsonable(v) for v in value]
    if isinstance(value, bool | np.bool_):
        return bool(value)
    if isinstance(value, int | np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        return _finite_or_token(float(value))
    return value


def dumps_document(payload: Mapping[str, Any], run_id: str | None = None) -> str:
    document = {
        "metadata": {"timestamp": now_rfc3339(), "run_id": run_id or new_run_id()},
        "payload": to_jsonable(payload),
    }
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def dumps_payload(payload: Mapping[str, Any]) -> str:
    """Payload alone, as it appears inside a document."""
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n"


def load_json(path: str | Path) -> dict[str, Any]:
    """Read a JSON object; a CLI document is unwrapped to its payload."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CodecError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e
    if not isinstance(raw, dict):
        raise CodecError(f"{path}: expected a JSON object")
    if set(raw) == {"metadata", "payload"} and isinstance(raw["payload"], dict):
        return raw["payload"]
    return raw


def _require(raw: Mapping[str, Any], key: str, kind: str) -> Any:
    if key not in raw:
        raise CodecError(f"{kind} record is missing {key!r}")
    return raw[key]


def _float_array(values: Any, what: str) -> np.ndarray:
    try:
        arr = np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise CodecError(f"{what} must be numeric") from e
    return arr


def discrete_joint_to_json(dist: DiscreteJoint) -> dict[str, Any]:
    return {
        "atoms": dist.atoms.tolist(),
        "weights": dist.weights.tolist(),
        "etas": dist.etas.tolist(),
    }


def _unwrap(raw: Mapping[str, Any], key: str) -> Mapping[str, Any]:
    """Accept a bare record or the payload written by `sample`, which nests it under ``key``."""
    nested = raw.get(key)
    return nested if isinstance(nested, Mapping) else raw


def discrete_joint_from_json(raw: Mapping[str, Any]) -> DiscreteJoint:
    raw = _unwrap(raw, "distribution")
    atoms = _float_array(_require(raw, "atoms", "distribution"), "atoms")
    weights = _float_array(_require(raw, "weights", "distribution"), "weights")
    etas = _float_array(_require(raw, "etas", "distribution"), "etas")
    try:
        return DiscreteJoint(atoms=atoms, weights=weights, etas=etas)
    except ValueError as e:
        raise CodecError(f"invalid distribution: {e}") from e


def sample_set_to_json(data: SampleSet) -> dict[str, Any]:
    return {"features": data.features.tolist(), "labels": data.labels.astype(int).tolist()}


def sample_set_from_json(raw: Mapping[str, Any]) -> SampleSet:
    raw = _unwrap(raw, "samples")
    features = _float_array(_require(raw, "features", "sample set"), "features")
    labels = _float_array(_require(raw, "labels", "sample set"), "labels")
    try:
        return SampleSet(features=features, labels=labels)
    except ValueError as e:
        raise CodecError(f"invalid sample set: {e}") from e


def format_cell(value: Any) -> str:
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, float | np.floating):
        return format(float(value), CSV_FLOAT_FORMAT)
    return str(value)


class CsvRowWriter:
    """Writes a header on construction, then one formatted row per call."""

    def __init__(self, stream: TextIO, columns: Sequence[str]) -> None:
        self._columns = list(columns)
        self._writer = csv.writer(stream, lineterminator="\n")
        self._writer.writerow(self._columns)

    def write(self, row: Mapping[str, Any]) -> None:
        self._writer.writerow([format_cell(row[c]) for c in self._columns])


def write_csv(rows: Iterable[Mapping[str, Any]], columns: Sequence[str], stream: TextIO) -> None:
    writer = CsvRowWriter(stream, columns)
    for row in rows:
        writer.write(row)


def csv_text(rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    write_csv(rows, columns, buffer)
    return buffer.getvalue()


def _feature_columns(d: int) -> list[str]:
    return [f"x{j}" for j in range(d)]


def discrete_joint_rows(dist: DiscreteJoint) -> tuple[list[str], list[dict[str, Any]]]:
    """One row per atom: x0..x{d-1}, weight, eta."""
    columns = [*_feature_columns(dist.dimension), "weight", "eta"]
    rows = []
    for atom, weight, eta in zip(dist.atoms, dist.weights, dist.etas, strict=True):
        row: dict[str, Any] = {f"x{j}": float(v) for j, v in enumerate(atom)}
        row.update(weight=float(weight), eta=float(eta))
        rows.append(row)
    return columns, rows


def sample_set_rows(data: SampleSet) -> tuple[list[str], list[dict[str, Any]]]:
    """One row per sample: x0..x{d-1}, label."""
    columns = [*_feature_columns(data.dimension), "label"]
    rows = []
    for features, label in zip(data.features, data.labels, strict=True):
        row: dict[str, Any] = {f"x{j}": float(v) for j, v in enumerate(features)}
        row["label"] = int(label)
        rows.append(row)
    return columns, rows


def _read_table(path: str | Path) -> tuple[list[str], np.ndarray]:
    with Path(path).open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration as e:
            raise CodecError(f"{path}: empty CSV file") from e
        body = [row for row in reader if row]
    if not body:
        raise CodecError(f"{path}: CSV file has no data rows")
    try:
        table = np.asarray([[float(cell) for cell in row] for row in body], dtype=np.float64)
    except ValueError as e:
        raise CodecError(f"{path}: non-numeric CSV cell ({e})") from e
    if table.shape[1] != len(header):
        raise CodecError(f"{path}: rows have {table.shape[1]} cells, header has {len(header)}")
    return header, table


def _split_features(header: list[str], table: np.ndarray, trailing: list[str], path: str | Path) -> np.ndarray:
    n_features = len(header) - len(trailing)
    if n_features < 1 or header != [*_feature_columns(n_features), *trailing]:
        expected = ", ".join(["x0", "...", *trailing])
        raise CodecError(f"{path}: expected columns {expected}, got {', '.join(header)}")
    return table[:, :n_features]


def read_discrete_joint_csv(path: str | Path) -> DiscreteJoint:
    header, table = _read_table(path)
    atoms = _split_features(header, table, ["weight", "eta"], path)
    try:
        return DiscreteJoint(atoms=atoms, weights=table[:, -2], etas=table[:, -1])
    except ValueError as e:
        raise CodecError(f"{path}: invalid distribution: {e}") from e


def read_sample_set_csv(path: str | Path) -> SampleSet:
    header, table = _read_table(path)
    features = _split_features(header, table, ["label"], path)
    try:
        return SampleSet(features=features, labels=table[:, -1])
    except ValueError as e:
        raise CodecError(f"{path}: invalid sample set: {e}") from e


def read_discrete_joint(path: str | Path) -> DiscreteJoint:
    """Load a distribution from .csv or JSON, chosen by file suffix."""
    if Path(path).suffix.lower() == ".csv":
        return read_discrete_joint_csv(path)
    return discrete_joint_from_json(load_json(path))


def read_sample_set(path: str | Path) -> SampleSet:
    """Load a sample set from .csv or JSON, chosen by file suffix."""
    if Path(path).suffix.lower() == ".csv":
        return read_sample_set_csv(path)
    return sample_set_from_json(load_json(path))
