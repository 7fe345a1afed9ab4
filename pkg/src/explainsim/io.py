"""Readers and writers for importance files, density curves and t-test results.

Importance files hold one row per (explainer, instance, feature)::

    explainer,instance_id,feature,importance
    lime,0,f0,0.125
    ...

The JSON flavour is an array of objects with the same four keys. Numbers
are written with ``repr`` so they round-trip exactly and never depend on
the locale.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DataError
from .ranking import ImportanceRecord
from .stats import DensityCurve, TTestResult

__all__ = [
    "IMPORTANCE_FIELDS",
    "write_importances",
    "ingest_importances",
    "write_density_csv",
    "read_density_csv",
    "write_ttest_json",
    "read_sample",
]

IMPORTANCE_FIELDS = ("explainer", "instance_id", "feature", "importance")


def _fmt(v: float) -> str:
    return repr(float(v))


def _importance_rows(records: Iterable[ImportanceRecord]):
    for rec in records:
        for name, score in zip(rec.feature_names, rec.scores.tolist()):
            yield rec.explainer, rec.instance_id, name, score


def write_importances(records: Iterable[ImportanceRecord], path) -> Path:
    """Write records as CSV, or as JSON when ``path`` ends in ``.json``."""
    path = Path(path)
    rows = list(_importance_rows(records))
    if path.suffix.lower() == ".json":
        payload = [dict(zip(IMPORTANCE_FIELDS, row)) for row in rows]
        path.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
        return path
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(IMPORTANCE_FIELDS)
        for explainer, iid, feat, score in rows:
            w.writerow([explainer, iid, feat, _fmt(score)])
    return path


def _read_rows(path: Path) -> list[tuple[int, dict]]:
    """Return ``(row_number, mapping)`` pairs; row 1 is the CSV header."""
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise DataError(f"{path}: invalid JSON: {e}") from None
        if not isinstance(data, list):
            raise DataError(f"{path}: expected a JSON array of row objects")
        rows = []
        for i, obj in enumerate(data, start=1):
            if not isinstance(obj, dict):
                raise DataError(f"{path}: row {i}: expected an object")
            missing = [k for k in IMPORTANCE_FIELDS if k not in obj]
            if missing:
                raise DataError(f"{path}: row {i}: missing column(s) {', '.join(missing)}")
            rows.append((i, obj))
        return rows
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [k for k in IMPORTANCE_FIELDS if k not in header]
        if missing:
            raise DataError(f"{path}: row 1: missing column(s) {', '.join(missing)}")
        return [(i, row) for i, row in enumerate(reader, start=2)]


def ingest_importances(path) -> list[ImportanceRecord]:
    """Parse an importance file into one record per (explainer, instance).

    Every group must score the same feature set, which is the union of all
    features in the file in order of first appearance.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: no such file")
    groups: dict[tuple[str, int], dict[str, float]] = {}
    first_row: dict[tuple[str, int], int] = {}
    features: dict[str, None] = {}
    for rownum, row in _read_rows(path):
        explainer = str(row["explainer"]).strip()
        feat = str(row["feature"]).strip()
        if not explainer or not feat:
            raise DataError(f"{path}: row {rownum}: empty explainer or feature")
        try:
            iid = int(str(row["instance_id"]).strip())
        except ValueError:
            raise DataError(
                f"{path}: row {rownum}: instance_id {row['instance_id']!r} is not an integer"
            ) from None
        try:
            score = float(row["importance"])
        except (TypeError, ValueError):
            raise DataError(
                f"{path}: row {rownum}: importance {row['importance']!r} is not a number"
            ) from None
        if not math.isfinite(score):
            raise DataError(f"{path}: row {rownum}: importance is not finite")
        key = (explainer, iid)
        group = groups.setdefault(key, {})
        first_row.setdefault(key, rownum)
        if feat in group:
            raise DataError(
                f"{path}: row {rownum}: duplicate entry for explainer {explainer!r}, "
                f"instance {iid}, feature {feat!r}"
            )
        group[feat] = score
        features.setdefault(feat, None)

    if not groups:
        raise DataError(f"{path}: no importance rows")
    names = tuple(features)
    records = []
    for key, group in groups.items():
        if len(group) != len(names):
            lacking = [f for f in names if f not in group]
            raise DataError(
                f"{path}: row {first_row[key]}: explainer {key[0]!r}, instance {key[1]} "
                f"covers {len(group)} of {len(names)} features (missing {', '.join(lacking)})"
            )
        records.append(
            ImportanceRecord(key[0], key[1], np.array([group[f] for f in names]), names)
        )
    return records


def write_density_csv(curve: DensityCurve, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["grid", "density"])
        for g, d in zip(curve.grid.tolist(), curve.density.tolist()):
            w.writerow([_fmt(g), _fmt(d)])
    return path


def read_density_csv(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]


def write_ttest_json(result: TTestResult, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(result.as_dict(), indent=2) + "\n", encoding="utf-8")
    return path


def read_sample(path) -> np.ndarray:
    """Read one value per line (first CSV column); a non-numeric first line
    is treated as a header."""
    values: list[float] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            cell = line.split(",")[0].strip()
            if not cell or cell.startswith("#"):
                continue
            try:
                values.append(float(cell))
            except ValueError:
                if lineno == 1:
                    continue
                raise DataError(f"{path}: row {lineno}: {cell!r} is not a number") from None
    return np.asarray(values)


def write_rows(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return path
