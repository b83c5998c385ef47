"""Read sweep CSV files and their JSON provenance sidecars.

This package consumes only the documented external interface of the
simulator: schema-version-1 CSV plus an optional `.json` sidecar. The
expected header is restated here verbatim so that a drifting producer is
caught by SchemaMismatch instead of silently misplotted.
"""

import csv
import json
import math
import os

import numpy as np

from .errors import EmptyInput, SchemaMismatch

SCHEMA_VERSION = "1"

CSV_COLUMNS = (
    "sweep_var", "delta_over_wm", "power_uW", "n_th", "I_b", "n_s", "branch",
    "stable", "margin", "E_N", "chi",
    "eig1_re", "eig1_im", "eig2_re", "eig2_im",
    "eig3_re", "eig3_im", "eig4_re", "eig4_im",
    "gamma_b", "gamma_c", "Gbc_abs",
)

ARGMAX_COLUMN = "argmax_power_uW"

_TEXT_COLUMNS = {"sweep_var"}


def _to_float(text):
    try:
        return float(text)
    except ValueError:
        return math.nan


def load_csv(path):
    """Parse a sweep CSV into a dict of column name -> numpy array.

    Text columns stay as object arrays; everything else becomes float64
    (`stable` as 0.0/1.0). Raises SchemaMismatch on an unexpected header and
    EmptyInput when there are no data rows.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise EmptyInput(f"{path}: file is empty")
    header = tuple(rows[0])
    if header not in (CSV_COLUMNS, CSV_COLUMNS + (ARGMAX_COLUMN,)):
        raise SchemaMismatch(
            f"{path}: header does not match sweep schema version "
            f"{SCHEMA_VERSION}: {','.join(header)}")
    body = rows[1:]
    if not body:
        raise EmptyInput(f"{path}: no data rows")
    if any(len(r) != len(header) for r in body):
        raise SchemaMismatch(f"{path}: ragged row (wrong column count)")

    data = {}
    for j, name in enumerate(header):
        col = [r[j] for r in body]
        if name in _TEXT_COLUMNS:
            data[name] = np.array(col, dtype=object)
        else:
            data[name] = np.array([_to_float(x) for x in col])
    return data


def load_sidecar(csv_path):
    """Provenance dict from the sidecar next to `csv_path`, or None."""
    json_path = os.path.splitext(csv_path)[0] + ".json"
    if not os.path.exists(json_path):
        return None
    with open(json_path) as fh:
        return json.load(fh)


def masked_series(data, ycol):
    """Column `ycol` with unstable/flagged rows replaced by NaN (plot gaps)."""
    y = data[ycol].astype(float).copy()
    y[data["stable"] < 0.5] = math.nan
    return y
