"""Functions to check and serialize sweep tables as CSV."""

import sys
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from .errors import HTDTError, PhysicalityError, ValidationError

__all__ = [
    "FLOAT_FORMAT",
    "enforce_column_order",
    "validate_rows",
    "to_csv_text",
    "write_csv",
]

# 10 significant digits, independent of locale
FLOAT_FORMAT = "%.10g"

_FIDELITY_SLACK = 1e-12
_NOISE_SLACK = 1e-9


def enforce_column_order(df: pd.DataFrame, columns: List[str]) -> pd.DataFrame:
    """Return df with exactly `columns`, in that order."""
    if not isinstance(df, pd.DataFrame):
        raise ValidationError("df must be a pandas DataFrame")
    if not isinstance(columns, list):
        raise ValidationError("columns must be list of column names")
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise ValidationError(f"table is missing columns {missing}")
    return df[columns]


def validate_rows(df: pd.DataFrame) -> pd.DataFrame:
    """Check every row: fidelity columns (F_*) in [0, 1] and, next to a gain column g, G >= |1 - g|."""
    for col in [c for c in df.columns if str(c).startswith("F_")]:
        bad = df[(df[col] < -_FIDELITY_SLACK) | (df[col] > 1 + _FIDELITY_SLACK)]
        if len(bad) > 0:
            raise PhysicalityError(f"column {col} leaves [0, 1] in rows {bad.index.to_list()}")
    if "g" in df.columns:
        for col in [c for c in df.columns if str(c).startswith("G")]:
            bad = df[df[col] < (1 - df["g"]).abs() - _NOISE_SLACK]
            if len(bad) > 0:
                raise PhysicalityError(f"column {col} below |1 - g| in rows {bad.index.to_list()}", "G >= |1 - g|")
    return df


def to_csv_text(df: pd.DataFrame) -> str:
    """Render df as CSV: one header row, '.' decimals, 10 significant digits, '\\n' line ends, no index."""
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_csv(df: pd.DataFrame, path: Optional[Union[Path, str]] = None) -> None:
    """Write df as CSV to `path`, or to stdout when path is None or '-'."""
    text = to_csv_text(df)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as exc:
        raise HTDTError(f"cannot write {path}: {exc}") from exc
