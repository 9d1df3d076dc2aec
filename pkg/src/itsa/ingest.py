"""CSV ingestion and emission for monthly datasets.

Input files are UTF-8 CSV with a header row, a date column in YYYY-MM (or a
configured strptime format) and one numeric column per outcome series.
Decimal points only; thousands separators and locale-specific formats are
rejected. Emission writes full-precision ``repr`` floats so a round trip is
lossless.
"""

from __future__ import annotations

import csv
import io
import re
from typing import Iterable, Mapping, Sequence

import numpy as np

from .design import TimeSeriesDataset
from .exceptions import DataError, MissingColumnError, ParseError, PeriodGapError
from .periods import Period

_NUMBER_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def _parse_cell(text: str, row: int, column: str) -> float:
    cell = text.strip()
    if not _NUMBER_RE.match(cell):
        raise ParseError(
            f"non-numeric value {text!r} in row {row}, column {column!r}"
        )
    return float(cell)


def ingest_csv(
    path,
    date_column: str = "date",
    outcome_columns: Sequence[str] | None = None,
    date_format: str = "YYYY-MM",
    units: Mapping[str, str] | None = None,
) -> TimeSeriesDataset:
    """Read a monthly dataset from a CSV file.

    ``outcome_columns`` defaults to every non-date column. Rows must cover
    strictly consecutive months.

    Raises
    ------
    MissingColumnError
        If the date column or a requested outcome column is absent.
    ParseError
        For an unparseable date or numeric cell (reported with row/column).
    PeriodGapError
        If months are missing; the message names the first gap.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        if date_column not in header:
            raise MissingColumnError(
                f"date column {date_column!r} not in header {header}"
            )
        if outcome_columns is None:
            outcome_columns = [h for h in header if h != date_column]
        for col in outcome_columns:
            if col not in header:
                raise MissingColumnError(f"outcome column {col!r} not in header {header}")
        if not outcome_columns:
            raise MissingColumnError("no outcome columns to read")
        date_idx = header.index(date_column)
        col_idx = {c: header.index(c) for c in outcome_columns}

        periods: list[Period] = []
        columns: dict[str, list[float]] = {c: [] for c in outcome_columns}
        for row_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"row {row_no} has {len(row)} fields, header has {len(header)}"
                )
            try:
                period = Period.parse(row[date_idx], date_format)
            except ValueError as exc:
                raise ParseError(
                    f"bad date in row {row_no}, column {date_column!r}: {exc}"
                ) from None
            if periods and period.index != periods[-1].index + 1:
                expected = periods[-1] + 1
                raise PeriodGapError(
                    f"months must be consecutive: expected {expected} after "
                    f"{periods[-1]}, got {period} (row {row_no})"
                )
            periods.append(period)
            for col, idx in col_idx.items():
                columns[col].append(_parse_cell(row[idx], row_no, col))

    if not periods:
        raise DataError(f"{path}: no data rows")
    return TimeSeriesDataset(
        periods=tuple(periods),
        values={c: np.array(v) for c, v in columns.items()},
        units=dict(units or {}),
    )


def write_dataset_csv(dataset: TimeSeriesDataset, target, date_column: str = "date") -> None:
    """Write a dataset as CSV with full-precision float reprs.

    ``target`` is a path or an open text file.
    """
    own = not hasattr(target, "write")
    fh = open(target, "w", newline="", encoding="utf-8") if own else target
    try:
        writer = csv.writer(fh)
        writer.writerow([date_column, *dataset.labels])
        for i, period in enumerate(dataset.periods):
            writer.writerow(
                [str(period)] + [repr(float(dataset.values[c][i])) for c in dataset.labels]
            )
    finally:
        if own:
            fh.close()


def dataset_to_csv_text(dataset: TimeSeriesDataset, date_column: str = "date") -> str:
    buf = io.StringIO()
    write_dataset_csv(dataset, buf, date_column)
    return buf.getvalue()


def rows_to_csv_text(header: Iterable[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(list(header))
    writer.writerows(rows)
    return buf.getvalue()
