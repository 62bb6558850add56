"""CSV ingestion and result emission."""
from __future__ import annotations

import csv
import math

import numpy as np

from .errors import FormatError
from .estimator import EstimateSeries, SampledSignal

__all__ = ["load_csv", "write_estimates_csv"]

# per-step deviation accepted as "uniform"; generous enough for write/read
# round-trips and 1e-6-level jitter, strict enough to catch a skipped row
STEP_RTOL = 1e-5


def _parse_row(row, line_no):
    try:
        return float(row[0]), float(row[1])
    except (ValueError, IndexError):
        raise FormatError(f"line {line_no}: expected two numeric columns, got {row!r}") from None


def load_csv(path) -> SampledSignal:
    """Read a two-column (x, y) CSV into a SampledSignal.

    A single header row is allowed.  The x column must be strictly
    increasing and uniform; origin and step are inferred from the first
    two rows.
    """
    rows: list[tuple[float, float]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for line_no, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if line_no == 1 and rows == []:
                try:
                    rows.append(_parse_row(row, line_no))
                    continue
                except FormatError:
                    continue  # header row
            rows.append(_parse_row(row, line_no))
    if len(rows) < 3:
        raise FormatError(f"{path}: need at least 3 data rows, got {len(rows)}")
    xs = np.array([r[0] for r in rows])
    ys = np.array([r[1] for r in rows])
    step = xs[1] - xs[0]
    if not step > 0:
        raise FormatError(f"{path}: x must be strictly increasing (row 2)")
    diffs = np.diff(xs)
    bad = np.nonzero(np.abs(diffs - step) > STEP_RTOL * abs(step))[0]
    if len(bad):
        row_no = int(bad[0]) + 2  # first offending data row (1-based)
        raise FormatError(
            f"{path}: non-uniform grid at data row {row_no}: "
            f"step {diffs[bad[0]]:g} vs expected {step:g}"
        )
    return SampledSignal(float(xs[0]), float(step), ys)


def write_estimates_csv(path, series: EstimateSeries, budget=None,
                        point_budgets=None) -> None:
    """Write estimates with their budget columns.

    ``budget`` fills constant per-row bound columns; ``point_budgets``
    (mapping of column name -> array) overrides them per point.
    """
    cols = ("b_bias", "b_noise", "b_num", "b_total")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("x", "value") + cols)
        for i, (x, v) in enumerate(zip(series.abscissas, series.values)):
            if point_budgets is not None:
                extra = [point_budgets[c][i] for c in cols]
            elif budget is not None:
                extra = [getattr(budget, c) for c in cols]
            else:
                extra = [math.nan] * 4
            writer.writerow([repr(float(x)), repr(float(v))] + [repr(float(e)) for e in extra])
