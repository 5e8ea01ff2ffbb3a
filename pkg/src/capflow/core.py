"""Time-series containers, transformations and CSV ingestion.

Missing observations are stored as NaN. Every container is immutable: the
value arrays are copied on construction and flagged read-only, so
transformations always return new objects.
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.linalg import solveh_banded

from .errors import ConfigError, DataError, LoadError

__all__ = [
    "Frequency",
    "TimeIndex",
    "TimeSeries",
    "Dataset",
    "parse_period",
    "parse_number",
    "load_csv",
    "write_csv",
    "lag",
    "difference",
    "log",
    "hp_filter",
    "align",
    "HP_LAMBDA_MONTHLY",
]

HP_LAMBDA_MONTHLY = 14400.0

MISSING_TOKENS = frozenset({"", "na", "n/a", "nan", "null", "#n/a"})


class Frequency(str, Enum):
    MONTHLY = "monthly"
    QUARTERLY = "quarterly"
    ANNUAL = "annual"

    @property
    def per_year(self) -> int:
        return {"monthly": 12, "quarterly": 4, "annual": 1}[self.value]

    @classmethod
    def coerce(cls, value) -> "Frequency":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        aliases = {"m": "monthly", "q": "quarterly", "a": "annual", "y": "annual", "yearly": "annual"}
        try:
            return cls(aliases.get(text, text))
        except ValueError:
            raise ConfigError(f"unknown frequency {value!r}; expected monthly, quarterly or annual") from None


_MONTHLY_PATTERNS = (
    re.compile(r"^(\d{4})\s*[-/:.M]\s*(\d{1,2})(?:[-/]\d{1,2})?$", re.IGNORECASE),
    re.compile(r"^(\d{4})(\d{2})$"),
)
_QUARTERLY_PATTERN = re.compile(r"^(\d{4})\s*[-:]?\s*Q([1-4])$", re.IGNORECASE)
_ANNUAL_PATTERN = re.compile(r"^(\d{4})$")


def parse_period(text: str, frequency: Frequency) -> int:
    """Parse a period label into an integer ordinal (``year * per_year + sub``).

    Monthly labels accept ``2005-01``, ``200501``, ``2005:01`` and ``2005M01``;
    a trailing day (``2005-01-31``) is ignored. Quarterly accepts ``2005Q1``.
    """
    frequency = Frequency.coerce(frequency)
    s = str(text).strip()
    if frequency is Frequency.MONTHLY:
        for pat in _MONTHLY_PATTERNS:
            m = pat.match(s)
            if m:
                year, month = int(m.group(1)), int(m.group(2))
                if 1 <= month <= 12:
                    return year * 12 + month - 1
        raise ValueError(f"cannot parse {text!r} as a monthly period")
    if frequency is Frequency.QUARTERLY:
        m = _QUARTERLY_PATTERN.match(s)
        if m:
            return int(m.group(1)) * 4 + int(m.group(2)) - 1
        raise ValueError(f"cannot parse {text!r} as a quarterly period")
    m = _ANNUAL_PATTERN.match(s)
    if m:
        return int(m.group(1))
    raise ValueError(f"cannot parse {text!r} as an annual period")


def format_period(ordinal: int, frequency: Frequency) -> str:
    frequency = Frequency.coerce(frequency)
    if frequency is Frequency.MONTHLY:
        year, sub = divmod(ordinal, 12)
        return f"{year:04d}-{sub + 1:02d}"
    if frequency is Frequency.QUARTERLY:
        year, sub = divmod(ordinal, 4)
        return f"{year:04d}Q{sub + 1}"
    return f"{ordinal:04d}"


def parse_number(cell: str) -> float:
    """Parse a decimal cell, accepting both ``0.58`` and ``0,58``. Empty cells are NaN."""
    s = str(cell).strip().replace("−", "-").replace(" ", "")
    if s.lower() in MISSING_TOKENS:
        return math.nan
    if "," in s:
        if "." in s or s.count(",") > 1:
            raise ValueError(f"ambiguous decimal separators in {cell!r}")
        s = s.replace(",", ".")
    return float(s)


@dataclass(frozen=True)
class TimeIndex:
    """Equally spaced periods starting at ``start`` (an ordinal from :func:`parse_period`)."""

    start: int
    frequency: Frequency
    length: int

    def __post_init__(self):
        object.__setattr__(self, "frequency", Frequency.coerce(self.frequency))
        if self.length < 1:
            raise DataError("a time index needs at least one period")

    @classmethod
    def from_label(cls, label: str, frequency, length: int) -> "TimeIndex":
        frequency = Frequency.coerce(frequency)
        return cls(parse_period(label, frequency), frequency, length)

    def __len__(self) -> int:
        return self.length

    @property
    def end(self) -> int:
        return self.start + self.length - 1

    def ordinals(self) -> np.ndarray:
        return np.arange(self.start, self.start + self.length)

    def label(self, i: int) -> str:
        if not -self.length <= i < self.length:
            raise IndexError(i)
        return format_period(self.start + (i % self.length), self.frequency)

    def labels(self) -> list[str]:
        return [format_period(o, self.frequency) for o in self.ordinals()]

    def slice(self, offset: int, length: int) -> "TimeIndex":
        if offset < 0 or offset + length > self.length:
            raise IndexError("slice outside the index")
        return TimeIndex(self.start + offset, self.frequency, length)


@dataclass(frozen=True)
class TimeSeries:
    name: str
    index: TimeIndex
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if values.shape[0] != self.index.length:
            raise DataError(
                f"series {self.name!r}: {values.shape[0]} values for an index of length {self.index.length}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, name: str, values: Sequence[float], start: str = "2000-01",
                    frequency=Frequency.MONTHLY) -> "TimeSeries":
        values = np.asarray(values, dtype=float)
        return cls(name, TimeIndex.from_label(start, frequency, len(values)), values)

    def __len__(self) -> int:
        return self.index.length

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)

    @property
    def is_complete(self) -> bool:
        return not self.missing.any()

    def rename(self, name: str) -> "TimeSeries":
        return TimeSeries(name, self.index, self.values)

    def with_values(self, values, name: str | None = None) -> "TimeSeries":
        return TimeSeries(self.name if name is None else name, self.index, values)

    def complete_values(self) -> np.ndarray:
        """Values with no missing entries; raises when any are missing."""
        if not self.is_complete:
            raise DataError(f"series {self.name!r} has {int(self.missing.sum())} missing values")
        return self.values


@dataclass(frozen=True)
class Dataset:
    """Series sharing one index. ``dropped`` records rows removed by :func:`align`."""

    series: tuple[TimeSeries, ...]
    dropped: int = 0

    def __post_init__(self):
        series = tuple(self.series)
        if not series:
            raise DataError("a dataset needs at least one series")
        names = [s.name for s in series]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise DataError(f"duplicate series names: {', '.join(dupes)}")
        index = series[0].index
        for s in series[1:]:
            if s.index != index:
                raise DataError(f"series {s.name!r} is not aligned with {series[0].name!r}")
        object.__setattr__(self, "series", series)

    @classmethod
    def from_columns(cls, columns: Mapping[str, Sequence[float]], start: str = "2000-01",
                     frequency=Frequency.MONTHLY) -> "Dataset":
        items = list(columns.items())
        if not items:
            raise DataError("no columns given")
        index = TimeIndex.from_label(start, frequency, len(items[0][1]))
        return cls(tuple(TimeSeries(name, index, vals) for name, vals in items))

    @property
    def index(self) -> TimeIndex:
        return self.series[0].index

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.series]

    @property
    def nobs(self) -> int:
        return self.index.length

    def __len__(self) -> int:
        return len(self.series)

    def __iter__(self):
        return iter(self.series)

    def __contains__(self, name) -> bool:
        return name in self.names

    def __getitem__(self, name: str) -> TimeSeries:
        for s in self.series:
            if s.name == name:
                return s
        raise ConfigError(f"unknown column {name!r}; available: {', '.join(self.names)}")

    def select(self, names: Iterable[str]) -> "Dataset":
        return Dataset(tuple(self[n] for n in names), self.dropped)

    def with_series(self, *series: TimeSeries) -> "Dataset":
        """Return a dataset with ``series`` added or replacing same-named members."""
        replaced = {s.name: s for s in series}
        kept = [replaced.pop(s.name, s) for s in self.series]
        return Dataset(tuple(kept) + tuple(replaced.values()), self.dropped)

    def matrix(self, names: Sequence[str] | None = None) -> np.ndarray:
        """Observations as a ``(T, k)`` float array, in ``names`` order."""
        chosen = self.series if names is None else [self[n] for n in names]
        return np.column_stack([s.values for s in chosen])


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _sniff_delimiter(header: str) -> str:
    for delim in (";", "\t"):
        if delim in header:
            return delim
    return ","


def load_csv(path, date_column: str | None = None, frequency=Frequency.MONTHLY,
             delimiter: str | None = None) -> Dataset:
    """Read a CSV into a :class:`Dataset`.

    The date column defaults to the first column. Rows are sorted by period and
    missing periods inside the span are inserted as all-missing rows.
    """
    frequency = Frequency.coerce(frequency)
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc.strerror or exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise LoadError(f"{path} is empty")
    reader = csv.reader(lines, delimiter=delimiter or _sniff_delimiter(lines[0]))
    rows = list(reader)
    header = [h.strip() for h in rows[0]]
    if date_column is None:
        date_column = header[0]
    if date_column not in header:
        raise LoadError(f"date column {date_column!r} not in header {header}", row=1)
    date_pos = header.index(date_column)
    value_cols = [(i, h) for i, h in enumerate(header) if i != date_pos]
    if not value_cols:
        raise LoadError("no value columns", row=1)

    seen: dict[int, int] = {}
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise LoadError(f"expected {len(header)} fields, found {len(row)}", row=lineno)
        try:
            ordinal = parse_period(row[date_pos], frequency)
        except ValueError as exc:
            raise LoadError(str(exc), row=lineno) from None
        if ordinal in seen:
            raise LoadError(
                f"duplicate period {format_period(ordinal, frequency)} (first seen on row {seen[ordinal]})",
                row=lineno,
            )
        seen[ordinal] = lineno
        vals = []
        for i, name in value_cols:
            try:
                vals.append(parse_number(row[i]))
            except ValueError:
                raise LoadError(f"column {name!r}: cannot parse {row[i]!r} as a number", row=lineno) from None
        records.append((ordinal, vals))
    if not records:
        raise LoadError(f"{path} has a header but no data rows")

    records.sort(key=lambda r: r[0])
    start, end = records[0][0], records[-1][0]
    data = np.full((end - start + 1, len(value_cols)), np.nan)
    for ordinal, vals in records:
        data[ordinal - start] = vals
    index = TimeIndex(start, frequency, end - start + 1)
    return Dataset(tuple(TimeSeries(name, index, data[:, j]) for j, (_, name) in enumerate(value_cols)))


def write_csv(dataset: Dataset, path, date_column: str = "date", locale: str = "point") -> None:
    """Write ``dataset`` so that :func:`load_csv` reproduces it bit-exactly.

    ``locale="comma"`` writes decimal commas with ``;`` as field separator.
    """
    comma = locale == "comma"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=";" if comma else ",")
        writer.writerow([date_column, *dataset.names])
        labels = dataset.index.labels()
        mat = dataset.matrix()
        for label, row in zip(labels, mat):
            cells = []
            for v in row:
                if math.isnan(v):
                    cells.append("")
                else:
                    cell = repr(float(v))
                    cells.append(cell.replace(".", ",") if comma else cell)
            writer.writerow([label, *cells])


# ---------------------------------------------------------------------------
# Transformations
# ---------------------------------------------------------------------------


def _check_shift(s: TimeSeries, k: int, what: str) -> None:
    if k < 0:
        raise ConfigError(f"{what} order must be non-negative, got {k}")
    if k >= len(s):
        raise DataError(f"{what} order {k} is not shorter than series {s.name!r} (length {len(s)})")


def lag(s: TimeSeries, k: int = 1) -> TimeSeries:
    """``result[t] = s[t - k]``; the first ``k`` observations become missing."""
    if k == 0:
        return s
    _check_shift(s, k, "lag")
    out = np.full(len(s), np.nan)
    out[k:] = s.values[:-k]
    return s.with_values(out)


def difference(s: TimeSeries, k: int = 1) -> TimeSeries:
    """``result[t] = s[t] - s[t - k]``; the first ``k`` observations become missing."""
    if k == 0:
        return s
    _check_shift(s, k, "difference")
    out = np.full(len(s), np.nan)
    out[k:] = s.values[k:] - s.values[:-k]
    return s.with_values(out)


def log(s: TimeSeries) -> TimeSeries:
    v = s.values
    bad = ~np.isnan(v) & (v <= 0)
    if bad.any():
        first = int(np.flatnonzero(bad)[0])
        raise DataError(f"log of non-positive value in {s.name!r} at {s.index.label(first)}")
    return s.with_values(np.log(v))


def _second_difference_gram(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonals (main, first, second) of D'D for the (n-2) x n second-difference matrix D."""
    main = np.zeros(n)
    off1 = np.zeros(n - 1)
    off2 = np.ones(n - 2)
    r = np.arange(n - 2)
    np.add.at(main, r, 1.0)
    np.add.at(main, r + 1, 4.0)
    np.add.at(main, r + 2, 1.0)
    np.add.at(off1, r, -2.0)
    np.add.at(off1, r + 1, -2.0)
    return main, off1, off2


def hp_filter(s: TimeSeries, lamb: float = HP_LAMBDA_MONTHLY) -> tuple[TimeSeries, TimeSeries]:
    """Hodrick-Prescott decomposition into ``(trend, cycle)``.

    Solves the symmetric pentadiagonal system ``(I + lamb * D'D) trend = s``
    with a banded Cholesky factorization.
    """
    if lamb <= 0:
        raise ConfigError(f"HP smoothing parameter must be positive, got {lamb}")
    values = s.complete_values()
    n = len(values)
    if n < 4:
        raise DataError(f"HP filter needs at least 4 observations, series {s.name!r} has {n}")
    main, off1, off2 = _second_difference_gram(n)
    ab = np.zeros((3, n))
    ab[0, 2:] = lamb * off2
    ab[1, 1:] = lamb * off1
    ab[2, :] = 1.0 + lamb * main
    trend = solveh_banded(ab, values)
    return s.with_values(trend, f"{s.name}_trend"), s.with_values(values - trend, f"{s.name}_cycle")


def align(d: Dataset, drop_missing: bool = True, names: Sequence[str] | None = None) -> Dataset:
    """Restrict ``d`` to the longest contiguous run of rows complete in every selected series.

    Ties between equally long runs go to the most recent one. The number of
    rows removed is stored in ``Dataset.dropped``.
    """
    if names is not None:
        d = d.select(names)
    if not drop_missing:
        return d
    complete = ~np.isnan(d.matrix()).any(axis=1)
    best_start, best_len = 0, 0
    run_start = None
    for i, ok in enumerate(np.append(complete, False)):
        if ok and run_start is None:
            run_start = i
        elif not ok and run_start is not None:
            if i - run_start >= best_len:
                best_start, best_len = run_start, i - run_start
            run_start = None
    if best_len == 0:
        raise DataError(f"no period has complete data for {', '.join(d.names)}")
    index = d.index.slice(best_start, best_len)
    series = tuple(TimeSeries(s.name, index, s.values[best_start:best_start + best_len]) for s in d)
    return Dataset(series, dropped=d.dropped + d.nobs - best_len)
