"""
Calendar-anchored monthly series, CSV ingestion and autocorrelation.

Indices are 0-based everywhere in the library. Reports print both the month label
and the decimal year of an index so that they can be compared with 1-based listings.
"""

from dataclasses import dataclass
import io
import logging
import math
from pathlib import Path
import re
from typing import Iterator, Tuple

from cachetools import cached, LRUCache
import numpy as np
import pandas as pd
from statsmodels.tsa.stattools import acf as sm_acf

import tscycles.conf as tsconf
from tscycles.exceptions import (
    ConfigError,
    ConsistencyError,
    DegenerateError,
    InputError,
    InsufficientDataError,
    ParameterError,
    ParseError,
)


logger = logging.getLogger(__name__)

MONTHS = (
    "Jan",
    "Feb",
    "Mar",
    "Apr",
    "May",
    "Jun",
    "Jul",
    "Aug",
    "Sep",
    "Oct",
    "Nov",
    "Dec",
)
COLUMNS = ("PMN", "PMA", "TotalMD")
MIN_LENGTH = 24


@dataclass(frozen=True)
class MonthlySeries:
    name: str
    values: np.ndarray
    start_year: int = 1976
    start_month: int = 5
    frequency: int = 12

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise ParameterError(f"Series `{self.name}` must be one dimensional.")
        if not np.all(np.isfinite(values)):
            raise ParameterError(f"Series `{self.name}` has non-finite values.")
        if self.frequency <= 0:
            raise ParameterError("Frequency must be positive.")
        if not 1 <= self.start_month <= 12:
            raise ParameterError(f"Invalid start month {self.start_month}.")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    def require_length(self, n: int, what: str = "this analysis"):
        if len(self) < n:
            raise InsufficientDataError(
                f"{what} needs at least {n} values, series `{self.name}` has "
                f"{len(self)}."
            )
        return self

    def with_values(self, values, name: str = None):
        """
        Same calendar anchor, different values (eg. a component of a decomposition).
        """
        return MonthlySeries(
            name=name or self.name,
            values=values,
            start_year=self.start_year,
            start_month=self.start_month,
            frequency=self.frequency,
        )

    def decimal_year(self, index: int) -> float:
        return decimal_year(self, index)

    def month_label(self, index: int) -> str:
        return month_label(self, index)

    def times(self) -> np.ndarray:
        months = self.start_month - 1 + np.arange(len(self))
        return self.start_year + months / self.frequency

    @property
    def start(self) -> str:
        return f"{self.start_year:04d}-{self.start_month:02d}"


@dataclass(frozen=True)
class SeriesBundle:
    pmn: MonthlySeries
    pma: MonthlySeries
    total: MonthlySeries

    def __post_init__(self):
        series = (self.pmn, self.pma, self.total)
        if len({len(s) for s in series}) != 1:
            raise ConsistencyError("Series have different lengths.")
        anchors = {(s.start_year, s.start_month, s.frequency) for s in series}
        if len(anchors) != 1:
            raise ConsistencyError("Series have different calendar anchors.")

        diff = np.abs(self.total.values - (self.pmn.values + self.pma.values))
        tol = 1e-9 * np.maximum(1.0, np.abs(self.total.values))
        bad = np.flatnonzero(diff > tol)
        if bad.size:
            i = int(bad[0])
            raise ConsistencyError(
                f"total {self.total.values[i]:g} != "
                f"{self.pmn.values[i]:g} + {self.pma.values[i]:g}",
                row=i + 1,
            )

    def __len__(self):
        return len(self.pmn)

    def __iter__(self) -> Iterator[MonthlySeries]:
        return iter((self.pmn, self.pma, self.total))

    def __getitem__(self, name: str) -> MonthlySeries:
        for s in self:
            if s.name.lower() == name.lower():
                return s
        if name.lower() == "total":
            return self.total
        raise ParameterError(
            f"Unknown series `{name}`. Available: {[s.name for s in self]}."
        )

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(s.name for s in self)


@dataclass(frozen=True)
class AcfResult:
    max_lag: int
    rho: np.ndarray
    ci_halfwidth: float


def parse_start(start: str) -> Tuple[int, int]:
    """
    Parse a `YYYY-MM` calendar anchor.
    """
    m = re.fullmatch(r"(\d{4})-(\d{1,2})", start.strip())
    if not m or not 1 <= int(m.group(2)) <= 12:
        raise ConfigError(f"Start `{start}` should be formatted as YYYY-MM.")
    return int(m.group(1)), int(m.group(2))


def _check_index(series: MonthlySeries, index: int):
    if not 0 <= index < len(series):
        raise ParameterError(
            f"Index {index} out of range for series `{series.name}` "
            f"of length {len(series)}."
        )


def decimal_year(series: MonthlySeries, index: int) -> float:
    _check_index(series, index)
    return series.start_year + (series.start_month - 1 + index) / series.frequency


def month_label(series: MonthlySeries, index: int) -> str:
    """
    English `Mon YYYY` label of a monthly index. Non monthly series fall back to the
    decimal year with 3 decimals.
    """
    _check_index(series, index)
    if series.frequency != 12:
        return f"{decimal_year(series, index):.3f}"
    months = series.start_month - 1 + index
    return f"{MONTHS[months % 12]} {series.start_year + months // 12}"


def _parse_cell(cell: str, row: int, column: str) -> float:
    try:
        v = float(cell)
    except (TypeError, ValueError):
        raise ParseError(f"cannot parse `{cell}` as a number", row, column)
    if not math.isfinite(v):
        raise ParseError(f"non-finite value `{cell}`", row, column)
    if v < 0:
        raise ParseError(f"negative count `{cell}`", row, column)
    return v


def ingest_csv(
    content: str,
    start_year: int = 1976,
    start_month: int = 5,
    frequency: int = 12,
) -> SeriesBundle:
    """
    Parse the `PMN,PMA,TotalMD` table.

    A leading date column (`YYYY-MM` or anything pandas can read as a month) is
    accepted and cross-checked against the calendar anchor.
    """
    try:
        df = pd.read_csv(
            io.StringIO(content),
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ParseError(f"malformed CSV: {e}")

    df.columns = [str(c).strip() for c in df.columns]
    lower = {c.lower(): c for c in df.columns}
    missing = [c for c in COLUMNS if c.lower() not in lower]
    if missing:
        raise ParseError(
            f"header should name the columns {list(COLUMNS)}, missing {missing}"
        )

    extra = [c for c in df.columns if c.lower() not in {k.lower() for k in COLUMNS}]
    if len(extra) > 1 or (extra and df.columns[0] != extra[0]):
        raise ParseError(f"unexpected columns {extra}")

    if len(df) < MIN_LENGTH:
        raise InsufficientDataError(
            f"Input has {len(df)} rows, at least {MIN_LENGTH} are needed."
        )

    if extra:
        _check_dates(df[extra[0]], start_year, start_month, frequency)

    values = {}
    for name in COLUMNS:
        col = lower[name.lower()]
        values[name] = np.array(
            [_parse_cell(c, i + 1, col) for i, c in enumerate(df[col])]
        )

    kw = dict(start_year=start_year, start_month=start_month, frequency=frequency)
    bundle = SeriesBundle(
        pmn=MonthlySeries("PMN", values["PMN"], **kw),
        pma=MonthlySeries("PMA", values["PMA"], **kw),
        total=MonthlySeries("TotalMD", values["TotalMD"], **kw),
    )
    logger.debug("Ingested %d rows starting %s", len(bundle), bundle.pmn.start)
    return bundle


def _check_dates(dates, start_year, start_month, frequency):
    if frequency != 12:
        raise ParseError("a date column is only supported for monthly data")
    expected = pd.period_range(
        f"{start_year}-{start_month:02d}", periods=len(dates), freq="M"
    )
    for i, (cell, exp) in enumerate(zip(dates, expected)):
        try:
            got = pd.Period(cell.strip(), freq="M")
        except (ValueError, TypeError):
            raise ParseError(f"cannot parse `{cell}` as a month", i + 1, dates.name)
        if got != exp:
            raise ConsistencyError(
                f"date {got} does not match the calendar anchor ({exp})", row=i + 1
            )


def load_csv(path, start_year=1976, start_month=5, frequency=12) -> SeriesBundle:
    path = Path(path)
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"Cannot read input file `{path}`: {e.strerror}.")
    return ingest_csv(content, start_year, start_month, frequency)


def to_csv(bundle: SeriesBundle) -> str:
    """
    Serialize a bundle back to the ingestion format. Floats use their shortest
    round-trip representation, so values survive a second ingestion bit-exactly.
    """
    df = pd.DataFrame({s.name: s.values for s in bundle})
    return df.to_csv(index=False, lineterminator="\n")


@cached(cache=LRUCache(maxsize=1))
def load_fixture() -> SeriesBundle:
    """
    Bundled 536-month table (May 1976 to December 2020).
    """
    fx = tsconf.FIXTURE
    return load_csv(
        fx["path"],
        start_year=fx["start_year"],
        start_month=fx["start_month"],
        frequency=fx["frequency"],
    )


def acf(series: MonthlySeries, max_lag: int) -> AcfResult:
    n = len(series)
    if not 0 <= max_lag < n:
        raise ParameterError(f"max_lag should be in [0, {n}), got {max_lag}.")
    x = series.values
    if np.ptp(x) == 0:
        raise DegenerateError(f"Series `{series.name}` is constant.")

    rho = sm_acf(x, nlags=max_lag, adjusted=False, fft=False)
    rho = np.clip(rho, -1.0, 1.0)
    rho[0] = 1.0
    return AcfResult(max_lag=max_lag, rho=rho, ci_halfwidth=1.96 / math.sqrt(n))
