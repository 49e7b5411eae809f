"""
Additive seasonal decompositions: STL and the refined moving average filter (RMAF).
"""

from dataclasses import dataclass
import logging

import numpy as np
import pandas as pd
from statsmodels.tsa.seasonal import STL

from tscycles.analysis.series import MonthlySeries
from tscycles.exceptions import ParameterError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Decomposition:
    method: str
    series: MonthlySeries
    trend: np.ndarray
    seasonal: np.ndarray
    remainder: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        labels = [self.series.month_label(i) for i in range(len(self.series))]
        return pd.DataFrame(
            {
                "month": labels,
                "trend": self.trend,
                "seasonal": self.seasonal,
                "remainder": self.remainder,
            }
        )

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False, lineterminator="\n")


def _odd(k: int) -> int:
    return k if k % 2 else k + 1


def stl_decompose(series: MonthlySeries, s_window: int = 12) -> Decomposition:
    """
    STL with a seasonal loess span of `s_window` (rounded up to odd), two inner loops
    and no robustness iterations.
    """
    if s_window < 3:
        raise ParameterError(f"STL seasonal window should be >= 3, got {s_window}.")
    freq = series.frequency
    if freq < 2:
        raise ParameterError("STL needs a seasonal frequency of at least 2.")
    series.require_length(2 * freq + 1, "STL")

    x = series.values
    res = STL(x, period=freq, seasonal=_odd(s_window), robust=False).fit()
    trend = np.asarray(res.trend, dtype=float)
    seasonal = np.asarray(res.seasonal, dtype=float)
    return Decomposition(
        method="stl",
        series=series,
        trend=trend,
        seasonal=seasonal,
        remainder=x - trend - seasonal,
    )


def centered_mean(x, q: int) -> np.ndarray:
    """
    Mean of x[t-q..t+q], windows truncated to the sample at both ends.
    """
    n = len(x)
    s = np.r_[0.0, np.cumsum(x)]
    t = np.arange(n)
    lo = np.maximum(t - q, 0)
    hi = np.minimum(t + q + 1, n)
    return (s[hi] - s[lo]) / (hi - lo)


def rmaf_decompose(
    series: MonthlySeries,
    period: int = 12,
    half_width: int = 38,
) -> Decomposition:
    """
    Refined moving average filter.

    A preliminary trend (centered mean of half-width `half_width`) gives the
    period-position means of the detrended series; once centered they are the
    seasonal component. The trend is the same moving average of the seasonally
    adjusted series.
    """
    if period < 2:
        raise ParameterError(f"RMAF period should be >= 2, got {period}.")
    if half_width < 1:
        raise ParameterError(f"RMAF half-width should be >= 1, got {half_width}.")
    series.require_length(3 * period, "RMAF")

    x = series.values
    pos = np.arange(len(x)) % period
    detrended = x - centered_mean(x, half_width)
    means = np.array([detrended[pos == k].mean() for k in range(period)])
    seasonal = (means - means.mean())[pos]
    trend = centered_mean(x - seasonal, half_width)
    logger.debug(
        "RMAF of `%s`: period %d, half-width %d", series.name, period, half_width
    )
    return Decomposition(
        method="rmaf",
        series=series,
        trend=trend,
        seasonal=seasonal,
        remainder=x - trend - seasonal,
    )
