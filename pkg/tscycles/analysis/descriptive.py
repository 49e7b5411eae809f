"""
Summary statistics of a series.
"""

import math

import numpy as np
from scipy import stats

from tscycles.analysis.series import MonthlySeries
from tscycles.models import SummaryStats


def basic_stats(series: MonthlySeries, level: float = 0.95) -> SummaryStats:
    """
    Location, spread and shape of a series.

    Quartiles interpolate linearly between order statistics. Skewness and excess
    kurtosis divide the 1/n central moments by powers of the n-1 standard deviation,
    and are `None` for a constant series. The mean confidence interval uses the
    Student-t quantile with n-1 degrees of freedom.
    """
    series.require_length(2, "Summary statistics")
    x = series.values
    n = len(x)

    mean = float(np.mean(x))
    var = float(np.var(x, ddof=1))
    sd = math.sqrt(var)
    se = sd / math.sqrt(n)
    half = stats.t.ppf(0.5 + level / 2, n - 1) * se
    q1, median, q3 = np.quantile(x, [0.25, 0.5, 0.75], method="linear")

    if var > 0:
        dev = x - mean
        skew = float(np.mean(dev**3) / sd**3)
        kurt = float(np.mean(dev**4) / sd**4 - 3)
    else:
        skew = kurt = None

    return SummaryStats(
        nobs=n,
        na_count=0,
        minimum=float(np.min(x)),
        maximum=float(np.max(x)),
        q1=float(q1),
        q3=float(q3),
        mean=mean,
        median=float(median),
        sum=float(np.sum(x)),
        se_mean=se,
        lcl_mean=mean - half,
        ucl_mean=mean + half,
        variance=var,
        stdev=sd,
        skewness=skew,
        kurtosis_excess=kurt,
    )
