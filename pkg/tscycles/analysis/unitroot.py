"""
Unit root (ADF, PP) and stationarity (KPSS) tests over the three sets of deterministic
terms: no constant, constant (`drift`) and constant plus trend (`trend`).
"""

import logging
import math

import numpy as np
from statsmodels.tsa.stattools import adfuller

from tscycles.analysis import tables
from tscycles.analysis.regression import ols
from tscycles.analysis.series import MonthlySeries
from tscycles.exceptions import NumericError
from tscycles.models import UnitRootRow, UnitRootTable


logger = logging.getLogger(__name__)

TYPES = ("none", "drift", "trend")
_ADF_REGRESSION = {"none": "n", "drift": "c", "trend": "ct"}


def adf_test(series: MonthlySeries, max_lag: int = 5) -> UnitRootTable:
    """
    Augmented Dickey-Fuller t-statistics for lags 0..max_lag. The p-values
    interpolate the Dickey-Fuller tau tables and are clamped to [0.01, 0.99].
    """
    series.require_length(max_lag + 11, "ADF test")
    x = series.values
    rows = []
    for t in TYPES:
        for lag in range(max_lag + 1):
            try:
                res = adfuller(
                    x, maxlag=lag, regression=_ADF_REGRESSION[t], autolag=None
                )
            except (np.linalg.LinAlgError, ValueError) as e:
                raise NumericError(
                    f"ADF regression failed for type {t}, lag {lag}: {e}"
                )
            stat = float(res[0])
            if not math.isfinite(stat):
                raise NumericError(f"ADF regression singular for type {t}, lag {lag}.")
            p, clamp = tables.lower_tail_pvalue(stat, tables.ADF_TAU[t], len(x))
            rows.append(
                UnitRootRow(type=t, lag=lag, statistic=stat, p_value=p, clamp=clamp)
            )
    return UnitRootTable(test_name="ADF", alternative="stationary", rows=rows)


def _ar1_design(x, t: str):
    """
    Regression of x_t on x_{t-1} with the deterministic terms of type `t`. The lagged
    level is always the first column.
    """
    y, y1 = x[1:], x[:-1]
    N = len(y)
    cols = [y1]
    if t in ("drift", "trend"):
        cols.append(np.ones(N))
    if t == "trend":
        cols.append(np.arange(1, N + 1) - N / 2)
    return y, np.column_stack(cols)


def _bartlett_lrv(u, lag: int) -> float:
    """
    Newey-West long run variance with Bartlett weights, divided by len(u).
    """
    n = len(u)
    s = float(np.dot(u, u))
    for k in range(1, lag + 1):
        s += 2 * (1 - k / (lag + 1)) * float(np.dot(u[k:], u[:-k]))
    return s / n


def kpss_test(series: MonthlySeries) -> UnitRootTable:
    """
    KPSS LM statistic on the residuals of the AR(1) regression of each type, with
    truncation lag floor(3 sqrt(n) / 13). p-values clamp to [0.01, 0.10].
    """
    series.require_length(30, "KPSS test")
    x = series.values
    lag = int(math.floor(3 * math.sqrt(len(x)) / 13))
    rows = []
    for t in TYPES:
        y, X = _ar1_design(x, t)
        _, u, _ = ols(y, X, f"KPSS regression ({t})")
        m = len(u)
        S = np.cumsum(u)
        stat = float(np.sum(S**2) / (m**2 * _bartlett_lrv(u, lag)))
        p, clamp = tables.kpss_pvalue(stat, t)
        rows.append(
            UnitRootRow(type=t, lag=lag, statistic=stat, p_value=p, clamp=clamp)
        )
    return UnitRootTable(test_name="KPSS", alternative="nonstationary", rows=rows)


def pp_test(series: MonthlySeries) -> UnitRootTable:
    """
    Phillips-Perron Z(rho) statistics with Bartlett lag floor(4 (N/100)^(1/4)).
    """
    series.require_length(30, "PP test")
    x = series.values
    N = len(x) - 1
    lag = int(math.floor(4 * (N / 100) ** 0.25))
    rows = []
    for t in TYPES:
        y, X = _ar1_design(x, t)
        coef, u, xtx_inv = ols(y, X, f"PP regression ({t})")
        sigma2 = float(np.dot(u, u)) / N
        lambda2 = _bartlett_lrv(u, lag)
        stat = N * (coef[0] - 1) - 0.5 * N**2 * xtx_inv[0, 0] * (lambda2 - sigma2)
        p, clamp = tables.lower_tail_pvalue(stat, tables.PP_RHO[t], N)
        rows.append(
            UnitRootRow(type=t, lag=lag, statistic=float(stat), p_value=p, clamp=clamp)
        )
    logger.debug("PP on `%s` with lag %d", series.name, lag)
    return UnitRootTable(test_name="PP", alternative="stationary", rows=rows)
