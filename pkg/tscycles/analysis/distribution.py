"""
Normality, seasonality and nonlinearity test suites.

Every test returns a `TestResult`. Suites return plain dicts keyed by test name so
that the report keeps a stable key order.
"""

import logging
import math
from typing import Dict

import numpy as np
from scipy import stats
from statsmodels.stats.diagnostic import acorr_ljungbox, lilliefors, normal_ad
from statsmodels.stats.oneway import anova_oneway
from statsmodels.tsa.stattools import acf as sm_acf

from tscycles.analysis.ar import fit_ar
from tscycles.analysis.regression import lag_matrix, ols, ssr
from tscycles.analysis.series import MonthlySeries
from tscycles.exceptions import DegenerateError, InsufficientDataError
from tscycles.models import TestResult


logger = logging.getLogger(__name__)

NORMAL_NULL = "the series is normally distributed"
SEASONAL_NULL = "no seasonality"
LINEAR_NULL = "the series is generated by a linear process"


def _standardize(x, what):
    sd = np.std(x, ddof=1)
    if sd == 0:
        raise DegenerateError(f"{what} is undefined for a constant series.")
    return (x - np.mean(x)) / sd


# Normality


def anderson_darling(x, alpha=0.01) -> TestResult:
    a2, p = normal_ad(np.asarray(x, dtype=float))
    return TestResult(
        test_name="Anderson-Darling",
        statistic=float(a2),
        p_value=float(np.clip(p, 0, 1)),
        null_hypothesis=NORMAL_NULL,
        alpha=alpha,
    )


def cramer_von_mises(x, alpha=0.01) -> TestResult:
    """
    Composite-null Cramer-von Mises, p-value from the piecewise approximation in
    the adjusted statistic W(1 + 0.5/n).
    """
    z = np.sort(_standardize(np.asarray(x, dtype=float), "Cramer-von Mises"))
    n = len(z)
    p = stats.norm.cdf(z)
    w = 1 / (12 * n) + np.sum((p - (2 * np.arange(1, n + 1) - 1) / (2 * n)) ** 2)
    ww = (1 + 0.5 / n) * w
    if ww < 0.0275:
        pval = 1 - math.exp(-13.953 + 775.5 * ww - 12542.61 * ww**2)
    elif ww < 0.051:
        pval = 1 - math.exp(-5.903 + 179.546 * ww - 1515.29 * ww**2)
    elif ww < 0.092:
        pval = math.exp(0.886 - 31.62 * ww + 10.897 * ww**2)
    elif ww < 1.1:
        pval = math.exp(1.111 - 34.242 * ww + 12.832 * ww**2)
    else:
        logger.warning("Cramer-von Mises p-value below 7.37e-10, clamped.")
        pval = 7.37e-10
    return TestResult(
        test_name="Cramer-von Mises",
        statistic=float(w),
        p_value=float(np.clip(pval, 0, 1)),
        null_hypothesis=NORMAL_NULL,
        alpha=alpha,
    )


def lilliefors_test(x, alpha=0.01) -> TestResult:
    d, p = lilliefors(np.asarray(x, dtype=float), dist="norm", pvalmethod="approx")
    return TestResult(
        test_name="Lilliefors (Kolmogorov-Smirnov)",
        statistic=float(d),
        p_value=float(np.clip(p, 0, 1)),
        null_hypothesis=NORMAL_NULL,
        alpha=alpha,
    )


def normality_suite(
    series: MonthlySeries, alpha: float = 0.01
) -> Dict[str, TestResult]:
    series.require_length(8, "Normality tests")
    x = series.values
    if np.ptp(x) == 0:
        raise DegenerateError(f"Series `{series.name}` is constant.")
    return {
        "anderson_darling": anderson_darling(x, alpha),
        "cramer_von_mises": cramer_von_mises(x, alpha),
        "lilliefors": lilliefors_test(x, alpha),
    }


# Seasonality


def qs_statistic(x, freq: int):
    """
    Ljung-Box type statistic on the autocorrelations at lags freq and 2*freq, with
    negative autocorrelations set to zero.
    """
    n = len(x)
    if np.ptp(x) == 0:
        return 0.0, np.zeros(2)
    rho = sm_acf(x, nlags=2 * freq, adjusted=False, fft=False)[[freq, 2 * freq]]
    rho = np.maximum(rho, 0)
    q = n * (n + 2) * (rho[0] ** 2 / (n - freq) + rho[1] ** 2 / (n - 2 * freq))
    return float(q), rho


def seasonal_residuals(x, freq: int, max_order: int = 5):
    """
    Residuals of the AIC-selected AR model of the first differences, and its order.
    The order is at most `max_order` and stays below `freq`.
    """
    y = np.diff(np.asarray(x, dtype=float))
    if np.ptp(y) == 0:
        return np.zeros(len(y)), 0
    fit = fit_ar(y, max_order=min(max_order, freq - 1))
    return fit.residuals, fit.order


def qs_test(x, freq=12, alpha=0.01, residuals=False, max_order=5) -> TestResult:
    """
    QS test on the first differences, or on their `seasonal_residuals` when
    `residuals` is set.
    """
    aux = {}
    if residuals:
        y, order = seasonal_residuals(x, freq, max_order)
        aux["order"] = float(order)
    else:
        y = np.diff(np.asarray(x, dtype=float))
    q, rho = qs_statistic(y, freq)
    aux.update({f"rho_{freq}": float(rho[0]), f"rho_{2 * freq}": float(rho[1])})
    return TestResult(
        test_name="QS (AR residuals)" if residuals else "QS",
        statistic=q,
        p_value=float(stats.chi2.sf(q, 2)),
        null_hypothesis=SEASONAL_NULL,
        auxiliary=aux,
        alpha=alpha,
    )


def ma_detrend(x, freq: int) -> np.ndarray:
    """
    Remove a centered moving average (2 x freq for even freq). The returned array is
    shorter than `x` by the filter length minus one, aligned to start at freq//2.
    """
    x = np.asarray(x, dtype=float)
    if freq % 2 == 0:
        w = np.r_[0.5, np.ones(freq - 1), 0.5] / freq
    else:
        w = np.ones(freq) / freq
    trend = np.convolve(x, w, mode="valid")
    h = (len(w) - 1) // 2
    detr = x[h : h + len(trend)] - trend
    scale = np.max(np.abs(x)) if len(x) else 0
    detr[np.abs(detr) <= 1e-9 * scale] = 0.0
    return detr


def _season_groups(series: MonthlySeries, freq: int):
    """
    Detrended values by seasonal position, plus the matrix of complete cycles
    (years as rows) for the blocked rank test.
    """
    detr = ma_detrend(series.values, freq)
    pos = (series.start_month - 1 + freq // 2 + np.arange(len(detr))) % freq
    groups = [detr[pos == k] for k in range(freq)]

    first = int(np.argmax(pos == 0))
    ncycles = (len(detr) - first) // freq
    blocks = detr[first : first + ncycles * freq].reshape(ncycles, freq)
    return detr, groups, blocks


def _flat(test_name, alpha):
    return TestResult(
        test_name=test_name,
        statistic=0.0,
        p_value=1.0,
        null_hypothesis=SEASONAL_NULL,
        alpha=alpha,
    )


def friedman_test(series: MonthlySeries, freq=12, alpha=0.01) -> TestResult:
    detr, _, blocks = _season_groups(series, freq)
    if np.ptp(detr) == 0 or len(blocks) < 2:
        return _flat("Friedman", alpha)
    r = stats.friedmanchisquare(*blocks.T)
    return TestResult(
        test_name="Friedman",
        statistic=float(r.statistic),
        p_value=float(r.pvalue),
        null_hypothesis=SEASONAL_NULL,
        auxiliary={"df": float(freq - 1), "blocks": float(len(blocks))},
        alpha=alpha,
    )


def kruskal_wallis_test(series: MonthlySeries, freq=12, alpha=0.01) -> TestResult:
    detr, groups, _ = _season_groups(series, freq)
    if np.ptp(detr) == 0:
        return _flat("Kruskal-Wallis", alpha)
    r = stats.kruskal(*groups)
    return TestResult(
        test_name="Kruskal-Wallis",
        statistic=float(r.statistic),
        p_value=float(r.pvalue),
        null_hypothesis=SEASONAL_NULL,
        auxiliary={"df": float(freq - 1)},
        alpha=alpha,
    )


def kruskal_wallis_residuals_test(
    series: MonthlySeries, freq=12, alpha=0.01, max_order=5
) -> TestResult:
    """
    Kruskal-Wallis test across seasonal positions of the `seasonal_residuals`.
    """
    resid, order = seasonal_residuals(series.values, freq, max_order)
    if np.ptp(resid) == 0:
        return _flat("Kruskal-Wallis (AR residuals)", alpha)
    # residual j belongs to observation j + order + 1
    pos = (series.start_month + order + np.arange(len(resid))) % freq
    r = stats.kruskal(*[resid[pos == k] for k in range(freq)])
    return TestResult(
        test_name="Kruskal-Wallis (AR residuals)",
        statistic=float(r.statistic),
        p_value=float(r.pvalue),
        null_hypothesis=SEASONAL_NULL,
        auxiliary={"df": float(freq - 1), "order": float(order)},
        alpha=alpha,
    )


def welch_test(series: MonthlySeries, freq=12, alpha=0.01) -> TestResult:
    detr, groups, _ = _season_groups(series, freq)
    if any(np.ptp(g) == 0 for g in groups):
        return _flat("Welch", alpha)
    r = anova_oneway(groups, use_var="unequal", welch_correction=True)
    df1, df2 = r.df
    return TestResult(
        test_name="Welch",
        statistic=float(r.statistic),
        p_value=float(r.pvalue),
        null_hypothesis=SEASONAL_NULL,
        auxiliary={"df1": float(df1), "df2": float(df2)},
        alpha=alpha,
    )


def wo_test(qs, qs_resid, kw_resid, alpha=0.01) -> TestResult:
    """
    Combined decision: seasonal when either QS p-value is below 0.01 or the
    Kruskal-Wallis p-value on the AR residuals is below 0.002. The statistic is 1
    for seasonal, 0 otherwise.
    """
    seasonal = min(qs.p_value, qs_resid.p_value) < 0.01 or kw_resid.p_value < 0.002
    return TestResult(
        test_name="WO",
        statistic=1.0 if seasonal else 0.0,
        p_value=0.0 if seasonal else 1.0,
        null_hypothesis=SEASONAL_NULL,
        auxiliary={
            "seasonal": float(seasonal),
            "p_qs": qs.p_value,
            "p_qs_residuals": qs_resid.p_value,
            "p_kruskal_wallis_residuals": kw_resid.p_value,
        },
        alpha=alpha,
    )


def seasonality_suite(
    series: MonthlySeries,
    freq: int = 12,
    alpha: float = 0.01,
    max_order: int = 5,
) -> Dict[str, TestResult]:
    """
    QS, Friedman, Kruskal-Wallis and Welch tests plus the WO decision. `max_order`
    caps the AR model whose residuals feed the residual variants.
    """
    series.require_length(3 * freq, "Seasonality tests")
    x = series.values
    qs = qs_test(x, freq, alpha)
    qs_resid = qs_test(x, freq, alpha, residuals=True, max_order=max_order)
    kw_resid = kruskal_wallis_residuals_test(series, freq, alpha, max_order)
    return {
        "qs": qs,
        "qs_residuals": qs_resid,
        "friedman": friedman_test(series, freq, alpha),
        "kruskal_wallis": kruskal_wallis_test(series, freq, alpha),
        "kruskal_wallis_residuals": kw_resid,
        "welch": welch_test(series, freq, alpha),
        "wo": wo_test(qs, qs_resid, kw_resid, alpha),
    }


# Nonlinearity


def teraesvirta_test(x, alpha=0.01) -> TestResult:
    """
    Neural network test with the Taylor expansion of the hidden layer, lag 1.
    """
    xs = _standardize(np.asarray(x, dtype=float), "Teraesvirta test")
    n = len(xs)
    y, y1 = xs[1:], xs[:-1]
    one = np.ones_like(y1)
    _, u, _ = ols(y, np.column_stack([one, y1]), "Teraesvirta regression")
    _, v, _ = ols(u, np.column_stack([one, y1, y1**2, y1**3]), "Teraesvirta regression")
    stat = n * math.log(ssr(u) / ssr(v))
    return TestResult(
        test_name="Teraesvirta Neural Network",
        statistic=stat,
        p_value=float(stats.chi2.sf(stat, 2)),
        null_hypothesis=LINEAR_NULL,
        auxiliary={"df": 2.0},
        alpha=alpha,
    )


def white_test(x, seed: int, hidden: int = 10, alpha=0.01) -> TestResult:
    """
    Neural network test with `hidden` logistic units of random weights in (-2, 2).
    Principal components 2 and 3 of the activations enter the auxiliary regression.
    """
    xs = _standardize(np.asarray(x, dtype=float), "White test")
    n = len(xs)
    y, y1 = xs[1:], xs[:-1]
    design = np.column_stack([np.ones_like(y1), y1])
    _, u, _ = ols(y, design, "White regression")

    rng = np.random.default_rng(seed)
    weights = rng.uniform(-2, 2, size=(2, hidden))
    phantom = 1 / (1 + np.exp(-(design @ weights)))
    phantom = phantom[:, np.std(phantom, axis=0, ddof=1) > 0]
    z = (phantom - phantom.mean(axis=0)) / phantom.std(axis=0, ddof=1)
    U, s, _ = np.linalg.svd(z, full_matrices=False)
    pc = (U * s)[:, 1:3]

    _, v, _ = ols(u, np.column_stack([design, pc]), "White regression")
    stat = n * math.log(ssr(u) / ssr(v))
    return TestResult(
        test_name="White Neural Network",
        statistic=stat,
        p_value=float(stats.chi2.sf(stat, 2)),
        null_hypothesis=LINEAR_NULL,
        auxiliary={"df": 2.0, "seed": float(seed)},
        alpha=alpha,
    )


def _ar_design(x, m):
    x = np.asarray(x, dtype=float)
    X = np.column_stack([np.ones(len(x) - m), lag_matrix(x, m)])
    return x[m:], X


def keenan_test(x, order: int, alpha=0.01) -> TestResult:
    """
    Keenan's one degree of freedom test. The AR(order) fit is Yule-Walker; its
    squared fitted values, cleared of the lags by least squares, are tested against
    its residuals.
    """
    x = np.asarray(x, dtype=float)
    n, m = len(x), order
    df2 = n - 2 * m - 2
    if m < 1 or df2 < 1:
        raise InsufficientDataError(f"Keenan test with order {m} needs more data.")
    fit = fit_ar(x, order=m)
    res1 = fit.residuals
    fitted = x[m:] - res1
    _, X = _ar_design(x, m)
    _, res2, _ = ols(fitted**2, X, "Keenan regression")
    eta2 = np.sum(res1 * res2) ** 2 / np.sum(res2**2)
    stat = float(eta2 * df2 / (ssr(res1) - eta2))
    return TestResult(
        test_name="Keenan",
        statistic=stat,
        p_value=float(stats.f.sf(stat, 1, df2)),
        null_hypothesis=LINEAR_NULL,
        auxiliary={"order": float(m), "df1": 1.0, "df2": float(df2)},
        alpha=alpha,
    )


def tsay_test(x, order: int, alpha=0.01) -> TestResult:
    """
    Tsay's F test on the cross products of the lags. Both the least squares AR fit
    and the residual degrees of freedom count only the n - order usable rows.
    """
    n, m = len(x), order
    k = m * (m + 1) // 2
    df2 = (n - m) - m - k - 1
    if m < 1 or df2 < 1:
        raise InsufficientDataError(f"Tsay test with order {m} needs more data.")
    y, X = _ar_design(x, m)
    lags = X[:, 1:]
    _, res1, _ = ols(y, X, "Tsay regression")
    iu, ju = np.triu_indices(m)
    cross = lags[:, iu] * lags[:, ju]
    coef, _, _, _ = np.linalg.lstsq(X, cross, rcond=None)
    res2 = cross - X @ coef
    _, res3, _ = ols(res1, res2, "Tsay regression")
    stat = float(((ssr(res1) - ssr(res3)) / k) / (ssr(res3) / df2))
    return TestResult(
        test_name="Tsay",
        statistic=stat,
        p_value=float(stats.f.sf(stat, k, df2)),
        null_hypothesis=LINEAR_NULL,
        auxiliary={"order": float(m), "df1": float(k), "df2": float(df2)},
        alpha=alpha,
    )


def mcleod_li_test(x, max_order=24, lag=24, alpha=0.01) -> TestResult:
    """
    Ljung-Box test on the squared residuals of the AIC-selected AR model.
    """
    fit = fit_ar(x, max_order=max_order)
    lb = acorr_ljungbox(fit.residuals**2, lags=lag)
    return TestResult(
        test_name="McLeod-Li",
        statistic=float(lb["lb_stat"].iloc[-1]),
        p_value=float(lb["lb_pvalue"].iloc[-1]),
        null_hypothesis="no ARCH effects in the AR residuals",
        auxiliary={
            "order": float(fit.order),
            "lag": float(lag),
            "min_p_value": float(lb["lb_pvalue"].min()),
        },
        alpha=alpha,
    )


def nonlinearity_suite(
    series: MonthlySeries,
    seed: int,
    alpha: float = 0.01,
    max_order: int = 24,
    hidden: int = 10,
    lag: int = 24,
) -> Dict[str, TestResult]:
    series.require_length(50, "Nonlinearity tests")
    x = series.values
    if np.ptp(x) == 0:
        raise DegenerateError(f"Series `{series.name}` is constant.")
    order = fit_ar(x, max_order=max_order).order
    if order == 0:
        order = 1
    logger.debug("Nonlinearity tests on `%s` with AR order %d", series.name, order)
    return {
        "teraesvirta": teraesvirta_test(x, alpha),
        "white_nn": white_test(x, seed, hidden, alpha),
        "keenan": keenan_test(x, order, alpha),
        "tsay": tsay_test(x, order, alpha),
        "mcleod_li": mcleod_li_test(x, max_order, lag, alpha),
    }
