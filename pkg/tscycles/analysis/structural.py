"""
Structural change in the mean of a series.

* Empirical fluctuation processes (OLS and recursive CUSUM/MOSUM) of the
  intercept-only model, with their p-values.
* Multiple mean-shift dating by dynamic programming over segment RSS, model order
  chosen by BIC.
* Confidence intervals of the break dates from the asymptotic distribution of the
  break date estimator, with segment-wise variances.
"""

import logging
import math
from typing import List

import numpy as np
from scipy import optimize, stats
from scipy.special import log_ndtr

from tscycles.analysis import tables
from tscycles.analysis.series import MonthlySeries
from tscycles.exceptions import DegenerateError, NumericError, ParameterError
from tscycles.models import BreakInterval, BreakpointSet, EfpResult


logger = logging.getLogger(__name__)

PROCESS_TYPES = ("OLS-CUSUM", "OLS-MOSUM", "Rec-CUSUM", "Rec-MOSUM")


def recursive_residuals(x) -> np.ndarray:
    """
    Standardized one-step prediction errors of the running mean, for t = 2..n.
    """
    x = np.asarray(x, dtype=float)
    t = np.arange(1, len(x))
    running_mean = np.cumsum(x)[:-1] / t
    return (x[1:] - running_mean) / np.sqrt(1 + 1 / t)


def _moving_sums(e, nh):
    s = np.r_[0.0, np.cumsum(e)]
    return s[nh:] - s[: len(e) - nh + 1]


def efp_test(
    series: MonthlySeries,
    process_type: str = "OLS-CUSUM",
    bandwidth: float = 0.15,
) -> EfpResult:
    series.require_length(40, "Fluctuation tests")
    if process_type not in PROCESS_TYPES:
        raise ParameterError(
            f"Unknown process type `{process_type}`, use one of {PROCESS_TYPES}."
        )
    if not 0 < bandwidth < 0.5:
        raise ParameterError(f"Bandwidth should be in (0, 0.5), got {bandwidth}.")

    x = series.values
    if np.ptp(x) == 0:
        raise DegenerateError(f"Series `{series.name}` is constant.")

    clamp = None
    if process_type.startswith("OLS"):
        e = x - x.mean()
        n = len(e)
        scale = np.std(e, ddof=1) * math.sqrt(n)
    else:
        e = recursive_residuals(x)
        n = len(e)
        scale = np.std(e, ddof=1) * math.sqrt(n)
        if scale == 0:
            raise DegenerateError(
                f"Recursive residuals of `{series.name}` are constant."
            )

    if process_type.endswith("CUSUM"):
        path = np.r_[0.0, np.cumsum(e)] / scale
        if process_type == "OLS-CUSUM":
            stat = float(np.max(np.abs(path)))
            p = float(stats.kstwobign.sf(stat))
        else:
            t = np.arange(n + 1) / n
            stat = float(np.max(np.abs(path) / (1 + 2 * t)))
            p = stats.norm.sf(3 * stat) + math.exp(-4 * stat**2) * stats.norm.cdf(stat)
            p = float(min(1.0, 2 * p))
        bw = None
    else:
        nh = int(math.floor(bandwidth * n))
        if nh < 1:
            raise ParameterError(f"Bandwidth {bandwidth} gives an empty window.")
        path = _moving_sums(e, nh) / scale
        stat = float(np.max(np.abs(path)))
        p, clamp = tables.mosum_pvalue(stat, bandwidth)
        bw = bandwidth

    if clamp:
        logger.debug("%s p-value of `%s` clamped", process_type, series.name)
    return EfpResult(
        process_type=process_type,
        path=path.tolist(),
        statistic=stat,
        p_value=p,
        clamp=clamp,
        bandwidth=bw,
    )


def efp_tests(series: MonthlySeries, bandwidth: float = 0.15) -> List[EfpResult]:
    return [efp_test(series, t, bandwidth) for t in PROCESS_TYPES]


# Dating


def _segment_rss(x, h: int) -> np.ndarray:
    """
    rss[i, j]: residual sum of squares of the mean of x[i..j] (inclusive), for
    segments of at least `h` values. Shorter segments hold +inf.
    """
    n = len(x)
    s1 = np.r_[0.0, np.cumsum(x)]
    s2 = np.r_[0.0, np.cumsum(x**2)]
    rss = np.full((n, n), np.inf)
    for i in range(n - h + 1):
        j = np.arange(i + h - 1, n)
        length = j - i + 1
        total = s1[j + 1] - s1[i]
        rss[i, j] = np.maximum(s2[j + 1] - s2[i] - total**2 / length, 0.0)
    return rss


def _dynamic_program(rss, h: int, max_breaks: int):
    """
    cost[m, j]: minimal RSS of x[0..j] split into m + 1 segments. back[m, j] is the
    last index of the previous segment (earliest on ties).
    """
    n = rss.shape[0]
    cost = np.full((max_breaks + 1, n), np.inf)
    back = np.full((max_breaks + 1, n), -1, dtype=int)
    cost[0] = rss[0]
    for m in range(1, max_breaks + 1):
        for j in range((m + 1) * h - 1, n):
            b = np.arange(m * h - 1, j - h + 1)
            cand = cost[m - 1, b] + rss[b + 1, j]
            k = int(np.argmin(cand))
            cost[m, j] = cand[k]
            back[m, j] = b[k]
    return cost, back


def _backtrack(back, m: int, n: int) -> List[int]:
    breaks, j = [], n - 1
    for k in range(m, 0, -1):
        j = int(back[k, j])
        breaks.append(j)
    return sorted(breaks)


def breakpoints(
    series: MonthlySeries,
    min_seg_frac: float = 0.15,
    max_breaks: int = 5,
    level: float = 0.95,
) -> BreakpointSet:
    """
    Mean-shift dating. Break indices are the 0-based last index of each segment but
    the last one. Confidence intervals are attached when `level` is set.
    """
    x = series.values
    n = len(x)
    h = int(math.floor(min_seg_frac * n))
    if h < 2:
        raise ParameterError(
            f"Minimum segment {min_seg_frac} x {n} is shorter than 2 values."
        )
    if max_breaks < 0 or (max_breaks + 1) * h > n:
        raise ParameterError(
            f"{max_breaks} breaks with segments of at least {h} values do not fit in "
            f"{n} values."
        )

    rss = _segment_rss(x, h)
    cost, back = _dynamic_program(rss, h, max_breaks)
    rss_by_m = cost[:, n - 1]

    bic = []
    for m, r in enumerate(rss_by_m):
        if r <= 0:
            loglik = math.inf
        else:
            loglik = -0.5 * n * (math.log(r) + 1 - math.log(n) + math.log(2 * math.pi))
        bic.append(-2 * loglik + math.log(n) * (2 * m + 1))
    chosen = int(np.argmin(bic))

    breaks_by_m = [_backtrack(back, m, n) for m in range(max_breaks + 1)]
    chosen_breaks = breaks_by_m[chosen]
    logger.debug("Breaks of `%s`: m=%d at %s", series.name, chosen, chosen_breaks)

    bps = BreakpointSet(
        chosen_m=chosen,
        break_indices=chosen_breaks,
        break_dates=[series.decimal_year(i) for i in chosen_breaks],
        rss_by_m=[float(r) for r in rss_by_m],
        bic_by_m=[float(b) for b in bic],
        breaks_by_m=breaks_by_m,
        min_segment=h,
    )
    if level:
        bps.conf_intervals = break_confint(series, bps, level)
    return bps


# Confidence intervals


def _exp_ndtr(a, b):
    """
    exp(a) * Phi(b), evaluated in log space.
    """
    return math.exp(a + log_ndtr(b))


def break_date_cdf(x: float, phi: float, xi: float = 1.0) -> float:
    """
    Distribution function of the argmax of a two-sided Brownian motion with drift,
    with variance ratio `phi` and regressor ratio `xi` between the two sides.
    """
    if x < 0:
        x = -x
        f = xi / phi
        return (
            -math.sqrt(x / (2 * math.pi)) * math.exp(-x / 8)
            - (phi / xi) * (phi + 2 * xi) / (phi + xi)
            * _exp_ndtr(f * (1 + f) * x / 2, -(0.5 + f) * math.sqrt(x))
            + (x / 2 - 2 + (phi + 2 * xi) ** 2 / ((phi + xi) * xi))
            * stats.norm.cdf(-math.sqrt(x) / 2)
        )
    f = xi**2 / phi
    return (
        1
        + math.sqrt(f) * math.sqrt(x / (2 * math.pi)) * math.exp(-f * x / 8)
        + (xi / phi) * (2 * phi + xi) / (phi + xi)
        * _exp_ndtr((phi + xi) * x / 2, -(phi + xi / 2) / math.sqrt(phi) * math.sqrt(x))
        - ((2 * phi + xi) ** 2 / ((phi + xi) * phi) - 2 + f * x / 2)
        * stats.norm.cdf(-math.sqrt(f) * math.sqrt(x) / 2)
    )


def break_confint(
    series: MonthlySeries,
    bps: BreakpointSet,
    level: float = 0.95,
) -> List[BreakInterval]:
    if not 0 < level < 1:
        raise ParameterError(f"Confidence level should be in (0, 1), got {level}.")
    x = series.values
    n = len(x)
    bounds = [-1] + list(bps.break_indices) + [n - 1]
    tail = (1 - level) / 2

    out = []
    for k, bp in enumerate(bps.break_indices, start=1):
        left = x[bounds[k - 1] + 1 : bp + 1]
        right = x[bp + 1 : bounds[k + 1] + 1]
        delta = right.mean() - left.mean()
        scale = max(1.0, abs(left.mean()), abs(right.mean()))
        if abs(delta) <= 1e-12 * scale:
            raise DegenerateError(
                f"No mean shift at break {bp} of `{series.name}`, cannot date it."
            )
        var1, var2 = np.var(left), np.var(right)

        if min(var1, var2) <= 1e-24 * delta**2:
            lo_idx = hi_idx = bp
        else:
            phi = var2 / var1
            rate = delta**2 / var1
            try:
                upper = optimize.brentq(
                    lambda v: break_date_cdf(v, phi) - (1 - tail), -1000, 1000
                )
                lower = optimize.brentq(
                    lambda v: break_date_cdf(v, phi) - tail, -1000, 1000
                )
            except ValueError as e:
                raise NumericError(f"Break date interval at {bp} failed: {e}")
            lo_idx = bp - int(math.ceil(upper / rate))
            hi_idx = bp - int(math.floor(lower / rate))
        lo_idx, hi_idx = max(0, lo_idx), min(n - 1, hi_idx)

        out.append(
            BreakInterval(
                lower_index=lo_idx,
                index=bp,
                upper_index=hi_idx,
                lower=series.decimal_year(lo_idx),
                point=series.decimal_year(bp),
                upper=series.decimal_year(hi_idx),
                label=series.month_label(bp),
            )
        )
    return out
