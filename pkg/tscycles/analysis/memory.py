"""
Long memory estimators: GPH fractional differencing order, the rescaled range
family of Hurst exponents and the maximum likelihood Hurst exponent.
"""

import logging
import math

import numpy as np
from scipy import optimize, special, stats

from tscycles.analysis.series import MonthlySeries
from tscycles.exceptions import (
    DegenerateError,
    InsufficientDataError,
    NumericError,
    ParameterError,
)
from tscycles.models import LongMemoryEstimates


logger = logging.getLogger(__name__)


def _check_variance(x, name):
    if np.ptp(x) == 0:
        raise DegenerateError(f"Series `{name}` is constant.")


# GPH


def gph_estimate(series: MonthlySeries, m: int = None, power: float = 0.8):
    """
    Log-periodogram regression over the first `m` Fourier frequencies.

    Returns `(d, m)`, with `d` the negated slope of log I(l_j) on log(4 sin^2(l_j/2)).
    """
    x = series.values
    n = len(x)
    if m is None:
        m = int(math.floor(1 + n**power))
    if not 2 <= m < n / 2:
        raise ParameterError(f"GPH bandwidth m={m} should be in [2, {n / 2}).")
    _check_variance(x, series.name)

    j = np.arange(1, m + 1)
    lam = 2 * np.pi * j / n
    periodogram = np.abs(np.fft.fft(x - x.mean())[1 : m + 1]) ** 2 / n
    fit = stats.linregress(np.log(4 * np.sin(lam / 2) ** 2), np.log(periodogram))
    return float(-fit.slope), m


# Rescaled range


def _rs(x) -> float:
    y = np.cumsum(x - x.mean())
    return (y.max() - y.min()) / np.std(x, ddof=1)


def _divisors(n: int, lower: int):
    return [d for d in range(lower, n // 2 + 1) if n % d == 0]


def rs_blocks(n: int, min_block: int = 50):
    """
    Length N' in [0.99 n, n] with the most divisors >= `min_block` (smallest on
    ties) and those divisors.
    """
    best, blocks = n, []
    for k in range(int(math.floor(0.99 * n)), n + 1):
        d = _divisors(k, min_block)
        if len(d) > len(blocks):
            best, blocks = k, d
    return best, blocks


def expected_rs(n: int) -> float:
    """
    Anis-Lloyd expected R/S of n iid normal values, with the Peters correction.
    """
    i = np.arange(1, n)
    ratio = (n - 0.5) / n * np.sum(np.sqrt((n - i) / i))
    if n > 340:
        return ratio / math.sqrt(0.5 * math.pi * n)
    g = math.exp(special.gammaln(0.5 * (n - 1)) - special.gammaln(0.5 * n))
    return g * ratio / math.sqrt(math.pi)


def _mean_block_rs(x, d: int) -> float:
    blocks = x.reshape(-1, d)
    return float(np.mean([_rs(b) for b in blocks]))


def _halving_rs(x):
    """
    Mean R/S and mean segment length over successive halvings of the series.
    """
    n = len(x)
    sizes, rs = [n], [_rs(x)]
    bounds = np.array([0, n // 2, n])
    while np.diff(bounds).min() >= 8:
        segs = list(zip(bounds[:-1], bounds[1:]))
        sizes.append(np.mean([b - a for a, b in segs]))
        rs.append(np.mean([_rs(x[a:b]) for a, b in segs]))
        mids = bounds[:-1] + (np.diff(bounds) + 1) // 2
        bounds = np.sort(np.r_[bounds, mids])
    return np.array(sizes, dtype=float), np.array(rs)


def _slope(x, y) -> float:
    return float(stats.linregress(x, y).slope)


def hurst_rs(series: MonthlySeries, min_block: int = 50) -> dict:
    """
    Rescaled range Hurst exponents: simple, corrected (halving schedule),
    empirical, corrected empirical (Anis-Lloyd/Peters) and theoretical.
    """
    series.require_length(64, "R/S analysis")
    x = series.values
    _check_variance(x, series.name)
    if len(x) % 2:
        x = np.r_[x, (x[-2] + x[-1]) / 2]

    n, blocks = rs_blocks(len(x), min_block)
    if len(blocks) < 2:
        n, blocks = rs_blocks(len(x), 8)
        logger.debug("R/S block floor lowered to 8 for `%s`", series.name)
    if len(blocks) < 2:
        raise InsufficientDataError(f"Not enough R/S block sizes for `{series.name}`.")
    x = x[:n]
    if any(np.ptp(b) == 0 for d in blocks for b in x.reshape(-1, d)):
        raise DegenerateError(f"Series `{series.name}` has constant blocks.")

    d = np.array(blocks, dtype=float)
    rse = np.array([_mean_block_rs(x, k) for k in blocks])
    ers = np.array([expected_rs(k) for k in blocks])
    sizes, rs = _halving_rs(x)

    return {
        "rs_simple": float(math.log(_rs(x)) / math.log(n)),
        "rs_corrected": _slope(np.log(sizes), np.log(rs)),
        "rs_empirical": _slope(np.log10(d), np.log10(rse)),
        "rs_corrected_empirical": _slope(
            np.log10(d), np.log10(rse - ers + np.sqrt(0.5 * np.pi * d))
        ),
        "rs_theoretical": _slope(np.log10(d), np.log10(ers)),
        "rs_block_sizes": [int(k) for k in blocks],
    }


# Maximum likelihood

# the lag one autocorrelation reaches 1 at d = 0.5 and the recursion breaks down
D_MAX = 0.4999


def _fd_acf(d: float, n: int) -> np.ndarray:
    k = np.arange(1, n)
    return np.r_[1.0, np.cumprod((k - 1 + d) / (k - d))]


def fd_profile_nll(d: float, x) -> float:
    """
    Profile negative log likelihood (up to constants) of fractionally differenced
    Gaussian noise, by the Durbin-Levinson recursion on its autocorrelation.
    """
    n = len(x)
    rho = _fd_acf(d, n)
    phi = np.zeros(0)
    v = 1.0
    s = x[0] ** 2
    logdet = 0.0
    for t in range(1, n):
        ptt = (rho[t] - phi @ rho[t - 1 : 0 : -1]) / v
        phi = np.r_[phi - ptt * phi[::-1], ptt]
        v *= 1 - ptt**2
        e = x[t] - phi @ x[t - 1 :: -1]
        s += e**2 / v
        logdet += math.log(v)
    return n * math.log(s / n) + logdet


def hurst_ml(series: MonthlySeries, tol: float = 1e-6) -> float:
    """
    0.5 plus the maximum likelihood fractional differencing order in [0, D_MAX].
    """
    series.require_length(100, "ML Hurst estimation")
    x = series.values
    _check_variance(x, series.name)
    x = x - x.mean()
    res = optimize.minimize_scalar(
        fd_profile_nll,
        bounds=(0.0, D_MAX),
        args=(x,),
        method="bounded",
        options={"xatol": tol},
    )
    if not res.success or not math.isfinite(res.x):
        raise NumericError(f"ML Hurst optimizer did not converge: {res.message}")
    logger.debug("ML d=%.6f for `%s` (%d evaluations)", res.x, series.name, res.nfev)
    return 0.5 + float(res.x)


def long_memory(
    series: MonthlySeries,
    gph_power: float = 0.8,
    min_block: int = 50,
    ml: bool = True,
) -> LongMemoryEstimates:
    d, m = gph_estimate(series, power=gph_power)
    return LongMemoryEstimates(
        gph_d=d,
        bandwidth_m=m,
        ml_hurst=hurst_ml(series) if ml else None,
        **hurst_rs(series, min_block),
    )
