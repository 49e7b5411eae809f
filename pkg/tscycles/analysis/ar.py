"""
Yule-Walker autoregression with AIC order selection.

Shared by the nonlinearity tests (AR order and residuals) and by the dominant
frequency search (AR spectral density).
"""

from dataclasses import dataclass
import logging
import math

import numpy as np
from statsmodels.tsa.stattools import acovf, levinson_durbin

from tscycles.exceptions import DegenerateError, InsufficientDataError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ArFit:
    order: int
    coefs: np.ndarray
    sigma2: float
    mean: float
    aic: np.ndarray
    residuals: np.ndarray


def default_max_order(n: int) -> int:
    return min(n - 1, int(math.floor(10 * math.log10(n))))


def fit_ar(x, max_order: int = None, order: int = None) -> ArFit:
    """
    Fit AR(p) models for p = 0..max_order by the Levinson-Durbin recursion on the
    biased autocovariance and keep the one with the smallest `n log(v_p) + 2p`.
    A given `order` is fitted as is, without the AIC search.

    The returned innovation variance is inflated by n/(n-p-1), the residuals are
    the one-step errors of the demeaned series from index p on.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 3:
        raise InsufficientDataError(f"AR fit needs at least 3 values, got {n}.")
    if order is not None:
        max_order = order
        if order >= n - 1:
            raise InsufficientDataError(f"AR order {order} with {n} values.")
    else:
        max_order = min(max_order or default_max_order(n), default_max_order(n))
    if max_order < 1:
        raise InsufficientDataError("Series too short for any AR order.")

    mean = float(np.mean(x))
    xc = x - mean
    acov = acovf(xc, adjusted=False, demean=False, fft=False, nlag=max_order)
    if acov[0] <= 0:
        raise DegenerateError("Zero variance series.")

    _, _, pacf, _, phi = levinson_durbin(acov, nlags=max_order, isacov=True)
    variances = acov[0] * np.cumprod(np.r_[1.0, 1 - pacf[1:] ** 2])
    aic = n * np.log(variances) + 2 * np.arange(max_order + 1)
    p = max_order if order is not None else int(np.argmin(aic))

    coefs = phi[1 : p + 1, p].copy() if p else np.zeros(0)
    resid = xc[p:].copy()
    for i, c in enumerate(coefs, start=1):
        resid -= c * xc[p - i : n - i]

    logger.debug("AR order %d selected (max %d)", p, max_order)
    return ArFit(
        order=p,
        coefs=coefs,
        sigma2=float(variances[p] * n / (n - (p + 1))),
        mean=mean,
        aic=aic - aic.min(),
        residuals=resid,
    )


def ar_spectrum(fit: ArFit, freqs) -> np.ndarray:
    """
    Spectral density of the fitted AR model at frequencies in cycles per sample.
    """
    freqs = np.asarray(freqs, dtype=float)
    if fit.order == 0:
        return np.full(freqs.shape, fit.sigma2)
    k = np.arange(1, fit.order + 1)
    arg = 2 * np.pi * np.outer(freqs, k)
    cs = np.cos(arg) @ fit.coefs
    sn = np.sin(arg) @ fit.coefs
    return fit.sigma2 / ((1 - cs) ** 2 + sn**2)
