"""
Morlet wavelet power spectrum, dominant frequency of the AR spectral density and
peak detection.
"""

from dataclasses import dataclass
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import signal
from statsmodels.nonparametric.smoothers_lowess import lowess

from tscycles.analysis.ar import ar_spectrum, fit_ar
from tscycles.analysis.series import MonthlySeries
from tscycles.exceptions import DegenerateError, ParameterError
from tscycles.models import Peak


logger = logging.getLogger(__name__)

OMEGA0 = 6.0
FOURIER_FACTOR = 4 * math.pi / (OMEGA0 + math.sqrt(2 + OMEGA0**2))
AR_GRID = 500


@dataclass(frozen=True)
class WaveletSpectrum:
    """
    `power[j, t]` is the wavelet power at `periods[j]` (years) and `times[t]`.
    Cells whose period exceeds `coi[t]` lie in the cone of influence.
    """

    series: MonthlySeries
    periods: np.ndarray
    scales: np.ndarray
    times: np.ndarray
    power: np.ndarray
    avg_power: np.ndarray
    coi: np.ndarray
    dt: float
    dj: float

    def dominant_period(self, lower: float = None, upper: float = None) -> float:
        """
        Period of the largest average power within [lower, upper] years.
        """
        lower = self.periods[0] if lower is None else lower
        upper = self.periods[-1] if upper is None else upper
        band = np.flatnonzero((self.periods >= lower) & (self.periods <= upper))
        if not len(band):
            raise ParameterError(
                f"No wavelet period within [{lower}, {upper}] years "
                f"(available [{self.periods[0]:.3f}, {self.periods[-1]:.3f}])."
            )
        return float(self.periods[band[np.argmax(self.avg_power[band])]])

    def cone_mask(self) -> np.ndarray:
        return self.periods[:, None] > self.coi[None, :]

    def to_frame(self) -> pd.DataFrame:
        labels = [self.series.month_label(i) for i in range(len(self.series))]
        df = pd.DataFrame(self.power, columns=labels)
        df.insert(0, "period", self.periods)
        return df

    def avg_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"period": self.periods, "avg_power": self.avg_power})

    def to_csv(self, path, avg_path=None):
        self.to_frame().to_csv(path, index=False, lineterminator="\n")
        if avg_path is not None:
            self.avg_frame().to_csv(avg_path, index=False, lineterminator="\n")


def loess_detrend(x, span: float = 0.75) -> np.ndarray:
    t = np.arange(len(x), dtype=float)
    trend = lowess(x, t, frac=span, it=0, return_sorted=False)
    return x - trend


def morlet_power(
    series: MonthlySeries,
    dt: float = 1 / 12,
    dj: float = 0.01,
    detrend: float = 0.0,
    rectify: bool = False,
    mask_coi: bool = False,
) -> WaveletSpectrum:
    """
    Continuous wavelet transform with the unit-energy Morlet wavelet (omega0 = 6).

    The demeaned series (optionally loess-detrended with span `detrend`) is zero
    padded to the power of two above its length and convolved with every daughter
    wavelet in the frequency domain. Periods run from 2 dt to n dt, `dj` octaves
    apart. `rectify` divides power by scale, `mask_coi` leaves the cone of
    influence out of the average power.
    """
    if dt <= 0 or dj <= 0:
        raise ParameterError(f"dt and dj should be positive, got {dt} and {dj}.")
    if not 0 <= detrend <= 1:
        raise ParameterError(f"Loess span should be in [0, 1], got {detrend}.")
    series.require_length(32, "Wavelet transform")
    x = series.values
    if np.ptp(x) == 0:
        raise DegenerateError(f"Series `{series.name}` is constant.")
    x = x - x.mean()
    if detrend:
        x = loess_detrend(x, detrend)

    n = len(x)
    npad = 2 ** (int(math.log2(n) + 0.4999) + 1)
    xhat = np.fft.fft(np.r_[x, np.zeros(npad - n)])
    k = np.fft.fftfreq(npad, d=dt) * 2 * math.pi

    n_scales = int(math.floor(math.log2(n / 2) / dj)) + 1
    periods = 2 * dt * 2 ** (dj * np.arange(n_scales))
    scales = periods / FOURIER_FACTOR

    arg = scales[:, None] * k[None, :]
    daughter = np.where(
        k[None, :] > 0,
        math.pi**-0.25
        * np.sqrt(2 * math.pi * scales[:, None] / dt)
        * np.exp(-0.5 * (arg - OMEGA0) ** 2),
        0.0,
    )
    wave = np.fft.ifft(xhat[None, :] * daughter, axis=1)[:, :n]
    power = np.abs(wave) ** 2
    if rectify:
        power = power / scales[:, None]

    edge = np.minimum(np.arange(n), np.arange(n)[::-1]).astype(float)
    coi = FOURIER_FACTOR / math.sqrt(2) * dt * np.maximum(edge, 1e-5)

    if mask_coi:
        inside = periods[:, None] <= coi[None, :]
        counts = inside.sum(axis=1)
        sums = np.where(inside, power, 0.0).sum(axis=1)
        avg = np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)
    else:
        avg = power.mean(axis=1)

    logger.debug("Wavelet of `%s`: %d scales, %d padded", series.name, n_scales, npad)
    return WaveletSpectrum(
        series=series,
        periods=periods,
        scales=scales,
        times=series.times(),
        power=power,
        avg_power=avg,
        coi=coi,
        dt=dt,
        dj=dj,
    )


def find_frequency(series: MonthlySeries) -> int:
    """
    Dominant period, in samples, of the AR spectral density of the linearly
    detrended series (Yule-Walker, AIC order). Returns 1 when the spectrum has no
    marked peak (maximum <= 10) or no maximum away from frequency zero.
    """
    series.require_length(50, "Dominant frequency")
    x = series.values
    if np.ptp(x) == 0:
        raise DegenerateError(f"Series `{series.name}` is constant.")
    n = len(x)
    fit = fit_ar(signal.detrend(x, type="linear"))

    freqs = np.linspace(0, 0.5, AR_GRID)
    spec = ar_spectrum(fit, freqs)
    if spec.max() <= 10:
        return 1

    top = int(np.argmax(spec))
    if top == 0:
        rising = np.flatnonzero(np.diff(spec) > 0)
        if not len(rising):
            return 1
        j = rising[0] + 1
        top = j + int(np.argmax(spec[j:]))
    if freqs[top] < 1e-3:
        return 1
    period = int(math.floor(1 / freqs[top] + 0.5))
    logger.debug(
        "Dominant period of `%s`: %d (AR order %d)", series.name, period, fit.order
    )
    return max(1, min(period, n // 2))


def find_peaks(
    values,
    npeaks: int = None,
    threshold: float = 0.0,
    min_height: float = -math.inf,
    labels: Optional[List[str]] = None,
) -> List[Peak]:
    """
    Strict local maxima of `values`, each with the extent of its ascending and
    descending runs.

    Peaks lower than `min_height`, or rising less than `threshold` above the higher
    end of their extent, are dropped. With `npeaks`, the highest ones are kept.
    Peaks are returned in index order.
    """
    x = np.asarray(values, dtype=float)
    if len(x) < 3:
        return []
    d = np.diff(x)
    idx = np.flatnonzero((d[:-1] > 0) & (d[1:] < 0)) + 1

    peaks = []
    for i in idx:
        left = i
        while left > 0 and x[left - 1] < x[left]:
            left -= 1
        right = i
        while right < len(x) - 1 and x[right + 1] < x[right]:
            right += 1
        if x[i] < min_height:
            continue
        if x[i] - max(x[left], x[right]) < threshold:
            continue
        peaks.append(
            Peak(
                value=float(x[i]),
                index=int(i),
                left=int(left),
                right=int(right),
                label=labels[i] if labels else None,
            )
        )

    if npeaks is not None:
        peaks = sorted(peaks, key=lambda p: -p.value)[:npeaks]
        peaks = sorted(peaks, key=lambda p: p.index)
    return peaks


def peak_separation(peaks: List[Peak], values) -> Tuple[Peak, Peak, int]:
    """
    The highest peak and its partner across the main trough, in index order, with
    the number of samples between them.

    The trough is the lowest point of `values` between the first and the last peak;
    the partner is the highest peak on the other side of it. Neighbouring maxima of
    the same crest are never paired.
    """
    if len(peaks) < 2:
        raise DegenerateError(f"Need two peaks for a separation, got {len(peaks)}.")
    x = np.asarray(values, dtype=float)
    lo, hi = peaks[0].index, peaks[-1].index
    trough = lo + int(np.argmin(x[lo : hi + 1]))
    top = max(peaks, key=lambda p: p.value)
    side = [p for p in peaks if (p.index < trough) != (top.index < trough)]
    if not side:
        raise DegenerateError("All peaks lie on the same side of the trough.")
    partner = max(side, key=lambda p: p.value)
    first, second = sorted((top, partner), key=lambda p: p.index)
    return first, second, second.index - first.index


def peaks_frame(peaks: List[Peak]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "value": [p.value for p in peaks],
            "index": [p.index for p in peaks],
            "month": [p.label for p in peaks],
            "left": [p.left for p in peaks],
            "right": [p.right for p in peaks],
        }
    )
