"""
Empirical mode decomposition and its complete ensemble variant with adaptive noise
(CEEMDAN).

`EMD` sifts one series into intrinsic mode functions (IMFs). `ceemdan` runs the
stage-wise noise-assisted decomposition on top of it: every ensemble member owns a
white noise realization drawn from its own seeded stream, so the result only
depends on `seed` and not on how members are scheduled across threads.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline

from tscycles.analysis.series import MonthlySeries
from tscycles.exceptions import DegenerateError, ParameterError


logger = logging.getLogger(__name__)


def find_extrema(x) -> Tuple[np.ndarray, np.ndarray]:
    """
    Indices of the interior local maxima and minima. The first sample of a flat top
    (bottom) counts as the extremum.
    """
    x = np.asarray(x)
    d = np.diff(x)
    # Carry the last nonzero slope over flat stretches
    s = np.sign(d)
    nz = np.flatnonzero(s)
    if len(nz) < 2:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
    turns = nz[1:][s[nz[1:]] != s[nz[:-1]]]
    prev = nz[np.searchsorted(nz, turns) - 1]
    starts = prev + 1
    maxima = starts[s[turns] < 0]
    minima = starts[s[turns] > 0]
    return maxima, minima


def count_zero_crossings(x) -> int:
    pos = np.asarray(x) >= 0
    return int(np.count_nonzero(pos[1:] != pos[:-1]))


def count_extrema(x) -> int:
    maxima, minima = find_extrema(x)
    return len(maxima) + len(minima)


def mean_period(imf) -> float:
    """
    Mean zero-crossing period in samples, `inf` without crossings.
    """
    zc = count_zero_crossings(imf)
    return 2 * len(imf) / zc if zc else math.inf


class EMD:
    """
    Sifting with natural cubic spline envelopes through the extrema, mirrored
    `nbsym` times at each boundary. A mode is accepted once its extrema and
    zero-crossing counts differ by at most one for `s_number` consecutive siftings,
    or after `max_siftings`.
    """

    def __init__(self, s_number: int = 4, max_siftings: int = 50, nbsym: int = 2):
        if s_number < 1 or max_siftings < 1 or nbsym < 1:
            raise ParameterError(
                "EMD needs a positive S-number, sifting cap and boundary mirror size."
            )
        self.s_number = s_number
        self.max_siftings = max_siftings
        self.nbsym = nbsym

    def _envelope(self, pos, x, n):
        k = min(self.nbsym, len(pos))
        left = -pos[:k][::-1]
        right = 2 * (n - 1) - pos[-k:][::-1]
        t = np.r_[left, pos, right]
        v = np.r_[x[pos[:k]][::-1], x[pos], x[pos[-k:]][::-1]]
        grid = np.arange(n)
        if len(pos) == 2:
            return np.interp(grid, t, v)
        return CubicSpline(t, v, bc_type="natural")(grid)

    def can_sift(self, x) -> bool:
        maxima, minima = find_extrema(x)
        return len(maxima) >= 2 and len(minima) >= 2

    def sift(self, x) -> Optional[np.ndarray]:
        """
        Extract the first IMF of `x`, or `None` when `x` has too few extrema.
        """
        n = len(x)
        h = np.array(x, dtype=float)
        streak = 0
        for it in range(1, self.max_siftings + 1):
            maxima, minima = find_extrema(h)
            if len(maxima) < 2 or len(minima) < 2:
                if it == 1:
                    return None
                break
            h = h - 0.5 * (self._envelope(maxima, h, n) + self._envelope(minima, h, n))
            if abs(count_extrema(h) - count_zero_crossings(h)) <= 1:
                streak += 1
            else:
                streak = 0
            if streak >= self.s_number:
                break
        else:
            logger.debug("Sifting stopped at %d iterations", self.max_siftings)
        return h

    def decompose(self, x, max_imfs: int = None) -> Tuple[List[np.ndarray], np.ndarray]:
        """
        Returns the list of IMFs and the residual; their sum is `x`.
        """
        residual = np.array(x, dtype=float)
        imfs = []
        while max_imfs is None or len(imfs) < max_imfs:
            imf = self.sift(residual)
            if imf is None:
                break
            imfs.append(imf)
            residual = residual - imf
        return imfs, residual


@dataclass(frozen=True)
class ImfSet:
    """
    n x k matrix of modes, the last column being the residual.
    """

    imfs: np.ndarray
    ensemble_size: int
    noise_strength: float
    s_number: int
    max_siftings: int
    seed: int
    terminated_early: bool = False
    names: List[str] = field(default_factory=list)

    @property
    def n_columns(self) -> int:
        return self.imfs.shape[1]

    def reconstruction(self) -> np.ndarray:
        return self.imfs.sum(axis=1)

    def mean_periods(self) -> List[float]:
        """
        Mean zero-crossing period (samples) of every column but the residual.
        """
        return [mean_period(self.imfs[:, j]) for j in range(self.n_columns - 1)]

    def trend_column(self) -> int:
        """
        Mode with the longest finite mean zero-crossing period.
        """
        periods = [p if math.isfinite(p) else -1.0 for p in self.mean_periods()]
        if not periods or max(periods) < 0:
            raise DegenerateError("No oscillating mode to pick a trend from.")
        return int(np.argmax(periods))

    def low_frequency(self, first: int = 3) -> np.ndarray:
        """
        Sum of the columns from `first` (0-based) on, residual included.
        """
        return self.imfs[:, first:].sum(axis=1)

    def to_frame(self, series: MonthlySeries = None) -> pd.DataFrame:
        cols = self.names or [f"imf{j + 1}" for j in range(self.n_columns - 1)] + [
            "residual"
        ]
        df = pd.DataFrame(self.imfs, columns=cols)
        if series is not None:
            df.insert(0, "month", [series.month_label(i) for i in range(len(series))])
        return df

    def to_csv(self, path, series: MonthlySeries = None):
        self.to_frame(series).to_csv(path, index=False, lineterminator="\n")


class _Member:
    """
    One ensemble member: its noise realization and the EMD modes of that noise.
    """

    def __init__(self, seed_seq, n, emd: EMD, max_modes: int):
        rng = np.random.default_rng(seed_seq)
        self.noise = rng.standard_normal(n)
        self.modes, _ = emd.decompose(self.noise, max_imfs=max_modes)

    def mode(self, k: int, n: int) -> np.ndarray:
        if k < len(self.modes):
            return self.modes[k]
        return np.zeros(n)


def ceemdan(
    series: MonthlySeries,
    ensemble_size: int = 250,
    noise_strength: float = 0.2,
    s_number: int = 4,
    max_siftings: int = 50,
    seed: int = 0,
    workers: int = 1,
) -> ImfSet:
    """
    Complete ensemble EMD with adaptive noise.

    Stage 0 averages the first IMF of `x + beta * w_i` over the ensemble. Stage k
    averages the local mean of `r_k + beta * E_k(w_i)`, where `E_k` is the k-th EMD
    mode of the member noise, and takes `r_k` minus that mean as the next mode.
    `beta` is `noise_strength` times the standard deviation of the input. The
    output has floor(log2(n)) columns, the last one being the residual. When the
    residual runs out of extrema the remaining mode columns are zero.
    """
    series.require_length(64, "CEEMDAN")
    if ensemble_size < 1:
        raise ParameterError(f"Ensemble size should be >= 1, got {ensemble_size}.")
    if noise_strength < 0:
        raise ParameterError(f"Noise strength should be >= 0, got {noise_strength}.")
    if workers < 1:
        raise ParameterError(f"Workers should be >= 1, got {workers}.")
    emd = EMD(s_number=s_number, max_siftings=max_siftings)

    x = series.values
    n = len(x)
    sd = float(np.std(x))
    if sd == 0:
        raise DegenerateError(f"Series `{series.name}` is constant.")
    beta = noise_strength * sd
    n_modes = int(math.floor(math.log2(n))) - 1

    seeds = np.random.SeedSequence(seed).spawn(ensemble_size)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        members = list(
            pool.map(lambda s: _Member(s, n, emd, max(n_modes - 1, 1)), seeds)
        )

        def first_imf(m: _Member):
            imf = emd.sift(x + beta * m.noise)
            return np.zeros(n) if imf is None else imf

        def local_mean(k, r):
            def run(m: _Member):
                y = r + beta * m.mode(k - 1, n)
                imf = emd.sift(y)
                return y if imf is None else y - imf

            return run

        modes = [np.stack(list(pool.map(first_imf, members))).mean(axis=0)]
        residual = x - modes[0]
        terminated = False
        for k in range(1, n_modes):
            if not emd.can_sift(residual):
                terminated = True
                break
            means = list(pool.map(local_mean(k, residual), members))
            mean = np.stack(means).mean(axis=0)
            modes.append(residual - mean)
            residual = mean

    if terminated:
        logger.warning(
            "CEEMDAN of `%s` stopped after %d modes, the residual has too few extrema",
            series.name,
            len(modes),
        )
        modes.extend(np.zeros(n) for _ in range(n_modes - len(modes)))
    logger.debug(
        "CEEMDAN of `%s`: %d members, %d columns",
        series.name,
        ensemble_size,
        n_modes + 1,
    )

    return ImfSet(
        imfs=np.column_stack(modes + [residual]),
        ensemble_size=ensemble_size,
        noise_strength=noise_strength,
        s_number=s_number,
        max_siftings=max_siftings,
        seed=seed,
        terminated_early=terminated,
    )


def emd_decompose(
    series: MonthlySeries, s_number: int = 4, max_siftings: int = 50
) -> ImfSet:
    """
    Plain EMD of a series, as an `ImfSet` without ensemble.
    """
    series.require_length(8, "EMD")
    imfs, residual = EMD(s_number, max_siftings).decompose(series.values)
    return ImfSet(
        imfs=np.column_stack(imfs + [residual]),
        ensemble_size=1,
        noise_strength=0.0,
        s_number=s_number,
        max_siftings=max_siftings,
        seed=0,
    )
