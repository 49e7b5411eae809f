"""
Critical value tables and the interpolation helpers that turn them into p-values.

Rows of the unit root tables are sample sizes (25, 50, 100, 250, 500, infinity),
columns are the lower tail probabilities in `PROBS`.
"""

import numpy as np


SIZES = np.array([25, 50, 100, 250, 500, 100000], dtype=float)
PROBS = np.array([0.01, 0.025, 0.05, 0.10, 0.50, 0.90, 0.95, 0.975, 0.99])


def _with_median(rows, median):
    return np.array([r[:4] + [median] + r[4:] for r in rows])


# Dickey-Fuller tau
ADF_TAU = {
    "none": _with_median(
        [
            [-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16],
            [-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08],
            [-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03],
            [-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01],
            [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00],
            [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00],
        ],
        -0.50,
    ),
    "drift": _with_median(
        [
            [-3.75, -3.33, -3.00, -2.62, -0.37, 0.00, 0.34, 0.72],
            [-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66],
            [-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63],
            [-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62],
            [-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61],
            [-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60],
        ],
        -1.57,
    ),
    "trend": _with_median(
        [
            [-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15],
            [-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24],
            [-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28],
            [-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31],
            [-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32],
            [-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33],
        ],
        -2.18,
    ),
}

# Normalized bias statistic Z(rho)
PP_RHO = {
    "none": _with_median(
        [
            [-11.9, -9.3, -7.3, -5.3, 1.01, 1.40, 1.79, 2.28],
            [-12.9, -9.9, -7.7, -5.5, 0.97, 1.35, 1.70, 2.16],
            [-13.3, -10.2, -7.9, -5.6, 0.95, 1.31, 1.65, 2.09],
            [-13.6, -10.3, -8.0, -5.7, 0.93, 1.28, 1.62, 2.04],
            [-13.7, -10.4, -8.0, -5.7, 0.93, 1.28, 1.61, 2.04],
            [-13.8, -10.5, -8.1, -5.7, 0.93, 1.28, 1.60, 2.03],
        ],
        -0.85,
    ),
    "drift": _with_median(
        [
            [-17.2, -14.6, -12.5, -10.2, -0.76, 0.01, 0.65, 1.40],
            [-18.9, -15.7, -13.3, -10.7, -0.81, -0.07, 0.53, 1.22],
            [-19.8, -16.3, -13.7, -11.0, -0.83, -0.10, 0.47, 1.14],
            [-20.3, -16.6, -14.0, -11.2, -0.84, -0.12, 0.43, 1.09],
            [-20.5, -16.8, -14.0, -11.2, -0.84, -0.13, 0.42, 1.06],
            [-20.7, -16.9, -14.1, -11.3, -0.85, -0.13, 0.41, 1.04],
        ],
        -3.04,
    ),
    "trend": _with_median(
        [
            [-22.5, -19.9, -17.9, -15.6, -3.66, -2.51, -1.53, -0.43],
            [-25.7, -22.4, -19.8, -16.8, -3.71, -2.60, -1.66, -0.65],
            [-27.4, -23.6, -20.7, -17.5, -3.74, -2.62, -1.73, -0.75],
            [-28.4, -24.4, -21.3, -18.0, -3.75, -2.64, -1.78, -0.82],
            [-28.9, -24.8, -21.5, -18.1, -3.76, -2.65, -1.78, -0.84],
            [-29.5, -25.1, -21.8, -18.3, -3.77, -2.66, -1.79, -0.87],
        ],
        -7.6,
    ),
}

# KPSS upper tail: statistic at 10%, 5%, 2.5% and 1%
KPSS_PROBS = np.array([0.10, 0.05, 0.025, 0.01])
KPSS_CRIT = {
    "none": np.array([1.196, 1.656, 2.135, 2.787]),
    "drift": np.array([0.347, 0.463, 0.574, 0.739]),
    "trend": np.array([0.119, 0.146, 0.176, 0.216]),
}

# Moving sums of OLS residuals, one regressor. Rows: 10%, 5%, 2.5%, 1%; columns:
# bandwidth 0.05, 0.10, ..., 0.50
MOSUM_H = np.arange(1, 11) * 0.05
MOSUM_PROBS = np.array([0.10, 0.05, 0.025, 0.01])
MOSUM_CRIT = np.array(
    [
        [0.7552, 0.9809, 1.1211, 1.217, 1.2811, 1.3258, 1.3514, 1.3628, 1.361, 1.3751],
        [0.8017, 1.0483, 1.2059, 1.3158, 1.392, 1.4448, 1.4789, 1.4956, 1.4976, 1.5115],
        [0.8444, 1.1119, 1.2845, 1.4053, 1.4917, 1.5548, 1.5946, 1.6152, 1.621, 1.6341],
        [0.8977, 1.1888, 1.3767, 1.5131, 1.6118, 1.6863, 1.7339, 1.7572, 1.7676, 1.7808],
    ]
)


def lower_tail_pvalue(stat: float, table: np.ndarray, n: int):
    """
    Interpolate the table at sample size `n`, then the lower tail probability at
    `stat`. Returns `(p, clamp)`, with p clamped to [0.01, 0.99].
    """
    crit = np.array([np.interp(n, SIZES, table[:, j]) for j in range(table.shape[1])])
    p = float(np.interp(stat, crit, PROBS))
    if stat <= crit[0]:
        return 0.01, "lower"
    if stat >= crit[-1]:
        return 0.99, "upper"
    return p, None


def kpss_pvalue(stat: float, type: str):
    crit = KPSS_CRIT[type]
    if stat >= crit[-1]:
        return 0.01, "lower"
    if stat <= crit[0]:
        return 0.10, "upper"
    return float(np.interp(stat, crit, KPSS_PROBS)), None


def mosum_pvalue(stat: float, h: float):
    """
    Upper tail p-value of a MOSUM statistic at bandwidth `h`, with `p = 1` at zero.
    """
    crit = np.array([np.interp(h, MOSUM_H, row) for row in MOSUM_CRIT])
    if stat >= crit[-1]:
        return 0.01, "lower"
    p = float(np.interp(stat, np.r_[0.0, crit], np.r_[1.0, MOSUM_PROBS]))
    return p, None
