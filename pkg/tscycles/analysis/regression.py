"""
Least squares helpers used by the test statistics.
"""

import numpy as np

from tscycles.exceptions import NumericError


def ols(y, X, what: str = "regression"):
    """
    Least squares fit of `y` on the columns of `X`.

    Returns `(coefficients, residuals, inverse of X'X)`. A rank deficient design
    raises `NumericError` naming `what`.
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] <= X.shape[1]:
        raise NumericError(f"Singular {what}: {X.shape[0]} rows, {X.shape[1]} columns.")

    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise NumericError(f"Singular {what}: design matrix is rank deficient.")
    resid = y - X @ coef
    xtx_inv = np.linalg.inv(X.T @ X)
    return coef, resid, xtx_inv


def ssr(resid) -> float:
    return float(np.sum(np.square(resid)))


def lag_matrix(x, lags: int) -> np.ndarray:
    """
    Columns x_{t-1}, ..., x_{t-lags} for t = lags..n-1.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    return np.column_stack([x[lags - i : n - i] for i in range(1, lags + 1)])
