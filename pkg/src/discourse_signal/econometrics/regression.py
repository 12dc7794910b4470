"""Ordinary least squares on top of a Householder QR factorization.

Solving the triangular system R b = Q' y avoids forming X'X, whose
condition number is the square of X's. The same factorization yields the
coefficient covariance diagonal when standard errors are needed, and, for
designs whose columns are ordered by model nesting, residual sums of
squares for every column prefix at once.
"""

import numpy as np
from scipy.linalg import solve_triangular

from ..errors import NumericError

_RANK_RTOL = 1e-10


def _qr(design):
    X = np.asarray(design, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("design must be a 2-D array")
    m, n = X.shape
    if m < n:
        raise ValueError(f"underdetermined system: {m} rows, {n} columns")
    if n == 0:
        raise ValueError("design has no columns")
    if not np.all(np.isfinite(X)):
        raise NumericError("design contains non-finite values")
    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    if diag.min() <= _RANK_RTOL * max(diag.max(), 1.0):
        raise NumericError("design is rank deficient")
    return X, Q, R


def ols(design, response):
    """Least-squares fit; returns (coefficients, residual sum of squares)."""
    X, Q, R = _qr(design)
    y = np.asarray(response, dtype=np.float64)
    if y.shape != (X.shape[0],):
        raise ValueError("response length does not match design rows")
    if not np.all(np.isfinite(y)):
        raise NumericError("response contains non-finite values")
    coef = solve_triangular(R, Q.T @ y)
    resid = y - X @ coef
    return coef, float(resid @ resid)


def ols_fit(design, response):
    """Fit plus standard errors.

    Returns (coefficients, rss, standard errors). The error variance uses
    the usual rss / (m - n) denominator; with zero residual degrees of
    freedom the standard errors are NaN.
    """
    X, Q, R = _qr(design)
    y = np.asarray(response, dtype=np.float64)
    if y.shape != (X.shape[0],):
        raise ValueError("response length does not match design rows")
    if not np.all(np.isfinite(y)):
        raise NumericError("response contains non-finite values")
    coef = solve_triangular(R, Q.T @ y)
    resid = y - X @ coef
    rss = float(resid @ resid)
    m, n = X.shape
    if m > n:
        sigma2 = rss / (m - n)
        r_inv = solve_triangular(R, np.eye(n))
        se = np.sqrt(sigma2 * np.sum(r_inv * r_inv, axis=1))
    else:
        se = np.full(n, np.nan)
    return coef, rss, se


def prefix_rss(design, response):
    """Residual sums of squares for every leading-column submodel.

    prefix_rss(X, y)[k] is the RSS of regressing y on X[:, :k+1]. Valid
    because Householder QR makes the first k columns of Q span the first k
    columns of X, so each prefix RSS is ||y||^2 minus the explained energy
    of the first k orthogonal directions.
    """
    X, Q, R = _qr(design)
    y = np.asarray(response, dtype=np.float64)
    if y.shape != (X.shape[0],):
        raise ValueError("response length does not match design rows")
    qty = Q.T @ y
    total = float(y @ y)
    explained = np.cumsum(qty * qty)
    out = total - explained
    return np.maximum(out, 0.0)
