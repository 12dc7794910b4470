"""Augmented Dickey-Fuller unit-root test, constant and no trend.

The test regression is

    dx[t] = a + g * x[t-1] + sum_i d_i * dx[t-i] + e[t],

with the lag depth chosen by AIC over 0..max_lags, where max_lags defaults
to floor(12 * (T / 100)^(1/4)). The statistic is the t-ratio of g, which is
not Student-t under the unit-root null; p-values are bracketed from an
embedded table of constant-only critical values (1%: -3.43, 5%: -2.86,
10%: -2.57), interpolated linearly in the statistic with the end segments
extended and clamped. The 5% crossing is exact by construction, so
stationary_at_5pct is meaningful even though interior p-values are
approximations.

Lag selection compares AIC on a common sample aligned at max_lags (so every
candidate sees the same observations), using the concentrated Gaussian form
n * ln(rss / n) + 2k. All candidate RSS values come from a single QR
factorization, since the candidates are nested column prefixes of one
design. The chosen depth is then refit on the full sample it allows.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NumericError
from .regression import ols_fit, prefix_rss

# (significance, critical value), constant-only regression
CRITICAL_VALUES = ((0.01, -3.43), (0.05, -2.86), (0.10, -2.57))

_P_FLOOR = 1e-4
_P_CEIL = 0.9999


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    p: float
    lags_used: int
    stationary_at_5pct: bool
    n_obs: int


def _approximate_pvalue(stat):
    knots = CRITICAL_VALUES
    # below the tightest knot and above the loosest one, extend the nearest
    # segment's slope
    (p1, c1), (p2, c2), (p3, c3) = knots
    if stat <= c1:
        slope = (p2 - p1) / (c2 - c1)
        p = p1 + slope * (stat - c1)
    elif stat <= c2:
        p = p1 + (p2 - p1) * (stat - c1) / (c2 - c1)
    elif stat <= c3:
        p = p2 + (p3 - p2) * (stat - c2) / (c3 - c2)
    else:
        slope = (p3 - p2) / (c3 - c2)
        p = p3 + slope * (stat - c3)
    return min(max(p, _P_FLOOR), _P_CEIL)


def default_max_lags(n):
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def _design(levels, dx, p, start):
    """Design [1, level, dx lags 1..p] whose row i explains dx[start + i]."""
    t = np.arange(start, len(dx))
    cols = [np.ones(len(t)), levels[t]]
    for i in range(1, p + 1):
        cols.append(dx[t - i])
    return np.column_stack(cols), dx[t]


def adf_test(series, max_lags=None):
    """Run the test on a 1-D series of at least 20 observations."""
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("series must be 1-D")
    n = len(x)
    if n < 20:
        raise ValueError(f"need at least 20 observations, got {n}")
    if not np.all(np.isfinite(x)):
        raise NumericError("series contains non-finite values")
    if np.ptp(x) == 0.0:
        raise NumericError("series is constant, unit-root test is undefined")
    dx = np.diff(x)
    levels = x[:-1]  # levels[t] = x[t], pairs with dx[t] = x[t+1] - x[t]
    if max_lags is None:
        max_lags = default_max_lags(n)
    max_lags = max(0, min(max_lags, (len(dx) - 4) // 2))
    # one QR on the widest design scores every nested candidate
    X_sel, y_sel = _design(levels, dx, max_lags, max_lags)
    rss_by_cols = prefix_rss(X_sel, y_sel)
    n_sel = len(y_sel)
    best_p, best_aic = 0, math.inf
    for p in range(0, max_lags + 1):
        k = 2 + p
        rss = max(rss_by_cols[k - 1], 1e-300)
        aic = n_sel * math.log(rss / n_sel) + 2.0 * k
        if aic < best_aic - 1e-12:
            best_aic = aic
            best_p = p
    X, y = _design(levels, dx, best_p, best_p)
    coef, rss, se = ols_fit(X, y)
    if not np.isfinite(se[1]) or se[1] == 0.0:
        raise NumericError("level coefficient has no usable standard error")
    stat = float(coef[1] / se[1])
    p_value = _approximate_pvalue(stat)
    return AdfResult(
        statistic=stat,
        p=p_value,
        lags_used=best_p,
        stationary_at_5pct=p_value < 0.05,
        n_obs=len(y),
    )
