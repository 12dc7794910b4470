"""Granger causality tests between sentiment and market series.

For each direction the restricted model regresses y[t] on a constant and
its own L lags, the unrestricted one adds x's L lags, and the improvement
is judged by

    F = ((RSS_r - RSS_u) / L) / (RSS_u / (T - 2L - 1)),

with T the number of usable rows (series length minus L) and the p-value
from F(L, T - 2L - 1). A perfectly explained y makes RSS_u collapse, so the
denominator RSS is floored at 1e-12.

The sweep runs both directions for every sentiment kind and market metric.
In the summary grid an arrow points from the series whose past helps:
"->" when sentiment helps predict the market metric, "<-" for the reverse,
both when both reject at the 5% level, blank when neither does. Sweep
inputs are screened with the unit-root test first; a series that looks
non-stationary earns a warning, not an abort, since the bracketed p-values
are approximate.
"""

import warnings
from dataclasses import dataclass
from datetime import timedelta

import numpy as np

from ..errors import NumericError
from ..market import change_series
from ..tables import csv_text, render_aligned
from .distributions import f_sf
from .regression import ols
from .series import SENTIMENT_KINDS
from .stationarity import adf_test

_RSS_FLOOR = 1e-12

SWEEP_METRICS = ("pct_price", "pct_volume")

_METRIC_SPEC = {
    "pct_price": ("pct", "average"),
    "pct_volume": ("pct", "volume"),
    "abs_price": ("abs", "average"),
    "abs_volume": ("abs", "volume"),
}

_METRIC_TITLE = {
    "pct_price": "% change price",
    "pct_volume": "% change volume",
    "abs_price": "abs change price",
    "abs_volume": "abs change volume",
}


@dataclass(frozen=True)
class GrangerResult:
    direction: str          # "x->y" or "y->x"
    lag: int
    f_statistic: float
    p: float
    n_obs: int              # usable rows T
    rss_restricted: float
    rss_unrestricted: float


def _lag_design(x, y, lag, include_x):
    t = np.arange(lag, len(y))
    cols = [np.ones(len(t))]
    for i in range(1, lag + 1):
        cols.append(y[t - i])
    if include_x:
        for i in range(1, lag + 1):
            cols.append(x[t - i])
    return np.column_stack(cols), y[t]


def _one_direction(x, y, lag, direction):
    X_r, resp = _lag_design(x, y, lag, include_x=False)
    X_u, _ = _lag_design(x, y, lag, include_x=True)
    try:
        _, rss_r = ols(X_r, resp)
        _, rss_u = ols(X_u, resp)
    except NumericError as exc:
        raise NumericError(f"{direction} lag {lag}: {exc}") from None
    t_eff = len(resp)
    df_den = t_eff - 2 * lag - 1
    f = max(0.0, (rss_r - rss_u) / lag) / (max(rss_u, _RSS_FLOOR) / df_den)
    return GrangerResult(
        direction=direction,
        lag=lag,
        f_statistic=f,
        p=f_sf(f, lag, df_den),
        n_obs=t_eff,
        rss_restricted=rss_r,
        rss_unrestricted=rss_u,
    )


def granger_test(x, y, lag):
    """Both directions at one lag; returns (x->y result, y->x result)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("inputs must be 1-D")
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if lag < 1:
        raise ValueError(f"lag must be at least 1, got {lag}")
    if len(x) - lag < 2 * lag + 2:
        raise ValueError(
            f"series of length {len(x)} is too short for lag {lag}"
        )
    if np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        raise NumericError("constant series cannot be tested for causality")
    return (
        _one_direction(x, y, lag, "x->y"),
        _one_direction(y, x, lag, "y->x"),
    )


@dataclass
class GrangerSweep:
    """All pairwise results plus stationarity screening.

    cells maps (sentiment kind, metric, lag) to a (x->y, y->x) pair or to a
    reason string when that pairing could not be tested.
    """

    channel: str
    lags: tuple
    sentiment_kinds: tuple
    metric_kinds: tuple
    cells: dict
    stationarity: dict

    def arrow(self, sentiment_kind, metric_kind, lag, level=0.05):
        cell = self.cells[(sentiment_kind, metric_kind, lag)]
        if not isinstance(cell, tuple):
            return "?"
        fwd, rev = cell
        mark = []
        if fwd.p < level:
            mark.append("->")
        if rev.p < level:
            mark.append("<-")
        return " ".join(mark)

    def summary_text(self, level=0.05):
        header = ["series pair"] + [f"lag {lag}" for lag in self.lags]
        rows = []
        for sk in self.sentiment_kinds:
            for metric in self.metric_kinds:
                rows.append(
                    [f"{sk} sentiment / {_METRIC_TITLE[metric]}"]
                    + [self.arrow(sk, metric, lag, level) for lag in self.lags]
                )
        legend = (
            f"-> sentiment precedes metric, <- metric precedes sentiment "
            f"(rejection at {level:g})\n"
        )
        return render_aligned(header, rows) + legend

    def to_csv(self):
        header = ["sentiment", "metric", "lag", "direction", "f", "p",
                  "n_obs", "rss_restricted", "rss_unrestricted"]
        rows = []
        for sk in self.sentiment_kinds:
            for metric in self.metric_kinds:
                for lag in self.lags:
                    cell = self.cells[(sk, metric, lag)]
                    if not isinstance(cell, tuple):
                        rows.append([sk, metric, lag, "undefined", "", "", "", "", ""])
                        continue
                    for res, direction in zip(cell, ("sent->metric", "metric->sent")):
                        rows.append([
                            sk, metric, lag, direction,
                            repr(res.f_statistic), repr(res.p), res.n_obs,
                            repr(res.rss_restricted), repr(res.rss_unrestricted),
                        ])
        return csv_text(header, rows)

    def full_text(self):
        header = ["null hypothesis"] + [f"lag {lag}" for lag in self.lags]
        rows = []
        for sk in self.sentiment_kinds:
            for metric in self.metric_kinds:
                fwd_cells, rev_cells = [], []
                for lag in self.lags:
                    cell = self.cells[(sk, metric, lag)]
                    if not isinstance(cell, tuple):
                        fwd_cells.append("undefined")
                        rev_cells.append("undefined")
                    else:
                        fwd, rev = cell
                        fwd_cells.append(f"F={fwd.f_statistic:.4f}, p={fwd.p:.4f}")
                        rev_cells.append(f"F={rev.f_statistic:.4f}, p={rev.p:.4f}")
                rows.append(
                    [f"{sk} sentiment does not precede {_METRIC_TITLE[metric]}"]
                    + fwd_cells
                )
                rows.append(
                    [f"{_METRIC_TITLE[metric]} does not precede {sk} sentiment"]
                    + rev_cells
                )
        return render_aligned(header, rows)


def _daily_changes(market, metric):
    """Day-indexed movement series: the value at day t is the change that
    completed on t (from t-1 to t), so 'today's sentiment moves tomorrow's
    market' shows up at lag one."""
    kind, field = _METRIC_SPEC[metric]
    cs = change_series(market, n=1, kind=kind, field=field)
    return [d + timedelta(days=1) for d in cs.dates], cs.values


def granger_sweep(sentiment, market, lags=(1, 2, 3, 4, 5),
                  metric_kinds=SWEEP_METRICS, max_adf_lags=None):
    """Bidirectional tests for every sentiment kind, metric and lag.

    Both series are restricted to their calendar intersection. Each input
    series is screened with the unit-root test; apparent non-stationarity
    warns and the sweep continues.
    """
    for lag in lags:
        if lag < 1:
            raise ValueError(f"lags must be positive, got {lag}")
    stationarity = {}
    cells = {}
    sent_index = {d: i for i, d in enumerate(sentiment.dates)}
    aligned = {}
    for metric in metric_kinds:
        days, values = _daily_changes(market, metric)
        common = [d for d in days if d in sent_index]
        day_index = {d: i for i, d in enumerate(days)}
        ys = np.array([values[day_index[d]] for d in common])
        aligned[metric] = (common, ys)
        _screen(f"{metric}", ys, stationarity, max_adf_lags)
    for sk in SENTIMENT_KINDS:
        full = sentiment.values(sk)
        _screen(f"{sk} sentiment", full, stationarity, max_adf_lags)
        for metric in metric_kinds:
            common, ys = aligned[metric]
            xs = np.array([full[sent_index[d]] for d in common])
            for lag in lags:
                key = (sk, metric, lag)
                try:
                    cells[key] = granger_test(xs, ys, lag)
                except (ValueError, NumericError) as exc:
                    cells[key] = str(exc)
    return GrangerSweep(
        channel=sentiment.channel,
        lags=tuple(lags),
        sentiment_kinds=tuple(SENTIMENT_KINDS),
        metric_kinds=tuple(metric_kinds),
        cells=cells,
        stationarity=stationarity,
    )


def _screen(name, values, stationarity, max_adf_lags):
    try:
        res = adf_test(values, max_lags=max_adf_lags)
    except (ValueError, NumericError) as exc:
        stationarity[name] = str(exc)
        return
    stationarity[name] = res
    if not res.stationary_at_5pct:
        warnings.warn(
            f"{name} series looks non-stationary "
            f"(ADF statistic {res.statistic:.3f}, p~{res.p:.3f}); "
            "causality p-values may be unreliable",
            stacklevel=3,
        )
