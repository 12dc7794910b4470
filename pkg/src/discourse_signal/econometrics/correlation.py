"""Lagged Pearson correlation between sentiment and market movements.

The correlation of a day's sentiment count with the market movement that
starts the same day and completes n days later asks whether discourse leads
the market. Significance comes from the exact t transform

    t = r * sqrt((n - 2) / (1 - r^2)),

two-sided against Student-t with n - 2 degrees of freedom.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NumericError
from ..market import change_series
from ..tables import csv_text, render_aligned
from .distributions import two_sided_t_pvalue
from .series import SENTIMENT_KINDS

METRIC_KINDS = ("pct_price", "pct_volume", "abs_price", "abs_volume")

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
class CorrelationResult:
    r: float
    p: float
    n: int
    lag: int | None = None
    sentiment_kind: str | None = None
    metric_kind: str | None = None


def pearson(x, y):
    """Pearson correlation with its two-sided p-value.

    Needs at least three pairs so the t transform has positive degrees of
    freedom; a constant input has no defined correlation and raises.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("inputs must be 1-D")
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise ValueError(f"need at least 3 pairs, got {n}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise NumericError("inputs contain non-finite values")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise NumericError("correlation is undefined for a constant series")
    r = float(dx @ dy) / math.sqrt(sx * sy)
    r = max(-1.0, min(1.0, r))
    df = n - 2
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * math.sqrt(df / (1.0 - r * r))
        p = two_sided_t_pvalue(t, df)
    return CorrelationResult(r=r, p=p, n=n)


@dataclass
class CorrelationTable:
    """Grid of correlation cells keyed by (sentiment kind, metric, lag).

    A cell holds a CorrelationResult, or a reason string when that pairing
    was undefined (too little overlap, constant values).
    """

    channel: str
    lags: tuple
    sentiment_kinds: tuple
    metric_kinds: tuple
    cells: dict

    def get(self, sentiment_kind, metric_kind, lag):
        return self.cells[(sentiment_kind, metric_kind, lag)]

    def _cell_text(self, key):
        cell = self.cells[key]
        if isinstance(cell, CorrelationResult):
            return f"r={cell.r:.4f}, p={cell.p:.4f}"
        return f"undefined ({cell})"

    def to_text(self):
        blocks = []
        for kind in self.sentiment_kinds:
            header = [f"{kind} sentiment"] + [f"t+{lag}" for lag in self.lags]
            rows = []
            for metric in self.metric_kinds:
                rows.append([_METRIC_TITLE[metric]] + [
                    self._cell_text((kind, metric, lag)) for lag in self.lags
                ])
            blocks.append(render_aligned(header, rows))
        return "\n".join(blocks)

    def to_csv(self):
        header = ["sentiment", "metric", "lag", "r", "p", "n"]
        rows = []
        for kind in self.sentiment_kinds:
            for metric in self.metric_kinds:
                for lag in self.lags:
                    cell = self.cells[(kind, metric, lag)]
                    if isinstance(cell, CorrelationResult):
                        rows.append([kind, metric, lag,
                                     repr(cell.r), repr(cell.p), cell.n])
                    else:
                        rows.append([kind, metric, lag, "", "", ""])
        return csv_text(header, rows)


def lagged_correlation(sentiment, market, lags=(1, 2, 3, 4, 5),
                       sentiment_kinds=SENTIMENT_KINDS,
                       metric_kinds=METRIC_KINDS):
    """Correlate each sentiment kind with each market movement at each lag.

    Day t's sentiment is paired with the movement from t to t+lag, on the
    calendar intersection of the two series. Undefined pairings are
    recorded and skipped rather than aborting the sweep.
    """
    for lag in lags:
        if lag not in (1, 2, 3, 4, 5):
            raise ValueError(f"lags must lie in 1..5, got {lag}")
    cells = {}
    sent_index = {d: i for i, d in enumerate(sentiment.dates)}
    for metric in metric_kinds:
        kind, field = _METRIC_SPEC[metric]
        for lag in lags:
            cs = change_series(market, n=lag, kind=kind, field=field)
            common = [d for d in cs.dates if d in sent_index]
            for sk in sentiment_kinds:
                key = (sk, metric, lag)
                if len(common) < 3:
                    cells[key] = f"only {len(common)} overlapping days"
                    continue
                xs = sentiment.values(sk)[[sent_index[d] for d in common]]
                cs_index = {d: i for i, d in enumerate(cs.dates)}
                ys = cs.values[[cs_index[d] for d in common]]
                try:
                    res = pearson(xs, ys)
                except NumericError as exc:
                    cells[key] = str(exc)
                    continue
                cells[key] = CorrelationResult(
                    r=res.r, p=res.p, n=res.n, lag=lag,
                    sentiment_kind=sk, metric_kind=metric,
                )
    return CorrelationTable(
        channel=sentiment.channel,
        lags=tuple(lags),
        sentiment_kinds=tuple(sentiment_kinds),
        metric_kinds=tuple(metric_kinds),
        cells=cells,
    )


def nearest_rank_percentile(values, pct):
    """Nearest-rank percentile: the smallest value with at least pct percent
    of the sample at or below it."""
    if not 0 < pct <= 100:
        raise ValueError(f"percentile must lie in (0, 100], got {pct}")
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    if len(ordered) == 0:
        raise ValueError("empty sample has no percentiles")
    rank = math.ceil(pct / 100.0 * len(ordered))
    return float(ordered[rank - 1])


def percentile_filter(sentiment, hi=90.0, lo=10.0):
    """Days with extreme disagreement-free sentiment: positive count above
    its hi percentile and negative count below its lo percentile."""
    p_cut = nearest_rank_percentile(sentiment.positive, hi)
    n_cut = nearest_rank_percentile(sentiment.negative, lo)
    return [
        d for i, d in enumerate(sentiment.dates)
        if sentiment.positive[i] > p_cut and sentiment.negative[i] < n_cut
    ]
