"""Daily market series and movement calculations.

The input CSV needs Date, Average and Volume columns (Ask, Bid, Last are
kept when present, other columns are ignored). Dates must be consecutive
calendar days unless gaps are explicitly allowed; lead-lag pairing assumes
a gap-free span.

A movement over horizon n (1..5 days) is either

    pct: 100 * (v[t+n] - v[t]) / v[t]
    abs: v[t+n] - v[t]

computed on the average price or the volume. Percentage changes from a
zero base are undefined: change() raises, change_series() drops the
affected base dates and counts them.
"""

import csv
import logging
from dataclasses import dataclass
from datetime import date, datetime, timedelta

import numpy as np

from .errors import ParseError, RangeError, SchemaError, ValidationError

log = logging.getLogger(__name__)

HORIZONS = (1, 2, 3, 4, 5)
CHANGE_KINDS = ("pct", "abs")
SERIES_FIELDS = ("average", "volume")

_REQUIRED = {"Date": "date", "Average": "average", "Volume": "volume"}
_OPTIONAL = {"Ask": "ask", "Bid": "bid", "Last": "last"}


@dataclass
class MarketSeries:
    dates: list
    average: np.ndarray
    volume: np.ndarray
    ask: np.ndarray | None = None
    bid: np.ndarray | None = None
    last: np.ndarray | None = None

    def __len__(self):
        return len(self.dates)

    def index_of(self, day):
        try:
            return self._index[day]
        except AttributeError:
            self._index = {d: i for i, d in enumerate(self.dates)}
            return self._index[day]

    def field(self, name):
        if name not in SERIES_FIELDS:
            raise ValueError(f"unknown series field {name!r}")
        return getattr(self, name)


def _parse_date(raw, lineno):
    try:
        return datetime.strptime(raw, "%Y-%m-%d").date()
    except ValueError:
        raise ParseError(f"line {lineno}: bad date {raw!r}, expected YYYY-MM-DD") from None


def _parse_float(raw, column, lineno):
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"line {lineno}: bad {column} value {raw!r}") from None


def load_market_csv(path, allow_gaps=False):
    """Read a daily market CSV sorted by date.

    Raises SchemaError naming any missing required column, ValidationError
    on duplicate dates, non-positive prices, negative volume, or calendar
    gaps (unless allow_gaps).
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaError("market file is empty, expected a header")
        missing = [c for c in _REQUIRED if c not in header]
        if missing:
            raise SchemaError(
                "market file is missing required columns: " + ", ".join(missing)
            )
        idx = {name: header.index(col) for col, name in _REQUIRED.items()}
        opt_idx = {name: header.index(col) for col, name in _OPTIONAL.items()
                   if col in header}
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            day = _parse_date(row[idx["date"]], lineno)
            avg = _parse_float(row[idx["average"]], "Average", lineno)
            vol = _parse_float(row[idx["volume"]], "Volume", lineno)
            if avg <= 0:
                raise ValidationError(f"line {lineno}: non-positive price {avg}")
            if vol < 0:
                raise ValidationError(f"line {lineno}: negative volume {vol}")
            extras = {name: _parse_float(row[i], name, lineno)
                      for name, i in opt_idx.items()}
            rows.append((day, avg, vol, extras))
    if not rows:
        raise ValidationError("market file has no data rows")
    rows.sort(key=lambda r: r[0])
    days = [r[0] for r in rows]
    dupes = {d for i, d in enumerate(days[1:], 1) if d == days[i - 1]}
    if dupes:
        raise ValidationError(
            "duplicate market dates: " + ", ".join(d.isoformat() for d in sorted(dupes))
        )
    if not allow_gaps:
        for prev, cur in zip(days, days[1:]):
            if cur - prev != timedelta(days=1):
                raise ValidationError(
                    f"calendar gap between {prev} and {cur}; pass allow_gaps "
                    "to accept an incomplete span"
                )
    series = MarketSeries(
        dates=days,
        average=np.array([r[1] for r in rows]),
        volume=np.array([r[2] for r in rows]),
    )
    for name in ("ask", "bid", "last"):
        if name in opt_idx:
            setattr(series, name,
                    np.array([r[3][name] for r in rows]))
    return series


def _check_change_args(n, kind, field):
    if n not in HORIZONS:
        raise ValueError(f"horizon must be one of {HORIZONS}, got {n}")
    if kind not in CHANGE_KINDS:
        raise ValueError(f"kind must be pct or abs, got {kind!r}")
    if field not in SERIES_FIELDS:
        raise ValueError(f"field must be average or volume, got {field!r}")


def change(series, day, n=1, kind="pct", field="average"):
    """Movement of one field from day to day+n."""
    _check_change_args(n, kind, field)
    values = series.field(field)
    try:
        i = series.index_of(day)
        j = series.index_of(day + timedelta(days=n))
    except KeyError as exc:
        raise RangeError(f"market series has no entry for {exc.args[0]}") from None
    base, later = float(values[i]), float(values[j])
    if kind == "abs":
        return later - base
    if base == 0.0:
        raise RangeError(f"percentage change from zero base at {day}")
    return 100.0 * (later - base) / base


@dataclass
class ChangeSeries:
    """Movements indexed by their base date."""

    dates: list
    values: np.ndarray
    horizon: int
    kind: str
    field: str
    dropped_zero_base: int = 0

    def __len__(self):
        return len(self.dates)


def change_series(series, n=1, kind="pct", field="average"):
    """Movement at every base date with a partner n days later.

    On a gap-free series the length is len(series) - n. Zero-base dates for
    percentage changes are dropped with a logged count.
    """
    _check_change_args(n, kind, field)
    values = series.field(field)
    index = {d: i for i, d in enumerate(series.dates)}
    out_dates = []
    out_vals = []
    dropped = 0
    for i, day in enumerate(series.dates):
        j = index.get(day + timedelta(days=n))
        if j is None:
            continue
        base, later = float(values[i]), float(values[j])
        if kind == "pct":
            if base == 0.0:
                dropped += 1
                continue
            out_vals.append(100.0 * (later - base) / base)
        else:
            out_vals.append(later - base)
        out_dates.append(day)
    if dropped:
        log.info("dropped %d zero-base dates from %s %s change series",
                 dropped, field, kind)
    return ChangeSeries(
        dates=out_dates,
        values=np.array(out_vals),
        horizon=n,
        kind=kind,
        field=field,
        dropped_zero_base=dropped,
    )
