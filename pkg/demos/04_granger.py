"""Does sentiment predict the market, or the other way round?

A Granger test asks whether lagged values of one series improve a
regression of the other beyond its own lags. It presumes stationary
inputs, so every series is screened with an augmented Dickey-Fuller
test first; price levels fail that screen while percentage changes
pass it.
"""

import tempfile
from pathlib import Path

import numpy as np

from discourse_signal.econometrics import adf_test, granger_sweep, granger_test
from discourse_signal.econometrics.series import SentimentSeries
from discourse_signal.market import load_market_csv
from discourse_signal.synthetic import generate

rng = np.random.default_rng(0)

# Levels of a random walk keep their history, so the unit-root
# hypothesis survives; differencing removes it.
walk = np.cumsum(rng.normal(size=365))
for name, series in (("random walk", walk), ("its differences", np.diff(walk))):
    res = adf_test(series)
    verdict = "stationary" if res.stationary_at_5pct else "not stationary"
    print(f"{name:>16}: statistic {res.statistic:+.2f}, p {res.p:.4f}, "
          f"{res.lags_used} lags -> {verdict}")

# A planted one-step effect: y copies 0.9 of yesterday's x. The forward
# test rejects its null loudly, the reverse one does not.
x = rng.normal(size=300)
y = rng.normal(size=300)
y[1:] += 0.9 * x[:-1]
fwd, rev = granger_test(x, y, lag=1)
print(f"\nx drives y:   F={fwd.f_statistic:8.2f}, p={fwd.p:.6f}")
print(f"y drives x:   F={rev.f_statistic:8.2f}, p={rev.p:.6f}")

# The full sweep crosses every sentiment kind with every market metric
# at every lag, screens both sides for stationarity, and renders the
# rejections as arrows.
with tempfile.TemporaryDirectory() as tmp:
    info = generate(Path(tmp), seed=11, days=200, annotated_days=40)
    market = load_market_csv(info["market"])
    # Planted truth gives a noiseless sentiment series; the pipeline
    # normally builds it from classified documents.
    series = SentimentSeries(
        channel="news",
        dates=list(market.dates),
        positive=info["positive_counts"],
        negative=info["negative_counts"],
    )
    sweep = granger_sweep(series, market, lags=(1, 2, 3))
    print()
    print(sweep.summary_text())
    print()
    print(sweep.full_text())
