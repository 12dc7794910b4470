import numpy as np

from discourse_signal.corpus import load_documents
from discourse_signal.market import load_market_csv
from discourse_signal.synthetic import generate


def test_generate_writes_a_loadable_run(tmp_path):
    info = generate(tmp_path, seed=3, days=40, annotated_days=15)
    corpus = load_documents(info["corpus"])
    assert len(corpus.documents) == info["n_documents"]
    market = load_market_csv(info["market"])
    assert len(market) == 40
    assert market.ask is not None and market.bid is not None
    assert (tmp_path / "run.json").exists()
    assert info["n_annotated"] > 0


def test_generate_is_deterministic(tmp_path):
    a = generate(tmp_path / "a", seed=7, days=30, annotated_days=10)
    b = generate(tmp_path / "b", seed=7, days=30, annotated_days=10)
    for key in ("corpus", "annotations", "market"):
        assert a[key].read_bytes() == b[key].read_bytes()
    assert list(a["pct_change"]) == list(b["pct_change"])


def test_generate_seeds_differ(tmp_path):
    a = generate(tmp_path / "a", seed=1, days=30, annotated_days=10)
    b = generate(tmp_path / "b", seed=2, days=30, annotated_days=10)
    assert a["corpus"].read_bytes() != b["corpus"].read_bytes()


def test_planted_signal_is_visible(tmp_path):
    info = generate(tmp_path, seed=11, days=365, annotated_days=5)
    c = (info["positive_counts"] - info["negative_counts"]).astype(float)
    pct = np.asarray(info["pct_change"])
    # yesterday's count difference drives today's percent move
    lagged = np.corrcoef(c[:-1], pct[1:])[0, 1]
    contemp = np.corrcoef(c, pct)[0, 1]
    assert lagged > 0.4
    assert abs(contemp) < lagged


def test_market_prices_follow_planted_moves(tmp_path):
    info = generate(tmp_path, seed=5, days=50, annotated_days=10)
    market = load_market_csv(info["market"])
    implied = 100.0 * np.diff(market.average) / market.average[:-1]
    planted = np.asarray(info["pct_change"])[1:]
    # prices are rounded to cents, so alignment is approximate
    assert np.corrcoef(implied, planted)[0, 1] > 0.99
