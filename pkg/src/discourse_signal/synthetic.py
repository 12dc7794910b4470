"""Deterministic synthetic end-to-end fixture.

generate() writes a complete run directory: a year of channel documents
with known per-day polarity counts, crowd annotations for an early slice of
them, a market CSV, and a run config wired for the CLI. The market's daily
percentage price change is planted to follow the previous day's cumulative
sentiment,

    pct_change[t] = beta * C[t-1] / sqrt(var C) + noise[t],

so the pipeline, if it works end to end, recovers a lag-one signal from
sentiment to price in both the correlation table and the causality grid.
Volume is independent noise and carries no signal. Everything is drawn from
one seed; identical calls produce identical bytes.
"""

import json
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .corpus import Corpus, Document, write_documents

POSITIVE_WORDS = (
    "rally", "surge", "gain", "bullish", "optimism", "adoption", "growth",
    "breakout", "record", "strong", "soar", "upbeat", "confidence",
    "milestone", "winning",
)
NEGATIVE_WORDS = (
    "crash", "plunge", "loss", "bearish", "fear", "selloff", "fraud",
    "hack", "weak", "collapse", "panic", "dump", "doubt", "lawsuit",
    "losing",
)
FILLER_WORDS = (
    "the", "market", "price", "today", "traders", "exchange", "volume",
    "report", "analysts", "week", "coin", "network", "news", "update",
    "session", "daily", "activity", "levels", "moves", "watch",
)

_BETA = 1.0
_NOISE = 1.0
_MEAN_DOCS = 2.5
_START_PRICE = 250.0


def _doc_body(rng, polarity_words):
    length = int(rng.integers(10, 17))
    words = []
    for _ in range(length):
        if rng.random() < 0.45:
            words.append(polarity_words[int(rng.integers(len(polarity_words)))])
        else:
            words.append(FILLER_WORDS[int(rng.integers(len(FILLER_WORDS)))])
    # guarantee the polarity is expressed at least twice
    planted = sum(w in polarity_words for w in words)
    for k in range(2 - planted):
        words[k] = polarity_words[int(rng.integers(len(polarity_words)))]
    return " ".join(words)


def _title(rng):
    picks = rng.integers(len(FILLER_WORDS), size=3)
    return " ".join(FILLER_WORDS[int(i)] for i in picks)


def _ratings(rng, positive):
    table = ((1, 2, 0, -1), (0.50, 0.30, 0.15, 0.05))
    values, probs = table
    draws = rng.choice(values, size=5, p=probs)
    return [int(r) if positive else -int(r) for r in draws]


def generate(run_dir, seed=11, days=365, start=date(2015, 1, 1),
             annotated_days=60, channel="news"):
    """Write the fixture into run_dir; returns paths and planted truth."""
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    pos_counts = 1 + rng.poisson(_MEAN_DOCS, size=days)
    neg_counts = 1 + rng.poisson(_MEAN_DOCS, size=days)
    cumulative = pos_counts - neg_counts

    docs = []
    ann_rows = []
    workers = [f"w{i}" for i in range(1, 10)]
    for t in range(days):
        day = start + timedelta(days=t)
        per_day = [(True, i) for i in range(pos_counts[t])]
        per_day += [(False, i) for i in range(neg_counts[t])]
        for positive, i in per_day:
            tag = "p" if positive else "n"
            doc = Document(
                id=f"{channel}-{t:03d}{tag}{i}",
                channel=channel,
                source="synthetic-wire",
                timestamp=day,
                title=_title(rng),
                body=_doc_body(rng, POSITIVE_WORDS if positive else NEGATIVE_WORDS),
                author=workers[int(rng.integers(len(workers)))],
            )
            docs.append(doc)
            if t < annotated_days:
                chosen = rng.choice(len(workers), size=5, replace=False)
                for w, rating in zip(chosen, _ratings(rng, positive)):
                    ann_rows.append((doc.id, workers[int(w)], rating))

    corpus_path = run_dir / f"corpus_{channel}.jsonl"
    write_documents(Corpus(docs), corpus_path)

    ann_path = run_dir / f"annotations_{channel}.csv"
    with open(ann_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("doc_id,worker_id,rating\n")
        for doc_id, worker, rating in ann_rows:
            fh.write(f"{doc_id},{worker},{rating}\n")

    # plant the lag-one driver: day t's percentage move follows C[t-1]
    scale = float(np.sqrt(2.0 * _MEAN_DOCS))
    pct = np.zeros(days)
    pct[1:] = (_BETA * cumulative[:-1] / scale
               + _NOISE * rng.standard_normal(days - 1))
    pct = np.clip(pct, -8.0, 8.0)
    price = _START_PRICE * np.cumprod(1.0 + pct / 100.0)
    volume = 1000.0 * np.exp(0.15 * rng.standard_normal(days))

    market_path = run_dir / "market.csv"
    with open(market_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("Date,Average,Ask,Bid,Volume\n")
        for t in range(days):
            day = (start + timedelta(days=t)).isoformat()
            avg = price[t]
            fh.write(f"{day},{avg:.2f},{avg * 1.004:.2f},{avg * 0.996:.2f},"
                     f"{volume[t]:.2f}\n")

    config = {
        "corpus": {channel: corpus_path.name},
        "annotations": {channel: ann_path.name},
        "market_csv": market_path.name,
        "label_method": "mean",
        "features": {"ngram_range": [1, 1], "min_df": 1, "tfidf": False},
        "classifiers": [
            {"kind": "multinomial_nb", "alpha": 1.0},
            {"kind": "logistic", "learning_rate": 0.1, "max_iter": 2000,
             "tol": 1e-6, "l2": 1e-4},
        ],
        "folds": 10,
        "seed": seed,
        "lags": [1, 2, 3, 4, 5],
        "out_dir": "out",
        "granger_metrics": ["pct_price", "pct_volume"],
    }
    config_path = run_dir / "run.json"
    with open(config_path, "w", encoding="utf-8", newline="") as fh:
        json.dump(config, fh, indent=2, sort_keys=True)
        fh.write("\n")

    return {
        "config": config_path,
        "corpus": corpus_path,
        "annotations": ann_path,
        "market": market_path,
        "positive_counts": pos_counts,
        "negative_counts": neg_counts,
        "pct_change": pct,
        "n_documents": len(docs),
        "n_annotated": len({r[0] for r in ann_rows}),
    }
