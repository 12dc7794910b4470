"""Shared builders for the test suite."""

from datetime import date, timedelta

import pytest

from discourse_signal.annotation import AnnotationSet
from discourse_signal.corpus import Corpus, Document
from discourse_signal.market import MarketSeries

import numpy as np


def make_doc(doc_id="d1", channel="news", source="wire", day=date(2015, 1, 1),
             title="a title", body="some body text", author="alice"):
    return Document(id=doc_id, channel=channel, source=source, timestamp=day,
                    title=title, body=body, author=author)


def make_corpus(n=5, start=date(2015, 1, 1), channel="news", body="text here"):
    docs = [
        make_doc(doc_id=f"d{i}", channel=channel, day=start + timedelta(days=i),
                 title=f"title {i}", body=body)
        for i in range(n)
    ]
    return Corpus(docs)


def ann(doc_id, *ratings):
    return AnnotationSet(doc_id, tuple(ratings))


def make_market(days=30, start=date(2015, 1, 1), price_fn=None, volume_fn=None):
    dates = [start + timedelta(days=i) for i in range(days)]
    price = np.array([
        100.0 + (price_fn(i) if price_fn else i) for i in range(days)
    ])
    volume = np.array([
        1000.0 + (volume_fn(i) if volume_fn else 10 * i) for i in range(days)
    ])
    return MarketSeries(dates=dates, average=price, volume=volume)


@pytest.fixture(scope="session")
def synthetic_run(tmp_path_factory):
    """A small end-to-end run directory shared by CLI tests."""
    from discourse_signal.synthetic import generate

    run_dir = tmp_path_factory.mktemp("synthrun")
    info = generate(run_dir, seed=11, days=120, annotated_days=40)
    return run_dir, info
