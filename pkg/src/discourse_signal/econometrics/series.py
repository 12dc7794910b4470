"""Daily sentiment count series built from classified documents."""

from dataclasses import dataclass, field
from datetime import timedelta

import numpy as np

from ..annotation import NEGATIVE, POSITIVE
from ..errors import ValidationError

SENTIMENT_KINDS = ("positive", "negative", "cumulative")


@dataclass
class SentimentSeries:
    """Gap-free per-day counts of positive and negative documents.

    cumulative is the daily difference P - N, not a running total.
    """

    channel: str
    dates: list
    positive: np.ndarray
    negative: np.ndarray
    cumulative: np.ndarray = field(init=False)

    def __post_init__(self):
        self.positive = np.asarray(self.positive, dtype=np.int64)
        self.negative = np.asarray(self.negative, dtype=np.int64)
        if len(self.dates) != len(self.positive) or len(self.dates) != len(self.negative):
            raise ValidationError("sentiment series arrays disagree in length")
        if np.any(self.positive < 0) or np.any(self.negative < 0):
            raise ValidationError("sentiment counts must be non-negative")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur - prev != timedelta(days=1):
                raise ValidationError(
                    f"sentiment series has a gap between {prev} and {cur}"
                )
        self.cumulative = self.positive - self.negative

    def __len__(self):
        return len(self.dates)

    def values(self, kind):
        if kind not in SENTIMENT_KINDS:
            raise ValueError(f"unknown sentiment kind {kind!r}")
        return getattr(self, kind).astype(np.float64)

    def span(self):
        return self.dates[0], self.dates[-1]


def daily_sentiment_series(classified, channel=None):
    """Count labeled documents per calendar day.

    classified is an iterable of (document, label) with positive/negative
    labels (anything else is refused). Days inside the observed span with
    no documents get zero counts so the series stays gap-free.
    """
    pos = {}
    neg = {}
    chan = channel
    n = 0
    for doc, label in classified:
        n += 1
        if chan is None:
            chan = doc.channel
        day = doc.timestamp
        if label == POSITIVE:
            pos[day] = pos.get(day, 0) + 1
        elif label == NEGATIVE:
            neg[day] = neg.get(day, 0) + 1
        else:
            raise ValidationError(
                f"document {doc.id} has non-binary label {label!r}"
            )
    if n == 0:
        raise ValidationError("no classified documents")
    days = sorted(set(pos) | set(neg))
    first, last = days[0], days[-1]
    span = [first + timedelta(days=i) for i in range((last - first).days + 1)]
    return SentimentSeries(
        channel=chan,
        dates=span,
        positive=np.array([pos.get(d, 0) for d in span]),
        negative=np.array([neg.get(d, 0) for d in span]),
    )
