"""Crowd annotation aggregation.

Workers rate documents on a five-point scale (-2 very negative .. +2 very
positive). Two aggregation rules turn the per-document rating lists into a
single label:

* majority_vote: the extreme ratings are first folded into their moderate
  neighbours (-2 -> -1, +2 -> +1), then the modal value wins; any tie for
  the top count yields neutral.
* mean_label: the sign of the arithmetic mean of the raw ratings; a mean of
  exactly zero yields neutral. Because ratings are integers the sign of the
  integer sum decides, so no float comparison is involved.

mean_label breaks far fewer ties than the vote, which matters because
neutral documents are dropped from binary training sets.
"""

import csv
import statistics
from collections import Counter
from dataclasses import dataclass, field

from .corpus import summarize
from .errors import ParseError, SchemaError, ValidationError
from .tables import csv_text, render_aligned

RATING_VALUES = (-2, -1, 0, 1, 2)
BUCKET_NAMES = ("- -", "-", "0", "+", "+ +")

POSITIVE = "positive"
NEGATIVE = "negative"
NEUTRAL = "neutral"


@dataclass(frozen=True)
class AnnotationSet:
    """All ratings collected for one document."""

    doc_id: str
    ratings: tuple
    worker_ids: tuple = ()

    def __post_init__(self):
        if not self.doc_id:
            raise ValidationError("annotation set needs a doc_id")
        if not self.ratings:
            raise ValidationError(f"no ratings for document {self.doc_id}")
        for r in self.ratings:
            if r not in RATING_VALUES:
                raise ValidationError(
                    f"rating {r!r} for document {self.doc_id} is outside -2..2"
                )
        if self.worker_ids and len(self.worker_ids) != len(self.ratings):
            raise ValidationError(
                f"document {self.doc_id}: worker list does not match ratings"
            )


@dataclass(frozen=True)
class InferredLabel:
    doc_id: str
    method: str
    value: str
    mean_score: float | None = None


def read_annotations(path):
    """Load a ratings CSV with header doc_id, worker_id, rating.

    Returns AnnotationSets grouped by document in first-seen order.
    """
    by_doc = {}
    workers = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaError("annotation file is empty, expected a header")
        wanted = ["doc_id", "worker_id", "rating"]
        cols = {}
        for name in wanted:
            if name not in header:
                raise SchemaError(f"annotation file is missing column {name!r}")
            cols[name] = header.index(name)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rating = int(row[cols["rating"]])
            except (ValueError, IndexError):
                raise ParseError(f"line {lineno}: bad rating value") from None
            if rating not in RATING_VALUES:
                raise ParseError(f"line {lineno}: rating {rating} outside -2..2")
            doc_id = row[cols["doc_id"]]
            by_doc.setdefault(doc_id, []).append(rating)
            workers.setdefault(doc_id, []).append(row[cols["worker_id"]])
    return [
        AnnotationSet(doc_id, tuple(ratings), tuple(workers[doc_id]))
        for doc_id, ratings in by_doc.items()
    ]


def _collapse(rating):
    if rating > 1:
        return 1
    if rating < -1:
        return -1
    return rating


_VALUE_NAME = {-1: NEGATIVE, 0: NEUTRAL, 1: POSITIVE}


def majority_vote(ann):
    counts = Counter(_collapse(r) for r in ann.ratings)
    ranked = counts.most_common()
    top = ranked[0][1]
    if sum(1 for _, c in ranked if c == top) > 1:
        value = NEUTRAL
    else:
        value = _VALUE_NAME[ranked[0][0]]
    return InferredLabel(ann.doc_id, "majority", value)


def mean_label(ann):
    total = sum(ann.ratings)
    if total > 0:
        value = POSITIVE
    elif total < 0:
        value = NEGATIVE
    else:
        value = NEUTRAL
    return InferredLabel(ann.doc_id, "mean", value, total / len(ann.ratings))


def raw_majority_distribution(annotations):
    """Counts of the modal raw rating over the five buckets, for reporting.

    The vote used for labels collapses the scale first, so it cannot place
    documents in the extreme buckets; this keeps the full scale. Ties pick
    the tied rating closest to zero, and a symmetric -1/+1 tie counts as 0.
    """
    counts = dict.fromkeys(RATING_VALUES, 0)
    for ann in annotations:
        c = Counter(ann.ratings)
        top = max(c.values())
        tied = sorted((r for r, n in c.items() if n == top), key=abs)
        mode = tied[0]
        if len(tied) > 1 and abs(tied[0]) == abs(tied[1]):
            mode = 0
        counts[mode] += 1
    return counts


@dataclass
class TrainingSet:
    """Binary text/label pairs plus the class balance they came from."""

    pairs: list
    positive_count: int
    negative_count: int
    method: str
    channel: str | None = None

    def balance(self):
        total = self.positive_count + self.negative_count
        if total == 0:
            return 0.0, 0.0
        return (
            100.0 * self.positive_count / total,
            100.0 * self.negative_count / total,
        )


def build_training_set(corpus, annotations, method="mean"):
    """Pair document summaries with aggregated binary labels.

    Neutral documents are dropped. Annotations whose doc_id is not in the
    corpus raise ValidationError naming the offenders.
    """
    if method == "majority":
        label_fn = majority_vote
    elif method == "mean":
        label_fn = mean_label
    else:
        raise ValueError(f"unknown aggregation method {method!r}")
    docs = {d.id: d for d in corpus}
    missing = [a.doc_id for a in annotations if a.doc_id not in docs]
    if missing:
        raise ValidationError(
            "annotations reference unknown documents: " + ", ".join(sorted(missing))
        )
    pairs = []
    pos = neg = 0
    channel = None
    for ann in annotations:
        value = label_fn(ann).value
        if value == NEUTRAL:
            continue
        doc = docs[ann.doc_id]
        channel = channel or doc.channel
        pairs.append((summarize(doc), value))
        if value == POSITIVE:
            pos += 1
        else:
            neg += 1
    return TrainingSet(pairs, pos, neg, method, channel)


@dataclass
class DistributionReport:
    """Rating distribution per source plus worker activity statistics."""

    per_source: dict
    totals: dict
    worker_hist: list
    worker_mean: float
    worker_std: float
    n_annotations: int
    n_workers: int
    bin_width: int = 20

    def percent(self, count):
        return 100.0 * count / self.n_annotations if self.n_annotations else 0.0

    def to_csv(self):
        header = ["source"] + list(BUCKET_NAMES) + ["total"]
        rows = []
        for source, counts in self.per_source.items():
            rows.append([source] + [str(counts[v]) for v in RATING_VALUES]
                        + [str(sum(counts.values()))])
        rows.append(
            ["Total"]
            + [f"{self.totals[v]} ({self.percent(self.totals[v]):.1f}%)" for v in RATING_VALUES]
            + [str(self.n_annotations)]
        )
        return csv_text(header, rows)

    def to_text(self):
        header = ["Source"] + list(BUCKET_NAMES) + ["Total"]
        rows = []
        for source, counts in self.per_source.items():
            rows.append([source] + [str(counts[v]) for v in RATING_VALUES]
                        + [str(sum(counts.values()))])
        rows.append(
            ["Total"]
            + [f"{self.totals[v]} ({self.percent(self.totals[v]):.1f}%)" for v in RATING_VALUES]
            + [str(self.n_annotations)]
        )
        out = [render_aligned(header, rows)]
        out.append("")
        out.append(
            f"Workers: {self.n_workers}, annotations: {self.n_annotations}, "
            f"mean per worker: {self.worker_mean:.1f}, std: {self.worker_std:.2f}"
        )
        hist_rows = [
            [f"{lo}-{hi}", str(n)] for lo, hi, n in self.worker_hist
        ]
        out.append(render_aligned(["Annotations", "Workers"], hist_rows))
        return "\n".join(out)


def distribution_report(annotations, source_of, bin_width=20):
    """Summarize raw ratings per source and worker activity.

    source_of maps doc_id to a source name. Sources appear in first-seen
    order; percentages on the totals row are over all ratings. The worker
    histogram buckets annotation counts with the given bin width, and the
    spread is the population standard deviation.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    per_source = {}
    totals = dict.fromkeys(RATING_VALUES, 0)
    per_worker = Counter()
    n = 0
    for ann in annotations:
        try:
            source = source_of[ann.doc_id]
        except KeyError:
            raise ValidationError(f"no source known for document {ann.doc_id}") from None
        bucket = per_source.setdefault(source, dict.fromkeys(RATING_VALUES, 0))
        for r in ann.ratings:
            bucket[r] += 1
            totals[r] += 1
            n += 1
        workers = ann.worker_ids or tuple(f"w{i}" for i in range(len(ann.ratings)))
        for w in workers:
            per_worker[w] += 1
    if n == 0:
        raise ValidationError("no annotations")
    counts = list(per_worker.values())
    mean = statistics.fmean(counts)
    std = statistics.pstdev(counts) if len(counts) > 1 else 0.0
    top = max(counts)
    hist = []
    lo = 1
    while lo <= top:
        hi = lo + bin_width - 1
        hist.append((lo, hi, sum(1 for c in counts if lo <= c <= hi)))
        lo = hi + 1
    return DistributionReport(
        per_source=per_source,
        totals=totals,
        worker_hist=hist,
        worker_mean=mean,
        worker_std=std,
        n_annotations=n,
        n_workers=len(per_worker),
        bin_width=bin_width,
    )


def majority_distribution_table(annotations):
    """Table of modal raw ratings over the five buckets, with percentages."""
    counts = raw_majority_distribution(annotations)
    total = sum(counts.values())
    header = list(BUCKET_NAMES)
    row = [
        f"{counts[v]} ({100.0 * counts[v] / total:.1f}%)" if total else "0"
        for v in RATING_VALUES
    ]
    return counts, csv_text(header, [row]), render_aligned(header, [row])
