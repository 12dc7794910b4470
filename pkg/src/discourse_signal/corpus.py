"""Document corpus handling.

A corpus is a list of short documents gathered from one of four discussion
channels (news, forum, reddit, irc), stored on disk as JSON Lines with one
document object per line. IRC utterances have no headline, so their title
is empty and the message text is the body.
"""

import json
from dataclasses import dataclass, field
from datetime import date, datetime

from .errors import ParseError, ValidationError

CHANNELS = ("news", "forum", "reddit", "irc")

_FIELDS = ("id", "channel", "source", "timestamp", "title", "body", "author")


@dataclass(frozen=True)
class Document:
    """One item of channel discourse.

    Either title or body may be empty, not both. IRC messages use an empty
    title. timestamp is the publication day.
    """

    id: str
    channel: str
    source: str
    timestamp: date
    title: str
    body: str
    author: str

    def __post_init__(self):
        if not self.id:
            raise ValidationError("document id must be non-empty")
        if self.channel not in CHANNELS:
            raise ValidationError(
                f"unknown channel {self.channel!r} for document {self.id}"
            )
        if not self.title and not self.body:
            raise ValidationError(
                f"document {self.id} has neither title nor body"
            )


@dataclass
class Corpus:
    """Documents ordered by timestamp (stable for equal days)."""

    documents: list = field(default_factory=list)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def date_span(self):
        if not self.documents:
            raise ValidationError("empty corpus has no date span")
        days = [d.timestamp for d in self.documents]
        return min(days), max(days)


def _parse_timestamp(raw, lineno):
    try:
        return datetime.strptime(raw, "%Y-%m-%d").date()
    except (TypeError, ValueError):
        raise ParseError(
            f"line {lineno}: bad timestamp {raw!r}, expected YYYY-MM-DD"
        ) from None


def load_documents(path):
    """Read a JSONL corpus file.

    Raises ParseError naming the offending line for malformed JSON, missing
    fields, or bad timestamps, and ValidationError for duplicate ids.
    Documents are returned sorted by timestamp, preserving file order
    within a day.
    """
    docs = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {lineno}: invalid JSON: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise ParseError(f"line {lineno}: expected a JSON object")
            missing = [k for k in _FIELDS if k not in obj]
            if missing:
                raise ParseError(
                    f"line {lineno}: missing fields: {', '.join(missing)}"
                )
            doc = Document(
                id=str(obj["id"]),
                channel=obj["channel"],
                source=obj["source"],
                timestamp=_parse_timestamp(obj["timestamp"], lineno),
                title=obj["title"],
                body=obj["body"],
                author=obj["author"],
            )
            if doc.id in seen:
                raise ValidationError(f"line {lineno}: duplicate document id {doc.id!r}")
            seen.add(doc.id)
            docs.append(doc)
    docs.sort(key=lambda d: d.timestamp)
    return Corpus(docs)


def write_documents(corpus, path):
    """Write a corpus back to JSONL. Inverse of load_documents: loading the
    produced file and writing it again yields identical bytes."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for doc in corpus:
            obj = {
                "id": doc.id,
                "channel": doc.channel,
                "source": doc.source,
                "timestamp": doc.timestamp.isoformat(),
                "title": doc.title,
                "body": doc.body,
                "author": doc.author,
            }
            fh.write(json.dumps(obj, ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def summarize(doc, limit=500):
    """Classification text for a document: the title plus the first `limit`
    characters of the body, separated by one space. Counts are in Unicode
    code points, so multi-byte characters are never split."""
    if limit < 0:
        raise ValueError("limit must be non-negative")
    head = doc.body[:limit]
    if doc.title and head:
        return doc.title + " " + head
    return doc.title or head


def filter_date_range(corpus, start, end):
    """Documents with start <= timestamp <= end, order preserved."""
    if start > end:
        raise ValueError(f"start {start} is after end {end}")
    kept = [d for d in corpus if start <= d.timestamp <= end]
    return Corpus(kept)
