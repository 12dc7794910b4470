"""N-gram feature extraction.

Text is lowercased and split on Unicode whitespace; punctuation is stripped
from token edges and tokens that were punctuation-only disappear. Stop words
are kept: on short noisy posts function words carry signal, and the
classifiers smooth anyway. Grams are tuples of consecutive tokens.

A Vocabulary fixes the gram-to-column mapping (lexicographic order, so any
corpus permutation builds the identical vocabulary) and remembers document
frequencies for TF-IDF: w = tf * ln(N / df), natural log. Grams present in
every document get weight zero and vanish from the sparse matrix.
"""

import csv
import hashlib
import io
import unicodedata
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import ParseError, SchemaError, ValidationError


def _is_punct(ch):
    return unicodedata.category(ch).startswith("P")


def tokenize(text):
    tokens = []
    for raw in text.lower().split():
        i, j = 0, len(raw)
        while i < j and _is_punct(raw[i]):
            i += 1
        while j > i and _is_punct(raw[j - 1]):
            j -= 1
        if j > i:
            tokens.append(raw[i:j])
    return tokens


def ngrams(tokens, n):
    """Consecutive n-token windows as tuples; empty when the text is shorter
    than n."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def _grams_in_range(tokens, ngram_range):
    lo, hi = ngram_range
    out = []
    for n in range(lo, hi + 1):
        out.extend(ngrams(tokens, n))
    return out


@dataclass(frozen=True)
class FeatureOptions:
    """Feature configuration carried through training and the CLI."""

    ngram_range: tuple = (1, 1)
    min_df: int = 1
    tfidf: bool = False


@dataclass
class Vocabulary:
    """Immutable gram-to-column mapping with document frequencies."""

    index: dict
    document_frequency: np.ndarray
    corpus_size: int
    ngram_range: tuple

    def __len__(self):
        return len(self.index)

    def __contains__(self, gram):
        return gram in self.index

    def grams(self):
        """Grams in column order."""
        out = [None] * len(self.index)
        for gram, i in self.index.items():
            out[i] = gram
        return out


def _check_range(ngram_range):
    lo, hi = ngram_range
    if lo < 1 or hi < lo:
        raise ValueError(f"bad ngram range {ngram_range!r}")
    return lo, hi


def build_vocabulary(texts, ngram_range=(1, 1), min_df=1):
    """Collect every gram meeting the document-frequency floor.

    Columns are assigned in lexicographic gram order, so the result does not
    depend on text order.
    """
    _check_range(ngram_range)
    if min_df < 1:
        raise ValueError("min_df must be at least 1")
    texts = list(texts)
    if not texts:
        raise ValidationError("cannot build a vocabulary from zero texts")
    df = {}
    for text in texts:
        for gram in set(_grams_in_range(tokenize(text), ngram_range)):
            df[gram] = df.get(gram, 0) + 1
    kept = sorted(g for g, c in df.items() if c >= min_df)
    index = {g: i for i, g in enumerate(kept)}
    freqs = np.array([df[g] for g in kept], dtype=np.int64)
    return Vocabulary(index, freqs, len(texts), tuple(ngram_range))


def vectorize(text, vocab):
    """Sparse count vector for one text: {column: count}, in-vocabulary
    grams only."""
    counts = {}
    for gram in _grams_in_range(tokenize(text), vocab.ngram_range):
        col = vocab.index.get(gram)
        if col is not None:
            counts[col] = counts.get(col, 0) + 1
    return counts


@dataclass
class FeatureMatrix:
    """Sparse document-by-gram matrix.

    weighted distinguishes raw counts from TF-IDF values; no explicit zeros
    are stored.
    """

    matrix: sparse.csr_matrix
    weighted: bool = False

    @property
    def rows(self):
        return self.matrix.shape[0]

    @property
    def cols(self):
        return self.matrix.shape[1]

    def entries(self):
        """Iterate stored (row, col, value) triples."""
        coo = self.matrix.tocoo()
        return list(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))

    def row_dict(self, i):
        start, end = self.matrix.indptr[i], self.matrix.indptr[i + 1]
        return dict(
            zip(self.matrix.indices[start:end].tolist(),
                self.matrix.data[start:end].tolist())
        )


def vectorize_corpus(texts, vocab):
    rows, cols, data = [], [], []
    n = 0
    for r, text in enumerate(texts):
        n += 1
        for col, count in vectorize(text, vocab).items():
            rows.append(r)
            cols.append(col)
            data.append(count)
    mat = sparse.csr_matrix(
        (np.array(data, dtype=np.float64), (rows, cols)),
        shape=(n, len(vocab)),
    )
    mat.eliminate_zeros()
    return FeatureMatrix(mat, weighted=False)


def tfidf_transform(fm, vocab):
    """Reweight a count matrix to tf * ln(N / df).

    Raises ValueError if the matrix is already weighted or does not match
    the vocabulary width.
    """
    if fm.weighted:
        raise ValueError("matrix is already TF-IDF weighted")
    if fm.cols != len(vocab):
        raise ValueError(
            f"matrix has {fm.cols} columns but vocabulary has {len(vocab)}"
        )
    with np.errstate(divide="ignore"):
        idf = np.log(vocab.corpus_size / vocab.document_frequency.astype(np.float64))
    weighted = fm.matrix.multiply(idf).tocsr()
    weighted.eliminate_zeros()
    return FeatureMatrix(weighted, weighted=True)


def gram_to_str(gram):
    return " ".join(gram)


def str_to_gram(text):
    return tuple(text.split(" "))


def vocabulary_csv(vocab):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["gram", "index", "df"])
    for gram in vocab.grams():
        writer.writerow([gram_to_str(gram), vocab.index[gram],
                         int(vocab.document_frequency[vocab.index[gram]])])
    buf.write(f"# corpus_size={vocab.corpus_size} "
              f"ngram_range={vocab.ngram_range[0]}-{vocab.ngram_range[1]}\n")
    return buf.getvalue()


def save_vocabulary(vocab, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(vocabulary_csv(vocab))


def load_vocabulary(path):
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "gram,index,df":
        raise SchemaError("vocabulary file must start with header gram,index,df")
    meta = None
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("#"):
            meta = line
            continue
        row = next(csv.reader([line]))
        if len(row) != 3:
            raise ParseError(f"line {lineno}: expected gram,index,df")
        try:
            entries.append((str_to_gram(row[0]), int(row[1]), int(row[2])))
        except ValueError:
            raise ParseError(f"line {lineno}: bad index or df") from None
    if meta is None:
        raise SchemaError("vocabulary file is missing its trailer comment")
    parts = dict(p.split("=") for p in meta[1:].split())
    corpus_size = int(parts["corpus_size"])
    lo, hi = parts["ngram_range"].split("-")
    entries.sort(key=lambda e: e[1])
    if [i for _, i, _ in entries] != list(range(len(entries))):
        raise ParseError("vocabulary indices are not contiguous from zero")
    index = {g: i for g, i, _ in entries}
    df = np.array([d for _, _, d in entries], dtype=np.int64)
    return Vocabulary(index, df, corpus_size, (int(lo), int(hi)))


def vocabulary_hash(vocab):
    """Stable fingerprint used to bind saved models to their vocabulary."""
    return hashlib.sha256(vocabulary_csv(vocab).encode("utf-8")).hexdigest()
