"""Binary sentiment classifiers over n-gram features.

Two Naive Bayes variants and a logistic regression, all operating on the
sparse matrices produced by the features module.

Multinomial NB uses Laplace-smoothed gram frequencies,

    P(g | c) = (count(g, c) + alpha) / (total(c) + alpha * |V|),

and scores a document by the sum of log probabilities (log space avoids
underflow on long texts). Bernoulli NB models per-document gram presence,

    P(g | c) = (docs(g, c) + alpha) / (docs(c) + 2 * alpha),

and a prediction also charges every vocabulary gram that is absent with
log(1 - P(g | c)), so repeated grams change nothing.

Logistic regression maximizes the mean per-document log-likelihood, with an
optional L2 penalty (l2 / 2n) * ||w||^2 on the non-intercept weights, by
full-batch gradient ascent from zero weights. With zero iterations allowed
the model predicts 0.5 everywhere. Probability ties at 0.5 resolve to
positive, as do exact NB posterior ties.
"""

import math
from dataclasses import dataclass

import numpy as np

from .annotation import NEGATIVE, POSITIVE
from .errors import NumericError, ParseError, SchemaError, ValidationError
from .features import (FeatureOptions, build_vocabulary, gram_to_str,
                       str_to_gram, tfidf_transform, vectorize_corpus,
                       vocabulary_hash)
from .tables import csv_text

CLASSES = (NEGATIVE, POSITIVE)

NB_VARIANTS = ("multinomial", "bernoulli")


@dataclass(frozen=True)
class ClassifierSpec:
    """Choice of classifier plus hyperparameters, as configured in a run."""

    kind: str = "multinomial_nb"
    alpha: float = 1.0
    learning_rate: float = 0.1
    max_iter: int = 10000
    tol: float = 1e-6
    l2: float = 1e-4

    def __post_init__(self):
        if self.kind not in ("multinomial_nb", "bernoulli_nb", "logistic"):
            raise ValueError(f"unknown classifier kind {self.kind!r}")


def _as_binary(y):
    y = list(y)
    bad = sorted({l for l in y if l not in CLASSES})
    if bad:
        raise ValidationError(f"labels outside positive/negative: {bad}")
    arr = np.array([1.0 if l == POSITIVE else 0.0 for l in y])
    if len(arr) == 0:
        raise ValidationError("no training examples")
    if arr.min() == arr.max():
        raise ValidationError("training data contains a single class")
    return arr


@dataclass
class NBModel:
    variant: str
    class_log_prior: np.ndarray        # [negative, positive]
    feature_log_prob: np.ndarray       # shape (2, |V|)
    alpha: float
    vocabulary: object = None
    absent_log_prob: np.ndarray = None  # bernoulli only, log(1 - P(g|c))


def train_nb(fm, y, variant="multinomial", alpha=1.0, vocabulary=None):
    if variant not in NB_VARIANTS:
        raise ValueError(f"unknown NB variant {variant!r}")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    y01 = _as_binary(y)
    if fm.rows != len(y01):
        raise ValidationError(
            f"{fm.rows} feature rows but {len(y01)} labels"
        )
    X = fm.matrix
    masks = [y01 == 0.0, y01 == 1.0]
    priors = np.array([m.sum() / len(y01) for m in masks])
    v = fm.cols
    log_prob = np.empty((2, v))
    absent = None
    if variant == "multinomial":
        for c, mask in enumerate(masks):
            counts = np.asarray(X[mask].sum(axis=0)).ravel()
            total = counts.sum()
            log_prob[c] = np.log(counts + alpha) - math.log(total + alpha * v)
    else:
        presence = X.copy()
        presence.data = np.ones_like(presence.data)
        for c, mask in enumerate(masks):
            doc_counts = np.asarray(presence[mask].sum(axis=0)).ravel()
            n_docs = int(mask.sum())
            log_prob[c] = np.log(doc_counts + alpha) - math.log(n_docs + 2 * alpha)
        # derived from exp(log_prob) so that a dumped and reloaded model
        # reproduces scores bit for bit
        absent = np.log1p(-np.exp(log_prob))
    return NBModel(
        variant=variant,
        class_log_prior=np.log(priors),
        feature_log_prob=log_prob,
        alpha=alpha,
        vocabulary=vocabulary,
        absent_log_prob=absent,
    )


def _nb_scores_dense(model, cols, vals):
    scores = model.class_log_prior.copy()
    if model.variant == "multinomial":
        for c in range(2):
            scores[c] += float(np.dot(vals, model.feature_log_prob[c, cols]))
    else:
        scores = scores + model.absent_log_prob.sum(axis=1)
        for c in range(2):
            delta = model.feature_log_prob[c, cols] - model.absent_log_prob[c, cols]
            scores[c] += float(delta.sum())
    return scores


def predict_nb(model, x):
    """Classify one sparse count vector ({column: count}).

    Returns (label, log posterior per class, unnormalized). An empty vector
    falls back to the class priors.
    """
    cols = np.fromiter(x.keys(), dtype=np.int64, count=len(x))
    vals = np.fromiter(x.values(), dtype=np.float64, count=len(x))
    scores = _nb_scores_dense(model, cols, vals)
    label = POSITIVE if scores[1] >= scores[0] else NEGATIVE
    return label, {NEGATIVE: float(scores[0]), POSITIVE: float(scores[1])}


def predict_nb_matrix(model, fm):
    """Vectorized predict_nb over a FeatureMatrix; same decisions."""
    X = fm.matrix
    if model.variant == "multinomial":
        scores = X @ model.feature_log_prob.T + model.class_log_prior
    else:
        presence = X.copy()
        presence.data = np.ones_like(presence.data)
        delta = (model.feature_log_prob - model.absent_log_prob).T
        scores = presence @ delta
        scores = scores + model.class_log_prior + model.absent_log_prob.sum(axis=1)
    scores = np.asarray(scores)
    return np.where(scores[:, 1] >= scores[:, 0], POSITIVE, NEGATIVE)


@dataclass
class LRModel:
    weights: np.ndarray
    intercept: float
    l2: float
    iterations: int
    final_grad_norm: float
    vocabulary: object = None


def lr_objective(params, fm, y01, l2):
    """Penalized mean log-likelihood and its gradient.

    params[0] is the intercept, the rest are gram weights. The penalty
    excludes the intercept. Exposed so tests can check the gradient against
    finite differences.
    """
    X = fm.matrix
    n = X.shape[0]
    w = params[1:]
    z = params[0] + X @ w
    # log sigma(z) = -log(1 + e^-z), stable on both tails
    loglik = float(np.sum(y01 * z - np.logaddexp(0.0, z))) / n
    value = loglik - (l2 / (2.0 * n)) * float(w @ w)
    p = 1.0 / (1.0 + np.exp(-z))
    resid = y01 - p
    grad = np.empty_like(params)
    grad[0] = resid.sum() / n
    grad[1:] = (X.T @ resid - l2 * w) / n
    return value, grad


def train_lr(fm, y, learning_rate=0.1, max_iter=10000, tol=1e-6, l2=1e-4,
             vocabulary=None):
    if learning_rate <= 0:
        raise ValueError("learning_rate must be positive")
    if max_iter < 0:
        raise ValueError("max_iter must be non-negative")
    if l2 < 0:
        raise ValueError("l2 must be non-negative")
    y01 = _as_binary(y)
    if fm.rows != len(y01):
        raise ValidationError(f"{fm.rows} feature rows but {len(y01)} labels")
    params = np.zeros(fm.cols + 1)
    grad_norm = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        value, grad = lr_objective(params, fm, y01, l2)
        if not np.isfinite(value) or not np.all(np.isfinite(grad)):
            raise NumericError(f"non-finite objective at iteration {it}")
        grad_norm = float(np.max(np.abs(grad)))
        if grad_norm < tol:
            it -= 1
            break
        params = params + learning_rate * grad
    if max_iter == 0:
        grad_norm = float(np.max(np.abs(lr_objective(params, fm, y01, l2)[1])))
        it = 0
    return LRModel(
        weights=params[1:],
        intercept=float(params[0]),
        l2=l2,
        iterations=it,
        final_grad_norm=grad_norm,
        vocabulary=vocabulary,
    )


def predict_lr(model, x):
    """Classify one sparse vector; returns (label, probability of positive).
    Probability exactly 0.5 counts as positive."""
    z = model.intercept
    for col, val in x.items():
        z += model.weights[col] * val
    prob = 1.0 / (1.0 + math.exp(-z)) if abs(z) < 700 else (z > 0) * 1.0
    label = POSITIVE if prob >= 0.5 else NEGATIVE
    return label, prob


def predict_lr_matrix(model, fm):
    z = model.intercept + fm.matrix @ model.weights
    return np.where(z >= 0.0, POSITIVE, NEGATIVE)


def train_from_spec(fm, y, spec, vocabulary=None):
    if spec.kind == "multinomial_nb":
        return train_nb(fm, y, "multinomial", spec.alpha, vocabulary)
    if spec.kind == "bernoulli_nb":
        return train_nb(fm, y, "bernoulli", spec.alpha, vocabulary)
    return train_lr(fm, y, spec.learning_rate, spec.max_iter, spec.tol,
                    spec.l2, vocabulary)


def predict_matrix(model, fm):
    if isinstance(model, NBModel):
        return predict_nb_matrix(model, fm)
    return predict_lr_matrix(model, fm)


@dataclass
class ConfusionMatrix:
    """Counts with positive as the target class: tp and fn partition the
    truly positive documents, fp and tn the truly negative ones."""

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn

    def add(self, other):
        return ConfusionMatrix(
            self.tp + other.tp, self.fp + other.fp,
            self.fn + other.fn, self.tn + other.tn,
        )


def confusion_from_predictions(y_true, y_pred):
    cm = ConfusionMatrix()
    for t, p in zip(y_true, y_pred):
        if t == POSITIVE:
            if p == POSITIVE:
                cm.tp += 1
            else:
                cm.fn += 1
        else:
            if p == POSITIVE:
                cm.fp += 1
            else:
                cm.tn += 1
    return cm


@dataclass
class EvalReport:
    precision: float
    recall: float
    f1: float
    accuracy: float
    fold_accuracies: tuple | None = None
    confusion: ConfusionMatrix | None = None

    @property
    def mean_fold_accuracy(self):
        if not self.fold_accuracies:
            return None
        return float(np.mean(self.fold_accuracies))


def metrics(cm):
    """Precision, recall, F-measure and accuracy from a confusion matrix.

    Empty denominators yield 0.0 rather than an error; an entirely empty
    matrix is refused.
    """
    if cm.total == 0:
        raise ValueError("empty confusion matrix")
    if min(cm.tp, cm.fp, cm.fn, cm.tn) < 0:
        raise ValueError("confusion counts must be non-negative")
    precision = cm.tp / (cm.tp + cm.fp) if (cm.tp + cm.fp) else 0.0
    recall = cm.tp / (cm.tp + cm.fn) if (cm.tp + cm.fn) else 0.0
    f1 = 2 * precision * recall / (precision + recall) if (precision + recall) else 0.0
    accuracy = (cm.tp + cm.tn) / cm.total
    return EvalReport(precision, recall, f1, accuracy, confusion=cm)


def k_fold_cv(texts, labels, k=10, spec=None, seed=0, options=None):
    """Shuffled k-fold cross-validation with per-fold vocabularies.

    The shuffle is drawn once from the seed; folds are contiguous slices of
    it, so sizes differ by at most one. Each fold's vocabulary, and the IDF
    weights when TF-IDF is on, come from that fold's training split alone.
    Returns pooled metrics plus the per-fold accuracy list.
    """
    spec = spec or ClassifierSpec()
    options = options or FeatureOptions()
    texts = list(texts)
    labels = list(labels)
    n = len(texts)
    if len(labels) != n:
        raise ValidationError(f"{n} texts but {len(labels)} labels")
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} examples")
    _as_binary(labels)
    perm = np.random.default_rng(seed).permutation(n)
    folds = np.array_split(perm, k)
    fold_acc = []
    pooled = ConfusionMatrix()
    for i, test_idx in enumerate(folds):
        train_idx = np.concatenate([f for j, f in enumerate(folds) if j != i])
        tr_texts = [texts[j] for j in train_idx]
        tr_labels = [labels[j] for j in train_idx]
        te_texts = [texts[j] for j in test_idx]
        te_labels = [labels[j] for j in test_idx]
        vocab = build_vocabulary(tr_texts, options.ngram_range, options.min_df)
        Xtr = vectorize_corpus(tr_texts, vocab)
        Xte = vectorize_corpus(te_texts, vocab)
        if options.tfidf:
            Xtr = tfidf_transform(Xtr, vocab)
            Xte = tfidf_transform(Xte, vocab)
        model = train_from_spec(Xtr, tr_labels, spec, vocab)
        preds = predict_matrix(model, Xte)
        cm = confusion_from_predictions(te_labels, preds)
        fold_acc.append((cm.tp + cm.tn) / cm.total)
        pooled = pooled.add(cm)
    report = metrics(pooled)
    report.fold_accuracies = tuple(fold_acc)
    return report


def train_model(texts, labels, spec=None, options=None):
    """Build a vocabulary on the full set and train one model on it."""
    spec = spec or ClassifierSpec()
    options = options or FeatureOptions()
    vocab = build_vocabulary(texts, options.ngram_range, options.min_df)
    X = vectorize_corpus(texts, vocab)
    if options.tfidf:
        X = tfidf_transform(X, vocab)
    model = train_from_spec(X, labels, spec, vocab)
    return model, vocab


# Model files: a short self-describing header, then one tab-separated line
# per gram. Floats are written with repr() and parse back exactly.

_MAGIC = "discourse-signal-model 1"


def save_model(model, path):
    if model.vocabulary is None:
        raise ValidationError("model has no vocabulary attached")
    grams = model.vocabulary.grams()
    lines = [_MAGIC]
    if isinstance(model, NBModel):
        lines.append(f"kind {model.variant}_nb")
        lines.append(f"vocab_hash {vocabulary_hash(model.vocabulary)}")
        lines.append(f"alpha {float(model.alpha)!r}")
        lines.append(f"prior {CLASSES[0]} {float(model.class_log_prior[0])!r}")
        lines.append(f"prior {CLASSES[1]} {float(model.class_log_prior[1])!r}")
        lines.append("params gram log_prob_negative log_prob_positive")
        for i, gram in enumerate(grams):
            lines.append(
                f"{gram_to_str(gram)}\t{float(model.feature_log_prob[0, i])!r}"
                f"\t{float(model.feature_log_prob[1, i])!r}"
            )
    else:
        lines.append("kind logistic")
        lines.append(f"vocab_hash {vocabulary_hash(model.vocabulary)}")
        lines.append(f"l2 {float(model.l2)!r}")
        lines.append(f"iterations {model.iterations}")
        lines.append(f"final_grad_norm {float(model.final_grad_norm)!r}")
        lines.append(f"intercept {float(model.intercept)!r}")
        lines.append("params gram weight")
        for i, gram in enumerate(grams):
            lines.append(f"{gram_to_str(gram)}\t{float(model.weights[i])!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path, vocabulary):
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != _MAGIC:
        raise SchemaError(f"not a model file: {path}")
    head = {}
    body_at = None
    for i, line in enumerate(lines[1:], start=1):
        if line.startswith("params "):
            body_at = i + 1
            break
        key, _, rest = line.partition(" ")
        if key == "prior":
            cls, _, val = rest.partition(" ")
            head[f"prior_{cls}"] = val
        else:
            head[key] = rest
    if body_at is None:
        raise ParseError("model file has no params section")
    if head.get("vocab_hash") != vocabulary_hash(vocabulary):
        raise ValidationError(
            "model was trained with a different vocabulary (hash mismatch)"
        )
    kind = head.get("kind", "")
    rows = []
    for lineno, line in enumerate(lines[body_at:], start=body_at + 1):
        if not line:
            continue
        parts = line.split("\t")
        gram = str_to_gram(parts[0])
        if gram not in vocabulary.index:
            raise ParseError(f"line {lineno}: gram not in vocabulary: {parts[0]!r}")
        rows.append((vocabulary.index[gram], [float(p) for p in parts[1:]]))
    if len(rows) != len(vocabulary):
        raise ParseError(
            f"model has {len(rows)} gram lines, vocabulary has {len(vocabulary)}"
        )
    rows.sort(key=lambda r: r[0])
    if kind in ("multinomial_nb", "bernoulli_nb"):
        log_prob = np.array([vals for _, vals in rows]).T
        variant = kind.removesuffix("_nb")
        absent = np.log1p(-np.exp(log_prob)) if variant == "bernoulli" else None
        return NBModel(
            variant=variant,
            class_log_prior=np.array(
                [float(head["prior_negative"]), float(head["prior_positive"])]
            ),
            feature_log_prob=log_prob,
            alpha=float(head["alpha"]),
            vocabulary=vocabulary,
            absent_log_prob=absent,
        )
    if kind == "logistic":
        return LRModel(
            weights=np.array([vals[0] for _, vals in rows]),
            intercept=float(head["intercept"]),
            l2=float(head["l2"]),
            iterations=int(head["iterations"]),
            final_grad_norm=float(head["final_grad_norm"]),
            vocabulary=vocabulary,
        )
    raise ParseError(f"unknown model kind {kind!r}")


# Confusion matrices on disk use the two-by-two layout with true class as
# the row: [[tp, fn], [fp, tn]].

def confusion_csv(cm):
    return csv_text(
        ["real\\pred", "P", "N"],
        [["P", cm.tp, cm.fn], ["N", cm.fp, cm.tn]],
    )


def write_confusion_csv(cm, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(confusion_csv(cm))


def read_confusion_csv(path):
    import csv as _csv

    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(_csv.reader(fh))
    if len(rows) != 3 or rows[0] != ["real\\pred", "P", "N"]:
        raise SchemaError(f"not a confusion matrix file: {path}")
    try:
        return ConfusionMatrix(
            tp=int(rows[1][1]), fn=int(rows[1][2]),
            fp=int(rows[2][1]), tn=int(rows[2][2]),
        )
    except (ValueError, IndexError):
        raise ParseError(f"bad confusion matrix values in {path}") from None
