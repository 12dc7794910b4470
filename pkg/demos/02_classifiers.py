"""Training and evaluating the bundled text classifiers.

Documents become sparse n-gram count vectors; three classifier kinds
share that representation: multinomial and Bernoulli Naive Bayes and a
logistic regression trained by gradient ascent. Evaluation is 10-fold
cross validation with a pooled confusion matrix.
"""

import math
import tempfile
from pathlib import Path

from discourse_signal.annotation import NEGATIVE, POSITIVE, build_training_set, read_annotations
from discourse_signal.classify import (
    ClassifierSpec,
    confusion_csv,
    k_fold_cv,
    predict_nb,
    train_nb,
)
from discourse_signal.corpus import load_documents
from discourse_signal.features import FeatureOptions, build_vocabulary, vectorize, vectorize_corpus
from discourse_signal.synthetic import generate

# A corpus small enough to verify every smoothed probability by hand.
# With Laplace alpha=1 the positive class saw 2 "good" tokens out of 2,
# so P(good | positive) = (2+1)/(2+2) = 3/4.
texts = ["good good", "bad"]
labels = [POSITIVE, NEGATIVE]
vocab = build_vocabulary(texts)
fm = vectorize_corpus(texts, vocab)
model = train_nb(fm, labels, "multinomial")
p_good = math.exp(model.feature_log_prob[1, vocab.index[("good",)]])
print(f"P(good | positive) = {p_good:.4f}")
label, scores = predict_nb(model, vectorize("good", vocab))
print(f'"good" classified {label}, log scores {scores["positive"]:.4f} '
      f'vs {scores["negative"]:.4f}\n')

# Cross validation on the synthetic corpus. Each fold rebuilds the
# vocabulary from its own training split so no test document leaks
# into the feature space. The planted word pools are almost perfectly
# separable, so scores land near 1; the mechanics are the point here.
with tempfile.TemporaryDirectory() as tmp:
    info = generate(Path(tmp), seed=11, days=120, annotated_days=40)
    corpus = load_documents(info["corpus"])
    anns = read_annotations(info["annotations"])
    ts = build_training_set(corpus, anns, method="mean")
    texts = [t for t, _ in ts.pairs]
    labels = [l for _, l in ts.pairs]
    print(f"training set: {len(texts)} documents")

    for kind in ("multinomial_nb", "bernoulli_nb", "logistic"):
        spec = ClassifierSpec(kind=kind)
        rep = k_fold_cv(texts, labels, k=10, spec=spec, seed=11)
        print(f"{kind:>15}: precision {rep.precision:.3f}  "
              f"recall {rep.recall:.3f}  f1 {rep.f1:.3f}  "
              f"accuracy {rep.accuracy:.3f}")

    # TF-IDF reweighting and bigrams change the feature space, not the
    # training loop.
    opts = FeatureOptions(ngram_range=(1, 2), tfidf=True)
    rep = k_fold_cv(texts, labels, k=10,
                    spec=ClassifierSpec(kind="logistic"), seed=11,
                    options=opts)
    print(f"logistic, tf-idf bigrams: accuracy {rep.accuracy:.3f}")

    print("\npooled confusion matrix (rows are the true class):")
    print(confusion_csv(rep.confusion))
