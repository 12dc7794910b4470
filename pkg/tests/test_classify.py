import math

import numpy as np
import pytest

from discourse_signal.annotation import NEGATIVE, POSITIVE
from discourse_signal.classify import (
    ClassifierSpec,
    ConfusionMatrix,
    confusion_csv,
    confusion_from_predictions,
    k_fold_cv,
    load_model,
    lr_objective,
    metrics,
    predict_lr,
    predict_matrix,
    predict_nb,
    predict_nb_matrix,
    read_confusion_csv,
    save_model,
    train_from_spec,
    train_lr,
    train_model,
    train_nb,
    write_confusion_csv,
)
from discourse_signal.errors import NumericError, SchemaError, ValidationError
from discourse_signal.features import (
    FeatureOptions,
    build_vocabulary,
    tfidf_transform,
    vectorize,
    vectorize_corpus,
)

# Two-word corpus small enough to check every smoothed probability by hand:
# positive text is "good good", negative is "bad".
HAND_TEXTS = ["good good", "bad"]
HAND_LABELS = [POSITIVE, NEGATIVE]


def _hand_fixture():
    vocab = build_vocabulary(HAND_TEXTS)
    fm = vectorize_corpus(HAND_TEXTS, vocab)
    return vocab, fm


def test_multinomial_probabilities_by_hand():
    vocab, fm = _hand_fixture()
    model = train_nb(fm, HAND_LABELS, "multinomial")
    good = vocab.index[("good",)]
    bad = vocab.index[("bad",)]
    # (count + 1) / (total + |V|), positive class saw two tokens
    assert math.exp(model.feature_log_prob[1, good]) == pytest.approx(3 / 4, abs=1e-15)
    assert math.exp(model.feature_log_prob[1, bad]) == pytest.approx(1 / 4, abs=1e-15)
    assert math.exp(model.feature_log_prob[0, good]) == pytest.approx(1 / 3, abs=1e-15)
    assert math.exp(model.feature_log_prob[0, bad]) == pytest.approx(2 / 3, abs=1e-15)
    assert list(np.exp(model.class_log_prior)) == pytest.approx([0.5, 0.5])


def test_multinomial_posterior_by_hand():
    vocab, fm = _hand_fixture()
    model = train_nb(fm, HAND_LABELS, "multinomial")
    label, scores = predict_nb(model, vectorize("good", vocab))
    assert label == POSITIVE
    num = math.exp(scores[POSITIVE])
    den = num + math.exp(scores[NEGATIVE])
    assert num / den == pytest.approx(9 / 13, abs=1e-12)


def test_multinomial_repeats_change_the_score():
    vocab, fm = _hand_fixture()
    model = train_nb(fm, HAND_LABELS, "multinomial")
    _, once = predict_nb(model, vectorize("good", vocab))
    _, twice = predict_nb(model, vectorize("good good", vocab))
    assert twice[POSITIVE] < once[POSITIVE]


def test_bernoulli_probabilities_by_hand():
    vocab, fm = _hand_fixture()
    model = train_nb(fm, HAND_LABELS, "bernoulli")
    good = vocab.index[("good",)]
    # (docs + 1) / (docs_in_class + 2), one document per class
    assert math.exp(model.feature_log_prob[1, good]) == pytest.approx(2 / 3, abs=1e-15)
    assert math.exp(model.feature_log_prob[0, good]) == pytest.approx(1 / 3, abs=1e-15)
    label, scores = predict_nb(model, vectorize("good", vocab))
    assert label == POSITIVE
    num = math.exp(scores[POSITIVE])
    den = num + math.exp(scores[NEGATIVE])
    # (2/3)^2 vs (1/3)^2 after the absent-gram terms
    assert num / den == pytest.approx(4 / 5, abs=1e-12)


def test_bernoulli_ignores_repeats():
    vocab, fm = _hand_fixture()
    model = train_nb(fm, HAND_LABELS, "bernoulli")
    _, once = predict_nb(model, vectorize("good", vocab))
    _, thrice = predict_nb(model, vectorize("good good good", vocab))
    assert once == thrice


def test_nb_empty_vector_falls_back_to_priors():
    texts = ["good", "good", "bad"]
    labels = [POSITIVE, POSITIVE, NEGATIVE]
    vocab = build_vocabulary(texts)
    model = train_nb(vectorize_corpus(texts, vocab), labels, "multinomial")
    label, scores = predict_nb(model, {})
    assert label == POSITIVE
    assert scores[POSITIVE] == pytest.approx(math.log(2 / 3))


def test_nb_tie_goes_positive():
    texts = ["same", "same"]
    labels = [POSITIVE, NEGATIVE]
    vocab = build_vocabulary(texts)
    fm = vectorize_corpus(texts, vocab)
    model = train_nb(fm, labels, "multinomial")
    label, scores = predict_nb(model, vectorize("same", vocab))
    assert scores[POSITIVE] == scores[NEGATIVE]
    assert label == POSITIVE


def test_nb_matrix_predictions_match_single():
    rng = np.random.default_rng(3)
    words = ["up", "down", "flat", "coin", "rally", "crash"]
    texts = [" ".join(rng.choice(words, size=rng.integers(1, 8))) for _ in range(40)]
    labels = [POSITIVE if rng.random() < 0.5 else NEGATIVE for _ in range(40)]
    if POSITIVE not in labels:
        labels[0] = POSITIVE
    if NEGATIVE not in labels:
        labels[1] = NEGATIVE
    vocab = build_vocabulary(texts)
    fm = vectorize_corpus(texts, vocab)
    for variant in ("multinomial", "bernoulli"):
        model = train_nb(fm, labels, variant)
        batch = predict_nb_matrix(model, fm)
        single = [predict_nb(model, vectorize(t, vocab))[0] for t in texts]
        assert list(batch) == single


def test_nb_input_validation():
    vocab, fm = _hand_fixture()
    with pytest.raises(ValueError):
        train_nb(fm, HAND_LABELS, "gaussian")
    with pytest.raises(ValueError):
        train_nb(fm, HAND_LABELS, alpha=0.0)
    with pytest.raises(ValidationError):
        train_nb(fm, [POSITIVE, "meh"])
    with pytest.raises(ValidationError):
        train_nb(fm, [POSITIVE, POSITIVE])
    with pytest.raises(ValidationError):
        train_nb(fm, [POSITIVE])


def _numeric_grad(params, fm, y01, l2, eps=1e-6):
    grad = np.zeros_like(params)
    for i in range(len(params)):
        hi = params.copy()
        lo = params.copy()
        hi[i] += eps
        lo[i] -= eps
        grad[i] = (lr_objective(hi, fm, y01, l2)[0]
                   - lr_objective(lo, fm, y01, l2)[0]) / (2 * eps)
    return grad


def test_lr_gradient_matches_finite_differences():
    rng = np.random.default_rng(7)
    texts = ["up up coin", "down coin", "up rally", "down crash crash"]
    labels = [POSITIVE, NEGATIVE, POSITIVE, NEGATIVE]
    vocab = build_vocabulary(texts)
    fm = vectorize_corpus(texts, vocab)
    y01 = np.array([1.0, 0.0, 1.0, 0.0])
    for _ in range(5):
        params = rng.normal(scale=0.5, size=fm.cols + 1)
        _, analytic = lr_objective(params, fm, y01, l2=0.3)
        numeric = _numeric_grad(params, fm, y01, l2=0.3)
        denom = max(np.max(np.abs(numeric)), 1e-12)
        assert np.max(np.abs(analytic - numeric)) / denom < 1e-6


def test_lr_zero_iterations_predicts_half():
    vocab, fm = _hand_fixture()
    model = train_lr(fm, HAND_LABELS, max_iter=0)
    label, prob = predict_lr(model, vectorize("good", vocab))
    assert prob == 0.5
    assert label == POSITIVE
    assert model.iterations == 0


def test_lr_learns_separable_data():
    texts = ["good great", "good", "bad awful", "bad"]
    labels = [POSITIVE, POSITIVE, NEGATIVE, NEGATIVE]
    vocab = build_vocabulary(texts)
    fm = vectorize_corpus(texts, vocab)
    model = train_lr(fm, labels, max_iter=2000)
    for text, want in zip(texts, labels):
        got, prob = predict_lr(model, vectorize(text, vocab))
        assert got == want
    assert model.final_grad_norm < 0.05


def test_lr_penalty_shrinks_weights():
    texts = ["good great", "good", "bad awful", "bad"]
    labels = [POSITIVE, POSITIVE, NEGATIVE, NEGATIVE]
    vocab = build_vocabulary(texts)
    fm = vectorize_corpus(texts, vocab)
    free = train_lr(fm, labels, max_iter=3000, l2=0.0)
    tight = train_lr(fm, labels, max_iter=3000, l2=5.0)
    assert np.linalg.norm(tight.weights) < np.linalg.norm(free.weights)


def test_lr_overflow_guard():
    vocab, fm = _hand_fixture()
    model = train_lr(fm, HAND_LABELS, max_iter=0)
    model.intercept = 800.0
    label, prob = predict_lr(model, {})
    assert (label, prob) == (POSITIVE, 1.0)
    model.intercept = -800.0
    label, prob = predict_lr(model, {})
    assert (label, prob) == (NEGATIVE, 0.0)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_lr_diverging_rate_raises():
    texts = ["good great", "good", "bad awful", "bad"]
    labels = [POSITIVE, POSITIVE, NEGATIVE, NEGATIVE]
    vocab = build_vocabulary(texts)
    fm = vectorize_corpus(texts, vocab)
    with pytest.raises(NumericError) as exc:
        train_lr(fm, labels, learning_rate=1e6, max_iter=5000)
    assert "iteration" in str(exc.value)


def test_lr_parameter_validation():
    vocab, fm = _hand_fixture()
    with pytest.raises(ValueError):
        train_lr(fm, HAND_LABELS, learning_rate=0.0)
    with pytest.raises(ValueError):
        train_lr(fm, HAND_LABELS, max_iter=-1)
    with pytest.raises(ValueError):
        train_lr(fm, HAND_LABELS, l2=-0.1)


def test_classifier_spec_validates_kind():
    with pytest.raises(ValueError):
        ClassifierSpec(kind="svm")


def test_train_from_spec_dispatch():
    vocab, fm = _hand_fixture()
    nb = train_from_spec(fm, HAND_LABELS, ClassifierSpec(kind="bernoulli_nb"))
    assert nb.variant == "bernoulli"
    lr = train_from_spec(fm, HAND_LABELS, ClassifierSpec(kind="logistic", max_iter=5))
    assert lr.iterations <= 5
    assert list(predict_matrix(nb, fm)) == [POSITIVE, NEGATIVE]


# Counts mirroring a published single-fold news evaluation; the derived
# ratios are the unit-level oracle here.
TABLE_CM = ConfusionMatrix(tp=422, fn=127, fp=87, tn=237)


def test_metrics_exact_fractions():
    rep = metrics(TABLE_CM)
    assert rep.precision == pytest.approx(422 / 509, abs=1e-15)
    assert rep.recall == pytest.approx(422 / 549, abs=1e-15)
    assert rep.accuracy == pytest.approx(659 / 873, abs=1e-15)
    p, r = rep.precision, rep.recall
    assert rep.f1 == pytest.approx(2 * p * r / (p + r), abs=1e-15)


def test_metrics_zero_denominators():
    rep = metrics(ConfusionMatrix(tp=0, fp=0, fn=0, tn=5))
    assert (rep.precision, rep.recall, rep.f1) == (0.0, 0.0, 0.0)
    assert rep.accuracy == 1.0
    with pytest.raises(ValueError):
        metrics(ConfusionMatrix())
    with pytest.raises(ValueError):
        metrics(ConfusionMatrix(tp=-1, tn=2))


def test_confusion_from_predictions():
    y_true = [POSITIVE, POSITIVE, NEGATIVE, NEGATIVE, POSITIVE]
    y_pred = [POSITIVE, NEGATIVE, POSITIVE, NEGATIVE, POSITIVE]
    cm = confusion_from_predictions(y_true, y_pred)
    assert (cm.tp, cm.fn, cm.fp, cm.tn) == (2, 1, 1, 1)
    assert cm.total == 5


def test_confusion_csv_layout_and_round_trip(tmp_path):
    text = confusion_csv(TABLE_CM)
    assert text == "real\\pred,P,N\nP,422,127\nN,87,237\n"
    path = tmp_path / "cm.csv"
    write_confusion_csv(TABLE_CM, path)
    assert read_confusion_csv(path) == TABLE_CM


def test_read_confusion_rejects_other_files(tmp_path):
    path = tmp_path / "cm.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(SchemaError):
        read_confusion_csv(path)


def _cv_corpus(n=30, seed=5):
    rng = np.random.default_rng(seed)
    pos_words = ["up", "gain", "rally", "moon"]
    neg_words = ["down", "loss", "crash", "dump"]
    texts, labels = [], []
    for i in range(n):
        pool = pos_words if i % 2 == 0 else neg_words
        texts.append(" ".join(rng.choice(pool, size=4)) + " coin")
        labels.append(POSITIVE if i % 2 == 0 else NEGATIVE)
    return texts, labels


def test_k_fold_cv_is_deterministic():
    texts, labels = _cv_corpus()
    a = k_fold_cv(texts, labels, k=5, seed=3)
    b = k_fold_cv(texts, labels, k=5, seed=3)
    assert a.fold_accuracies == b.fold_accuracies
    assert a.confusion == b.confusion


def test_k_fold_cv_covers_every_document_once():
    texts, labels = _cv_corpus(n=23)
    rep = k_fold_cv(texts, labels, k=4, seed=1)
    assert len(rep.fold_accuracies) == 4
    assert rep.confusion.total == 23


def test_k_fold_cv_matches_manual_replication():
    """Replicates the fold arithmetic independently, per-fold vocabularies
    included, and demands the identical pooled matrix."""
    texts, labels = _cv_corpus(n=12, seed=9)
    k, seed = 3, 4
    rep = k_fold_cv(texts, labels, k=k, seed=seed)

    perm = np.random.default_rng(seed).permutation(len(texts))
    folds = np.array_split(perm, k)
    pooled = ConfusionMatrix()
    for i, test_idx in enumerate(folds):
        train_idx = np.concatenate([f for j, f in enumerate(folds) if j != i])
        tr = [texts[j] for j in train_idx]
        trl = [labels[j] for j in train_idx]
        vocab = build_vocabulary(tr)
        model = train_nb(vectorize_corpus(tr, vocab), trl, "multinomial")
        for j in test_idx:
            pred = predict_nb(model, vectorize(texts[j], vocab))[0]
            pooled = pooled.add(confusion_from_predictions([labels[j]], [pred]))
    assert rep.confusion == pooled


def test_k_fold_cv_learns_separable_corpus():
    texts, labels = _cv_corpus(n=40)
    rep = k_fold_cv(texts, labels, k=10, seed=0)
    assert rep.accuracy == 1.0
    assert rep.mean_fold_accuracy == 1.0


def test_k_fold_cv_tfidf_path():
    texts, labels = _cv_corpus(n=20)
    opts = FeatureOptions(tfidf=True)
    rep = k_fold_cv(texts, labels, k=4, seed=2, options=opts)
    assert rep.accuracy > 0.8


def test_k_fold_cv_validation():
    texts, labels = _cv_corpus(n=6)
    with pytest.raises(ValueError):
        k_fold_cv(texts, labels, k=1)
    with pytest.raises(ValueError):
        k_fold_cv(texts, labels, k=7)
    with pytest.raises(ValidationError):
        k_fold_cv(texts, labels[:-1], k=2)


@pytest.mark.parametrize("kind", ["multinomial_nb", "bernoulli_nb", "logistic"])
def test_model_save_load_round_trip(tmp_path, kind):
    texts, labels = _cv_corpus(n=16, seed=2)
    spec = ClassifierSpec(kind=kind, max_iter=300)
    model, vocab = train_model(texts, labels, spec)
    path = tmp_path / "model.txt"
    save_model(model, path)
    loaded = load_model(path, vocab)
    fm = vectorize_corpus(texts, vocab)
    if kind == "logistic":
        assert loaded.intercept == model.intercept
        assert list(loaded.weights) == list(model.weights)
    else:
        assert list(loaded.class_log_prior) == list(model.class_log_prior)
        assert loaded.feature_log_prob.tolist() == model.feature_log_prob.tolist()
    assert list(predict_matrix(loaded, fm)) == list(predict_matrix(model, fm))


def test_load_model_rejects_vocabulary_mismatch(tmp_path):
    texts, labels = _cv_corpus(n=10)
    model, vocab = train_model(texts, labels)
    path = tmp_path / "model.txt"
    save_model(model, path)
    other = build_vocabulary(["something else entirely"])
    with pytest.raises(ValidationError) as exc:
        load_model(path, other)
    assert "vocabulary" in str(exc.value)


def test_load_model_rejects_foreign_files(tmp_path):
    path = tmp_path / "model.txt"
    path.write_text("just some text\n")
    vocab = build_vocabulary(["a"])
    with pytest.raises(SchemaError):
        load_model(path, vocab)


def test_train_model_tfidf_round_trip(tmp_path):
    texts, labels = _cv_corpus(n=12, seed=8)
    opts = FeatureOptions(tfidf=True)
    model, vocab = train_model(texts, labels, ClassifierSpec(kind="logistic",
                                                             max_iter=200), opts)
    fm = tfidf_transform(vectorize_corpus(texts, vocab), vocab)
    path = tmp_path / "model.txt"
    save_model(model, path)
    loaded = load_model(path, vocab)
    assert list(predict_matrix(loaded, fm)) == list(predict_matrix(model, fm))
