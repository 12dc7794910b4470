"""From raw crowd ratings to one training label per document.

Every document is rated by several workers on a five-point scale
(very negative -2 .. very positive +2). Two aggregation schemes turn
those ratings into a single label, and they do not always agree.
"""

import tempfile
from pathlib import Path

from discourse_signal.annotation import (
    AnnotationSet,
    build_training_set,
    distribution_report,
    majority_distribution_table,
    majority_vote,
    mean_label,
    read_annotations,
)
from discourse_signal.corpus import load_documents
from discourse_signal.synthetic import generate

# A single document where the two schemes split. Majority voting first
# collapses -2 to -1 and +2 to +1, then counts: one vote each for
# negative, neutral (x2 counts as the plurality) and positive, so the
# tie-free winner is neutral. The mean of the raw ratings is -0.4,
# whose sign says negative.
ratings = AnnotationSet("doc-1", (-2, -1, 0, 0, 1))
print("ratings:", ratings.ratings)
print("majority vote:", majority_vote(ratings).value)
inferred = mean_label(ratings)
print(f"mean label:    {inferred.value} (mean {inferred.mean_score:+.1f})")

# On a whole corpus the disagreement shows up as different class
# balances. The synthetic fixture plants known word polarity, so the
# label split is roughly even.
with tempfile.TemporaryDirectory() as tmp:
    info = generate(Path(tmp), seed=11, days=90, annotated_days=30)
    corpus = load_documents(info["corpus"])
    anns = read_annotations(info["annotations"])
    print(f"\n{len(corpus)} documents, {len(anns)} of them annotated")

    for method in ("majority", "mean"):
        ts = build_training_set(corpus, anns, method=method)
        pos_pct, neg_pct = ts.balance()
        print(f"{method:>8}: {len(ts.pairs)} binary pairs, "
              f"{pos_pct:.1f}% positive / {neg_pct:.1f}% negative")

    # Rating distribution per source, plus how active the workers were.
    report = distribution_report(anns, {d.id: d.source for d in corpus})
    print()
    print(report.to_text())

    # The same ratings bucketed by each document's modal raw rating.
    _, _, text = majority_distribution_table(anns)
    print()
    print(text)
