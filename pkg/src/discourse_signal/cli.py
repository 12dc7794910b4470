"""Command line pipeline: discourse-signal <subcommand> --config run.json.

Subcommands chain through artifacts in the configured output directory:

    aggregate    crowd ratings -> inferred labels + distribution tables
    train-eval   labeled summaries -> cross-validated metrics + model files
    classify     model -> per-document labels for the whole corpus
    analyze      labels + market CSV -> correlation and causality tables
    report       re-render text tables from the CSV artifacts

Flags override config values, which override defaults. All randomness
(fold shuffling) descends from the single configured seed, outputs carry
no timestamps, and every table is written with fixed formatting, so a rerun
with the same config and seed reproduces every artifact byte for byte.

Exit codes: 0 success, 1 usage or input validation, 2 runtime failure.
"""

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import econometrics as ec
from .annotation import (build_training_set, distribution_report,
                         majority_distribution_table, majority_vote,
                         mean_label, read_annotations)
from .classify import (ClassifierSpec, LRModel, k_fold_cv, load_model,
                       metrics, predict_lr, predict_nb, read_confusion_csv,
                       save_model, train_model, write_confusion_csv)
from .corpus import CHANNELS, load_documents, summarize
from .errors import (DiscourseSignalError, NumericError, ParseError,
                     RangeError, SchemaError, ValidationError)
from .features import (FeatureOptions, load_vocabulary, save_vocabulary,
                       vectorize)
from .market import load_market_csv
from .tables import csv_text, read_csv_rows, render_aligned, write_text

_USAGE_ERRORS = (ValidationError, SchemaError, ParseError, RangeError,
                 ValueError, FileNotFoundError, KeyError)


@dataclass
class RunConfig:
    """Effective settings for one pipeline run."""

    corpus: dict = field(default_factory=dict)
    annotations: dict = field(default_factory=dict)
    market_csv: str | None = None
    label_method: str = "mean"
    features: FeatureOptions = field(default_factory=FeatureOptions)
    classifiers: list = field(default_factory=lambda: [ClassifierSpec()])
    folds: int = 10
    seed: int = 0
    lags: tuple = (1, 2, 3, 4, 5)
    out_dir: str = "out"
    allow_market_gaps: bool = False
    granger_metrics: tuple = ("pct_price", "pct_volume")
    model: str | None = None
    base_dir: Path = field(default_factory=Path)

    def validate(self):
        if self.label_method not in ("mean", "majority"):
            raise ValidationError(
                f"label_method must be mean or majority, got {self.label_method!r}"
            )
        if self.folds < 2:
            raise ValidationError("folds must be at least 2")
        if not self.lags or any(l not in (1, 2, 3, 4, 5) for l in self.lags):
            raise ValidationError("lags must be a non-empty subset of 1..5")
        if not self.classifiers:
            raise ValidationError("at least one classifier must be configured")
        for ch in list(self.corpus) + list(self.annotations):
            if ch not in CHANNELS:
                raise ValidationError(f"unknown channel {ch!r}")
        for m in self.granger_metrics:
            if m not in ("pct_price", "pct_volume", "abs_price", "abs_volume"):
                raise ValidationError(f"unknown granger metric {m!r}")
        if self.model is not None:
            kinds = [c.kind for c in self.classifiers]
            if self.model not in kinds:
                raise ValidationError(
                    f"model {self.model!r} is not among configured classifiers {kinds}"
                )

    def path(self, rel):
        p = Path(rel)
        return p if p.is_absolute() else self.base_dir / p

    def out_path(self, name=""):
        out = self.path(self.out_dir)
        return out / name if name else out

    def model_kind(self):
        return self.model or self.classifiers[0].kind

    def effective_dict(self):
        return {
            "corpus": dict(sorted(self.corpus.items())),
            "annotations": dict(sorted(self.annotations.items())),
            "market_csv": self.market_csv,
            "label_method": self.label_method,
            "features": {
                "ngram_range": list(self.features.ngram_range),
                "min_df": self.features.min_df,
                "tfidf": self.features.tfidf,
            },
            "classifiers": [
                {"kind": c.kind, "alpha": c.alpha,
                 "learning_rate": c.learning_rate, "max_iter": c.max_iter,
                 "tol": c.tol, "l2": c.l2}
                for c in self.classifiers
            ],
            "folds": self.folds,
            "seed": self.seed,
            "lags": list(self.lags),
            "out_dir": self.out_dir,
            "allow_market_gaps": self.allow_market_gaps,
            "granger_metrics": list(self.granger_metrics),
            "model": self.model,
        }

    def config_hash(self):
        canon = json.dumps(self.effective_dict(), sort_keys=True,
                           separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _spec_from_dict(raw):
    known = {"kind", "alpha", "learning_rate", "max_iter", "tol", "l2"}
    extra = set(raw) - known
    if extra:
        raise ValidationError(f"unknown classifier fields: {sorted(extra)}")
    return ClassifierSpec(**raw)


def load_config(path):
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"config {path}: invalid JSON: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ParseError(f"config {path}: expected a JSON object")
    cfg = RunConfig(base_dir=path.parent)
    feat = raw.get("features", {})
    cfg.features = FeatureOptions(
        ngram_range=tuple(feat.get("ngram_range", (1, 1))),
        min_df=int(feat.get("min_df", 1)),
        tfidf=bool(feat.get("tfidf", False)),
    )
    if "classifiers" in raw:
        cfg.classifiers = [_spec_from_dict(c) for c in raw["classifiers"]]
    cfg.corpus = dict(raw.get("corpus", {}))
    cfg.annotations = dict(raw.get("annotations", {}))
    cfg.market_csv = raw.get("market_csv")
    cfg.label_method = raw.get("label_method", cfg.label_method)
    cfg.folds = int(raw.get("folds", cfg.folds))
    cfg.seed = int(raw.get("seed", cfg.seed))
    cfg.lags = tuple(raw.get("lags", cfg.lags))
    cfg.out_dir = raw.get("out_dir", cfg.out_dir)
    cfg.allow_market_gaps = bool(raw.get("allow_market_gaps", False))
    cfg.granger_metrics = tuple(raw.get("granger_metrics",
                                        cfg.granger_metrics))
    cfg.model = raw.get("model")
    known = {"corpus", "annotations", "market_csv", "label_method",
             "features", "classifiers", "folds", "seed", "lags", "out_dir",
             "allow_market_gaps", "granger_metrics", "model"}
    extra = set(raw) - known
    if extra:
        raise ValidationError(f"unknown config fields: {sorted(extra)}")
    return cfg


def _write_manifest(cfg, command, outputs):
    manifest = {
        "command": command,
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
        "outputs": sorted(str(o) for o in outputs),
    }
    path = cfg.out_path(f"manifest_{command}.json")
    write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _load_channel(cfg, channel):
    if channel not in cfg.corpus:
        raise ValidationError(f"config has no corpus for channel {channel!r}")
    return load_documents(cfg.path(cfg.corpus[channel]))


def _labeler(method):
    return mean_label if method == "mean" else majority_vote


def cmd_aggregate(cfg, stdout):
    if not cfg.annotations:
        raise ValidationError("config has no annotations section")
    outputs = []
    cfg.out_path().mkdir(parents=True, exist_ok=True)
    for channel in sorted(cfg.annotations):
        corpus = _load_channel(cfg, channel)
        anns = read_annotations(cfg.path(cfg.annotations[channel]))
        if not anns:
            raise ValidationError(f"no annotations for channel {channel}")
        by_id = {d.id: d for d in corpus}
        missing = sorted(a.doc_id for a in anns if a.doc_id not in by_id)
        if missing:
            raise ValidationError(
                "annotations reference unknown documents: " + ", ".join(missing)
            )
        label_rows = []
        for ann in anns:
            maj = majority_vote(ann)
            mean = mean_label(ann)
            label_rows.append([ann.doc_id, "majority", maj.value, ""])
            label_rows.append([ann.doc_id, "mean", mean.value,
                               repr(mean.mean_score)])
        labels_path = cfg.out_path(f"labels_{channel}.csv")
        lines = ["doc_id,method,value,mean_score"]
        lines += [",".join(r) for r in label_rows]
        write_text(labels_path, "\n".join(lines) + "\n")
        outputs.append(labels_path.name)

        report = distribution_report(
            anns, {d.id: d.source for d in corpus}
        )
        dist_csv = cfg.out_path(f"distribution_{channel}.csv")
        write_text(dist_csv, report.to_csv())
        dist_txt = cfg.out_path(f"distribution_{channel}.txt")
        write_text(dist_txt, report.to_text() + "\n")
        outputs += [dist_csv.name, dist_txt.name]

        counts, maj_csv, maj_txt = majority_distribution_table(anns)
        p = cfg.out_path(f"majority_distribution_{channel}.csv")
        write_text(p, maj_csv)
        outputs.append(p.name)
        p = cfg.out_path(f"majority_distribution_{channel}.txt")
        write_text(p, maj_txt)
        outputs.append(p.name)

        ts = build_training_set(corpus, anns, cfg.label_method)
        pos_pct, neg_pct = ts.balance()
        stdout.write(
            f"{channel}: {len(anns)} annotated documents, "
            f"{ts.positive_count} positive / {ts.negative_count} negative "
            f"({pos_pct:.2f}%/{neg_pct:.2f}%) via {cfg.label_method}\n"
        )
    manifest = _write_manifest(cfg, "aggregate", outputs)
    stdout.write(f"wrote {len(outputs)} artifacts and {manifest.name}\n")


def cmd_train_eval(cfg, stdout):
    if not cfg.annotations:
        raise ValidationError("config has no annotations section")
    outputs = []
    cfg.out_path().mkdir(parents=True, exist_ok=True)
    eval_rows = []
    balance_lines = []
    for channel in sorted(cfg.annotations):
        corpus = _load_channel(cfg, channel)
        anns = read_annotations(cfg.path(cfg.annotations[channel]))
        if not anns:
            raise ValidationError(f"no annotations for channel {channel}")
        ts = build_training_set(corpus, anns, cfg.label_method)
        texts = [t for t, _ in ts.pairs]
        labels = [l for _, l in ts.pairs]
        pos_pct, neg_pct = ts.balance()
        balance_lines.append(
            f"{channel}: {ts.positive_count} positive / {ts.negative_count} "
            f"negative ({pos_pct:.2f}%/{neg_pct:.2f}%), method {cfg.label_method}"
        )
        vocab_saved = False
        for spec in cfg.classifiers:
            report = k_fold_cv(texts, labels, k=cfg.folds, spec=spec,
                               seed=cfg.seed, options=cfg.features)
            model, vocab = train_model(texts, labels, spec, cfg.features)
            if not vocab_saved:
                vpath = cfg.out_path(f"vocab_{channel}.csv")
                save_vocabulary(vocab, vpath)
                outputs.append(vpath.name)
                vocab_saved = True
            mpath = cfg.out_path(f"model_{channel}_{spec.kind}.txt")
            save_model(model, mpath)
            outputs.append(mpath.name)
            cpath = cfg.out_path(f"confusion_{channel}_{spec.kind}.csv")
            write_confusion_csv(report.confusion, cpath)
            outputs.append(cpath.name)
            eval_rows.append([
                channel, spec.kind,
                f"{report.precision:.4f}", f"{report.recall:.4f}",
                f"{report.f1:.4f}", f"{report.accuracy:.4f}",
                f"{report.mean_fold_accuracy:.4f}",
            ])
    header = ["channel", "classifier", "precision", "recall", "f1",
              "pooled_accuracy", "mean_fold_accuracy"]
    csv_lines = [",".join(header)] + [",".join(r) for r in eval_rows]
    eval_csv = cfg.out_path("eval.csv")
    write_text(eval_csv, "\n".join(csv_lines) + "\n")
    outputs.append(eval_csv.name)
    text = "\n".join(balance_lines) + "\n\n" + render_aligned(header, eval_rows)
    eval_txt = cfg.out_path("eval.txt")
    write_text(eval_txt, text)
    outputs.append(eval_txt.name)
    stdout.write(text)
    manifest = _write_manifest(cfg, "train-eval", outputs)
    stdout.write(f"wrote {len(outputs)} artifacts and {manifest.name}\n")


def _load_trained(cfg, channel):
    kind = cfg.model_kind()
    vpath = cfg.out_path(f"vocab_{channel}.csv")
    mpath = cfg.out_path(f"model_{channel}_{kind}.txt")
    for p in (vpath, mpath):
        if not p.exists():
            raise ValidationError(
                f"missing artifact {p.name} in {cfg.out_path()}; "
                "run train-eval first"
            )
    vocab = load_vocabulary(vpath)
    model = load_model(mpath, vocab)
    return model, vocab


def _classify_channel(cfg, channel):
    corpus = _load_channel(cfg, channel)
    model, vocab = _load_trained(cfg, channel)
    rows = []
    pairs = []
    if isinstance(model, LRModel):
        def score_one(vec):
            label, prob = predict_lr(model, vec)
            return label, prob
    else:
        def score_one(vec):
            label, posts = predict_nb(model, vec)
            return label, posts["positive"] - posts["negative"]
    for doc in corpus:
        vec = vectorize(summarize(doc), vocab)
        label, score = score_one(vec)
        rows.append([doc.id, doc.timestamp.isoformat(), label, repr(score)])
        pairs.append((doc, label))
    return corpus, rows, pairs


def _write_classified(cfg, channel, rows):
    path = cfg.out_path(f"classified_{channel}.csv")
    lines = ["doc_id,date,label,score"] + [",".join(r) for r in rows]
    write_text(path, "\n".join(lines) + "\n")
    return path


def cmd_classify(cfg, stdout):
    if not cfg.corpus:
        raise ValidationError("config has no corpus section")
    outputs = []
    cfg.out_path().mkdir(parents=True, exist_ok=True)
    for channel in sorted(cfg.corpus):
        _, rows, _ = _classify_channel(cfg, channel)
        path = _write_classified(cfg, channel, rows)
        outputs.append(path.name)
        pos = sum(1 for r in rows if r[2] == "positive")
        stdout.write(
            f"{channel}: classified {len(rows)} documents, "
            f"{pos} positive / {len(rows) - pos} negative\n"
        )
    manifest = _write_manifest(cfg, "classify", outputs)
    stdout.write(f"wrote {len(outputs)} artifacts and {manifest.name}\n")


def cmd_analyze(cfg, stdout):
    if not cfg.corpus:
        raise ValidationError("config has no corpus section")
    if not cfg.market_csv:
        raise ValidationError("config has no market_csv")
    market = load_market_csv(cfg.path(cfg.market_csv),
                             allow_gaps=cfg.allow_market_gaps)
    outputs = []
    cfg.out_path().mkdir(parents=True, exist_ok=True)
    for channel in sorted(cfg.corpus):
        _, rows, pairs = _classify_channel(cfg, channel)
        outputs.append(_write_classified(cfg, channel, rows).name)
        series = ec.daily_sentiment_series(pairs, channel=channel)
        s_first, s_last = series.span()
        m_first, m_last = market.dates[0], market.dates[-1]
        if m_first > s_first or m_last < s_last:
            raise ValidationError(
                f"market data {m_first}..{m_last} does not cover the "
                f"sentiment span {s_first}..{s_last}"
            )
        table = ec.lagged_correlation(series, market, lags=cfg.lags)
        p = cfg.out_path(f"correlation_{channel}.csv")
        write_text(p, table.to_csv())
        outputs.append(p.name)
        p = cfg.out_path(f"correlation_{channel}.txt")
        write_text(p, table.to_text())
        outputs.append(p.name)

        sweep = ec.granger_sweep(series, market, lags=cfg.lags,
                                 metric_kinds=cfg.granger_metrics)
        p = cfg.out_path(f"granger_{channel}.csv")
        write_text(p, sweep.to_csv())
        outputs.append(p.name)
        p = cfg.out_path(f"granger_summary_{channel}.txt")
        write_text(p, sweep.summary_text())
        outputs.append(p.name)
        p = cfg.out_path(f"granger_full_{channel}.txt")
        write_text(p, sweep.full_text())
        outputs.append(p.name)

        stat_rows = []
        for name in sorted(sweep.stationarity):
            res = sweep.stationarity[name]
            if isinstance(res, str):
                stat_rows.append([name, "", "", "", res])
            else:
                stat_rows.append([
                    name, repr(res.statistic), repr(res.p),
                    str(res.lags_used), str(res.stationary_at_5pct),
                ])
        p = cfg.out_path(f"stationarity_{channel}.csv")
        write_text(p, csv_text(
            ["series", "statistic", "p", "lags_used", "stationary_at_5pct"],
            stat_rows,
        ))
        outputs.append(p.name)
        stdout.write(f"{channel}: {len(series)} days, "
                     f"{series.dates[0]}..{series.dates[-1]}\n")
        stdout.write(sweep.summary_text())
    manifest = _write_manifest(cfg, "analyze", outputs)
    stdout.write(f"wrote {len(outputs)} artifacts and {manifest.name}\n")


def _rebuild_correlation(csv_path):
    header, rows = read_csv_rows(csv_path)
    if header != ["sentiment", "metric", "lag", "r", "p", "n"]:
        raise SchemaError(f"not a correlation table: {csv_path}")
    cells = {}
    kinds, mets, lags = [], [], []
    for sk, metric, lag, r, p, n in rows:
        lag = int(lag)
        for seq, val in ((kinds, sk), (mets, metric), (lags, lag)):
            if val not in seq:
                seq.append(val)
        key = (sk, metric, lag)
        if r == "":
            cells[key] = "undefined in source csv"
        else:
            cells[key] = ec.CorrelationResult(
                r=float(r), p=float(p), n=int(n), lag=lag,
                sentiment_kind=sk, metric_kind=metric,
            )
    return ec.CorrelationTable(
        channel="", lags=tuple(lags), sentiment_kinds=tuple(kinds),
        metric_kinds=tuple(mets), cells=cells,
    )


def _rebuild_sweep(csv_path):
    header, rows = read_csv_rows(csv_path)
    expect = ["sentiment", "metric", "lag", "direction", "f", "p",
              "n_obs", "rss_restricted", "rss_unrestricted"]
    if header != expect:
        raise SchemaError(f"not a causality table: {csv_path}")
    halves = {}
    kinds, mets, lags = [], [], []
    for sk, metric, lag, direction, f, p, n, rr, ru in rows:
        lag = int(lag)
        for seq, val in ((kinds, sk), (mets, metric), (lags, lag)):
            if val not in seq:
                seq.append(val)
        key = (sk, metric, lag)
        if direction == "undefined":
            halves[key] = "undefined in source csv"
            continue
        res = ec.GrangerResult(
            direction="x->y" if direction == "sent->metric" else "y->x",
            lag=lag, f_statistic=float(f), p=float(p), n_obs=int(n),
            rss_restricted=float(rr), rss_unrestricted=float(ru),
        )
        halves.setdefault(key, []).append(res)
    cells = {}
    for key, val in halves.items():
        cells[key] = val if isinstance(val, str) else tuple(val)
    return ec.GrangerSweep(
        channel="", lags=tuple(lags), sentiment_kinds=tuple(kinds),
        metric_kinds=tuple(mets), cells=cells, stationarity={},
    )


def cmd_report(cfg, stdout, confusion=None):
    wrote = []
    if confusion:
        cm = read_confusion_csv(Path(confusion))
        rep = metrics(cm)
        stdout.write(render_aligned(
            ["precision", "recall", "f1", "accuracy"],
            [[f"{rep.precision:.4f}", f"{rep.recall:.4f}",
              f"{rep.f1:.4f}", f"{rep.accuracy:.4f}"]],
        ))
        return
    out = cfg.out_path()
    if not out.is_dir():
        raise ValidationError(f"output directory {out} does not exist")
    for csv_path in sorted(out.glob("correlation_*.csv")):
        table = _rebuild_correlation(csv_path)
        txt = csv_path.with_suffix(".txt")
        write_text(txt, table.to_text())
        wrote.append(txt.name)
    for csv_path in sorted(out.glob("granger_*.csv")):
        sweep = _rebuild_sweep(csv_path)
        channel = csv_path.stem.removeprefix("granger_")
        txt = out / f"granger_summary_{channel}.txt"
        write_text(txt, sweep.summary_text())
        wrote.append(txt.name)
        txt = out / f"granger_full_{channel}.txt"
        write_text(txt, sweep.full_text())
        wrote.append(txt.name)
    for csv_path in sorted(out.glob("confusion_*.csv")):
        rep = metrics(read_confusion_csv(csv_path))
        stdout.write(csv_path.name + "\n")
        stdout.write(render_aligned(
            ["precision", "recall", "f1", "accuracy"],
            [[f"{rep.precision:.4f}", f"{rep.recall:.4f}",
              f"{rep.f1:.4f}", f"{rep.accuracy:.4f}"]],
        ))
    if not wrote and not confusion:
        stdout.write("nothing to report\n")
        return
    stdout.write("re-rendered: " + ", ".join(wrote) + "\n")


class _Parser(argparse.ArgumentParser):
    # usage problems are exit code 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser():
    parser = _Parser(prog="discourse-signal",
                     description="sentiment-vs-market analysis pipeline")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("aggregate", "train-eval", "classify", "analyze", "report"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=(name != "report"),
                       help="path to the run config JSON")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", help="override the output directory")
        p.add_argument("--corpus", help="single corpus file, with --channel")
        p.add_argument("--channel", choices=CHANNELS,
                       help="channel of the --corpus file")
        p.add_argument("--allow-market-gaps", action="store_true",
                       help="accept market files with calendar gaps")
        if name == "report":
            p.add_argument("--confusion",
                           help="print metrics for one confusion CSV")
    return parser


_COMMANDS = {
    "aggregate": cmd_aggregate,
    "train-eval": cmd_train_eval,
    "classify": cmd_classify,
    "analyze": cmd_analyze,
}


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            cfg = load_config(args.config)
        elif args.command == "report" and args.confusion:
            cfg = RunConfig()
        else:
            parser.error("--config is required")
        if args.seed is not None:
            cfg.seed = args.seed
        if args.out is not None:
            cfg.out_dir = args.out
        if args.allow_market_gaps:
            cfg.allow_market_gaps = True
        if (args.corpus is None) != (args.channel is None):
            raise ValidationError("--corpus and --channel go together")
        if args.corpus is not None:
            cfg.corpus = {args.channel: args.corpus}
            cfg.annotations = {
                ch: p for ch, p in cfg.annotations.items() if ch == args.channel
            }
        cfg.validate()
        if args.command == "report":
            cmd_report(cfg, stdout, confusion=args.confusion)
        else:
            _COMMANDS[args.command](cfg, stdout)
    except _USAGE_ERRORS as exc:
        print(f"discourse-signal {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit:
        raise
    except (NumericError, DiscourseSignalError, ArithmeticError) as exc:
        print(f"discourse-signal {args.command}: runtime failure: {exc}",
              file=sys.stderr)
        return 2
    except Exception as exc:  # anything else is still a runtime failure
        print(f"discourse-signal {args.command}: runtime failure: "
              f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
