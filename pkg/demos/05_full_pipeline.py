"""The five-stage command line pipeline, end to end.

Each subcommand reads the same JSON config and the artifacts of the
previous stage: aggregate turns raw ratings into labels, train-eval
fits and cross-validates the configured classifiers, classify labels
the whole corpus, analyze builds the sentiment series and runs the
correlation and causality sweeps, and report re-renders every table.
Runs are deterministic: same config and seed, same bytes.
"""

import io
import json
import tempfile
from pathlib import Path

from discourse_signal.cli import main
from discourse_signal.synthetic import generate

with tempfile.TemporaryDirectory() as tmp:
    run_dir = Path(tmp)
    generate(run_dir, seed=11, days=150, annotated_days=40)
    config = str(run_dir / "run.json")
    print("config:")
    print(json.dumps(json.loads(Path(config).read_text()), indent=2)[:400])
    print()

    for command in ("aggregate", "train-eval", "classify", "analyze", "report"):
        out = io.StringIO()
        code = main([command, "--config", config], stdout=out)
        first = out.getvalue().splitlines()[0] if out.getvalue() else ""
        print(f"$ discourse-signal {command:<10} -> exit {code}   {first}")
    print()

    out_dir = run_dir / "out"
    artifacts = sorted(p.name for p in out_dir.iterdir())
    print(f"{len(artifacts)} artifacts in {out_dir.name}/:")
    for name in artifacts:
        print(f"  {name}")
    print()

    print((out_dir / "eval.txt").read_text())
    print((out_dir / "granger_summary_news.txt").read_text())

    # Byte-for-byte reproducibility of the whole tree.
    before = {p.name: p.read_bytes() for p in out_dir.iterdir()}
    for command in ("aggregate", "train-eval", "classify", "analyze", "report"):
        main([command, "--config", config], stdout=io.StringIO())
    after = {p.name: p.read_bytes() for p in out_dir.iterdir()}
    print(f"rerun identical: {before == after}")
