"""Synthetic, fully judged test corpora.

Each topic has a pool of documents with a hidden ideal order; relevance
grades decay with ideal rank. Every document also draws one Gaussian
offset ``g``. Run ``t`` sorts the pool by ``rank + t * noise * g`` plus a
small independent ``jitter``, so runs drift steadily away from the ideal
order: run 0 is near ideal and nearby runs resemble each other.
"""

from __future__ import annotations

import math
import random
from pathlib import Path

from .core import Judgments, RankedList
from .io import RunFile, render_run


def make_corpus(
    n_topics: int = 20,
    n_runs: int = 6,
    depth: int = 20,
    pool: int = 60,
    noise: float = 2.0,
    seed: int = 0,
    jitter: float = 0.5,
) -> tuple[dict[str, RunFile], Judgments]:
    """Return ``(runs by tag, qrels)`` with grade indices in ``{0, 1, 2}``."""
    rng = random.Random(seed)
    runs = {f"run{t:02d}": RunFile(f"run{t:02d}") for t in range(n_runs)}
    qrels: dict[tuple[str, str], int] = {}
    for n in range(1, n_topics + 1):
        topic = str(300 + n)
        docs = [f"T{topic}-D{i:03d}" for i in range(pool)]
        for r, doc in enumerate(docs):
            p = math.exp(-r / 8)
            u = rng.random()
            qrels[(topic, doc)] = 2 if u < p / 2 else 1 if u < p else 0
        g = [rng.gauss(0.0, 1.0) for _ in docs]
        for t, tag in enumerate(runs):
            keyed = sorted(
                (i + t * noise * g[i] + rng.gauss(0.0, jitter), doc) for i, doc in enumerate(docs)
            )
            runs[tag].topics[topic] = RankedList(topic, [doc for _, doc in keyed[:depth]])
    return runs, Judgments(qrels)


def write_corpus(directory: str | Path, runs: dict[str, RunFile], qrels: Judgments) -> None:
    directory = Path(directory)
    (directory / "runs").mkdir(parents=True, exist_ok=True)
    for tag, run in runs.items():
        (directory / "runs" / f"{tag}.run").write_text(render_run(run))
    lines = [f"{topic} 0 {doc} {grade}" for (topic, doc), grade in sorted(qrels.items())]
    (directory / "qrels.txt").write_text("\n".join(lines) + "\n")
