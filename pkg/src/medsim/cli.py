"""Command-line front end.

    medsim compare RUN_A RUN_B [--measure M] [--qrels Q --fraction F --seed N]
    medsim matrix RUN_DIR [--measure M]
    medsim sweep RUN [RUN ...] --qrels Q --fractions 0,0.25,0.75,1 --seed N
    medsim synth OUT_DIR [--topics 20 --runs 6 --seed 0]

All output is CSV (to ``--out`` or stdout). Work is split into one unit per
(topic, run pair) and merged in a fixed order, so ``--jobs`` never changes
the bytes written.
"""

from __future__ import annotations

import argparse
import logging
import math
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from .core import GradeScale, Judgments, RankedList, align, build_grade_scale, med
from .dotprod import NDCG, RBP, Precision
from .errors import MedError
from .io import parse_passage_run, parse_qrels, parse_run, write_matrix, write_table
from .medmap import MAP, TabuParams
from .mederr import ERR
from .medu import DEFAULT_LENGTH, med_u
from .rbo import RboParams, rbo

log = logging.getLogger("medsim")

MEASURES = ("precision", "ndcg", "rbp", "map", "err", "u", "rbo")
DEFAULT_K = {"precision": 10, "ndcg": 20, "map": 100}


@dataclass(frozen=True)
class MeasureConfig:
    measure: str = "ndcg"
    k: int | None = None
    psi: float = 0.9
    grades: int = 2
    rg: Fraction = Fraction(1)
    depth: int | None = None
    pmax: int = 5
    l: int = DEFAULT_LENGTH
    seed: int = 0

    @property
    def graded(self) -> bool:
        return self.measure in ("ndcg", "err")

    def scale(self) -> GradeScale:
        return build_grade_scale(self.grades) if self.graded else GradeScale.binary()

    def judgments(self, qrels: Judgments | None) -> Judgments | None:
        if qrels is None or self.graded:
            return qrels
        return qrels.clamped(1)

    def build(self):
        m = self.measure
        if m == "precision":
            return Precision(self.k or DEFAULT_K[m])
        if m == "ndcg":
            return NDCG(self.k or DEFAULT_K[m])
        if m == "map":
            return MAP(self.k or DEFAULT_K[m], TabuParams(seed=self.seed))
        if m == "rbp":
            return RBP(self.psi)
        if m == "err":
            return ERR(self.depth or 30, self.pmax)
        raise MedError(f"measure {m!r} has no ranked-list MED")

    def list_depth(self, a: RankedList, b: RankedList) -> int:
        measure = self.build()
        if measure.depth is not None:
            return measure.depth
        return self.depth or max(len(a), len(b), 1)


def topic_value(unit) -> tuple[float, str, float | None]:
    """Distance for one (topic, pair) unit: ``(value, direction, epsilon)``."""
    cfg, a, b, judgments = unit
    if cfg.measure == "u":
        out = med_u(a, b, cfg.l, cfg.rg)
        return float(out.value), out.direction, None
    if cfg.measure == "rbo":
        return float(rbo(a.docs, b.docs, RboParams(Fraction(str(cfg.psi)), cfg.depth))), "", None
    pair = align(a, b, cfg.list_depth(a, b), judgments, cfg.scale())
    out = med(pair, cfg.build())
    eps = None if out.epsilon is None else float(out.epsilon)
    return float(out.value), out.direction, eps


def actual_difference(unit) -> float:
    """``|S(A) - S(B)|`` with unjudged documents taken as non-relevant."""
    cfg, a, b, judgments = unit
    measure, scale = cfg.build(), cfg.scale()
    depth = cfg.list_depth(a, b)

    def relevance(ranked: RankedList):
        grades = [judgments.get((ranked.topic, doc), 0) for doc in ranked.docs[:depth]]
        vec = [scale.value(g) for g in grades]
        return vec + [Fraction(0)] * (depth - len(vec))

    return float(abs(measure.score(relevance(a), scale) - measure.score(relevance(b), scale)))


def _run_units(fn, units: list, jobs: int) -> list:
    if jobs <= 1 or len(units) < 2:
        return [fn(u) for u in units]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, units, chunksize=max(1, len(units) // (4 * jobs))))


def sample_judgments(qrels: Judgments, fractions, seed: int) -> dict[float, Judgments]:
    """Nested uniform samples: each fraction's sample contains every smaller one."""
    keys = sorted(qrels)
    random.Random(seed).shuffle(keys)
    out = {}
    for f in fractions:
        n = math.floor(f * len(keys) + 0.5)
        out[f] = qrels.subset(keys[:n])
    return out


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _load(path: Path, measure: str):
    text = path.read_text(encoding="utf-8")
    if measure == "u":
        return path.stem, parse_passage_run(text)
    run = parse_run(text)
    return run.tag or path.stem, run.topics


def _load_qrels(cfg: MeasureConfig, path: str | None) -> Judgments | None:
    if path is None:
        return None
    return parse_qrels(Path(path).read_text(encoding="utf-8"), build_grade_scale(cfg.grades))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_compare(args, cfg: MeasureConfig) -> int:
    _, topics_a = _load(Path(args.run_a), cfg.measure)
    _, topics_b = _load(Path(args.run_b), cfg.measure)
    common = sorted(set(topics_a) & set(topics_b))
    if not common:
        print("error: the runs share no topics", file=sys.stderr)
        return 2
    judgments = _load_qrels(cfg, args.qrels)
    if not 0 <= args.fraction <= 1:
        print("error: --fraction must lie in [0, 1]", file=sys.stderr)
        return 2
    if judgments is not None and args.fraction < 1:
        judgments = sample_judgments(judgments, [args.fraction], args.seed)[args.fraction]
    judgments = cfg.judgments(judgments)
    units = [(cfg, topics_a[t], topics_b[t], judgments) for t in common]
    results = _run_units(topic_value, units, args.jobs)
    header = ["topic", "value", "direction"] + (["epsilon"] if cfg.measure == "err" else [])
    rows = [[t, v, d] + ([e] if cfg.measure == "err" else []) for t, (v, d, e) in zip(common, results)]
    mean = math.fsum(v for v, _, _ in results) / len(results)
    rows.append(["mean", mean, ""] + ([""] if cfg.measure == "err" else []))
    _emit(write_table(header, rows), args.out)
    return 0


def _load_dir(directory: Path, measure: str) -> dict[str, dict]:
    runs = {}
    for path in sorted(p for p in directory.iterdir() if p.is_file()):
        try:
            tag, topics = _load(path, measure)
        except (MedError, UnicodeDecodeError) as exc:
            log.warning("skipping %s: %s", path, exc)
            continue
        if tag in runs:
            tag = path.stem
        runs[tag] = topics
    return runs


def _pair_means(runs: dict[str, dict], pairs, cfg, judgments, jobs, fn=topic_value):
    units, owners = [], []
    for x, y in pairs:
        for t in sorted(set(runs[x]) & set(runs[y])):
            units.append((cfg, runs[x][t], runs[y][t], judgments))
            owners.append((x, y))
    results = _run_units(fn, units, jobs)
    sums: dict[tuple[str, str], list[float]] = {p: [] for p in pairs}
    for owner, res in zip(owners, results):
        sums[owner].append(res[0] if isinstance(res, tuple) else res)
    return {p: (math.fsum(v) / len(v) if v else math.nan) for p, v in sums.items()}


def cmd_matrix(args, cfg: MeasureConfig) -> int:
    runs = _load_dir(Path(args.run_dir), cfg.measure)
    if len(runs) < 2:
        print("error: need at least two readable run files", file=sys.stderr)
        return 2
    judgments = cfg.judgments(_load_qrels(cfg, args.qrels))
    tags = sorted(runs)
    pairs = list(combinations(tags, 2))
    diag = [(t, t) for t in tags] if cfg.measure == "rbo" else []
    means = _pair_means(runs, pairs + diag, cfg, judgments, args.jobs)
    values = {}
    for x in tags:
        values[(x, x)] = means[(x, x)] if diag else 0.0
    for x, y in pairs:
        values[(x, y)] = values[(y, x)] = means[(x, y)]
    _emit(write_matrix(tags, values), args.out)
    return 0


def cmd_sweep(args, cfg: MeasureConfig) -> int:
    if cfg.measure in ("u", "rbo"):
        print(f"error: sweep does not support --measure {cfg.measure}", file=sys.stderr)
        return 2
    runs = {}
    for path in args.runs:
        tag, topics = _load(Path(path), cfg.measure)
        runs[tag if tag not in runs else Path(path).stem] = topics
    qrels = _load_qrels(cfg, args.qrels)
    fractions = sorted({float(f) for f in args.fractions.split(",")})
    if any(not 0 <= f <= 1 for f in fractions):
        print("error: fractions must lie in [0, 1]", file=sys.stderr)
        return 2
    samples = sample_judgments(qrels, fractions, args.seed)
    pairs = list(combinations(sorted(runs), 2))
    actual = _pair_means(runs, pairs, cfg, cfg.judgments(qrels), args.jobs, fn=actual_difference)
    rows = []
    for f in fractions:
        means = _pair_means(runs, pairs, cfg, cfg.judgments(samples[f]), args.jobs)
        rows.extend([f, x, y, means[(x, y)], actual[(x, y)]] for x, y in pairs)
    _emit(write_table(["fraction", "run_a", "run_b", "med", "actual"], rows), args.out)
    return 0


def cmd_synth(args) -> int:
    from .synthetic import make_corpus, write_corpus

    runs, qrels = make_corpus(
        args.topics, args.runs, args.list_depth, args.pool, args.noise, args.seed, args.jitter
    )
    write_corpus(args.out_dir, runs, qrels)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--measure", choices=MEASURES, default="ndcg")
    common.add_argument("--k", type=int, help="cutoff for precision/ndcg/map")
    common.add_argument("--psi", type=float, default=0.9, help="persistence for rbp/rbo")
    common.add_argument("--grades", type=int, default=2, help="G for graded measures")
    common.add_argument("--rg", type=Fraction, default=Fraction(1), help="gain per relevant character (u)")
    common.add_argument("--depth", type=int, help="list depth for rbp/rbo, search depth for err")
    common.add_argument("--pmax", type=int, default=5)
    common.add_argument("--l", type=int, default=DEFAULT_LENGTH, help="trailtext length for u")
    common.add_argument("--qrels")
    common.add_argument("--seed", type=int, help="sampling/tabu seed (required when sampling)")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out")

    parser = argparse.ArgumentParser(prog="medsim", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", parents=[common], help="per-topic distances between two runs")
    p.add_argument("run_a")
    p.add_argument("run_b")
    p.add_argument("--fraction", type=float, default=1.0)

    p = sub.add_parser("matrix", parents=[common], help="mean distance for all pairs of runs")
    p.add_argument("run_dir")

    p = sub.add_parser("sweep", parents=[common], help="distances under growing judgment samples")
    p.add_argument("runs", nargs="+")
    p.add_argument("--fractions", default="0,0.25,0.75,1")

    p = sub.add_parser("synth", help="write a synthetic fully judged corpus")
    p.add_argument("out_dir")
    p.add_argument("--topics", type=int, default=20)
    p.add_argument("--runs", type=int, default=6)
    p.add_argument("--list-depth", type=int, default=20)
    p.add_argument("--pool", type=int, default=60)
    p.add_argument("--noise", type=float, default=2.0)
    p.add_argument("--jitter", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "synth":
        return cmd_synth(args)
    cfg = MeasureConfig(
        args.measure, args.k, args.psi, args.grades, args.rg, args.depth, args.pmax, args.l,
        args.seed or 0,
    )
    try:
        if args.command == "compare":
            if args.qrels and args.fraction < 1 and args.seed is None:
                print("error: --seed is required when --fraction < 1", file=sys.stderr)
                return 2
            return cmd_compare(args, cfg)
        if args.command == "matrix":
            return cmd_matrix(args, cfg)
        if not args.qrels:
            print("error: sweep needs --qrels", file=sys.stderr)
            return 2
        if args.seed is None:
            print("error: sweep needs --seed", file=sys.stderr)
            return 2
        return cmd_sweep(args, cfg)
    except (MedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
