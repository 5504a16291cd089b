"""Run files, qrels and passage runs in; CSV tables out.

Formats (whitespace separated, ``#`` comment lines and blank lines ignored):

* run:          ``topic Q0 docid rank score tag``
* qrels:        ``topic 0 docid grade``
* passage run:  ``topic docid offset length rank``  (offsets in characters)
"""

from __future__ import annotations

import csv
import io as _stdio
import logging
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .core import GradeScale, Judgments, RankedList
from .errors import MalformedRun, ParseError
from .medu import Passage, Trailtext

log = logging.getLogger(__name__)


@dataclass
class RunFile:
    tag: str
    topics: dict[str, RankedList] = field(default_factory=dict)
    warnings: int = 0

    def __getitem__(self, topic: str) -> RankedList:
        return self.topics[topic]

    def __contains__(self, topic: str) -> bool:
        return topic in self.topics


def _lines(text: str):
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            yield number, stripped.split()


def parse_run(text: str) -> RunFile:
    """Parse a TREC-style run; documents sorted by score desc, then docid asc.

    The rank column is ignored for ordering; disagreements between rank
    order and score order are counted in ``RunFile.warnings``.
    """
    rows: dict[str, list[tuple[float, str, int]]] = defaultdict(list)
    seen: set[tuple[str, str]] = set()
    tags: list[str] = []
    for number, fields in _lines(text):
        if len(fields) != 6:
            raise ParseError(f"expected 6 fields, got {len(fields)}", number)
        topic, _, doc, rank, score, tag = fields
        try:
            rank_i = int(rank)
            score_f = float(score)
        except ValueError as exc:
            raise ParseError(f"bad rank or score ({exc})", number) from None
        if (topic, doc) in seen:
            raise MalformedRun(f"line {number}: duplicate document {doc!r} for topic {topic!r}")
        seen.add((topic, doc))
        rows[topic].append((score_f, doc, rank_i))
        if not tags:
            tags.append(tag)
        elif tag != tags[0]:
            log.warning("line %d: run tag %r differs from %r", number, tag, tags[0])

    run = RunFile(tags[0] if tags else "")
    for topic in sorted(rows):
        entries = sorted(rows[topic], key=lambda r: (-r[0], r[1]))
        ranks = [r[2] for r in entries]
        if ranks != sorted(ranks):
            run.warnings += 1
            log.warning("topic %s: rank column disagrees with score order", topic)
        run.topics[topic] = RankedList(topic, (doc for _, doc, _ in entries))
    return run


def render_run(run: RunFile) -> str:
    out = []
    for topic, ranked in run.topics.items():
        n = len(ranked)
        for i, doc in enumerate(ranked.docs, start=1):
            out.append(f"{topic} Q0 {doc} {i} {n - i + 1} {run.tag}")
    return "\n".join(out) + ("\n" if out else "")


def parse_qrels(text: str, scale: GradeScale) -> Judgments:
    """Parse qrels, clamping grade indices into ``[0, scale.G]``.

    Clamped grades and duplicate entries (last one wins) are counted in
    ``Judgments.warnings``.
    """
    entries: dict[tuple[str, str], int] = {}
    warnings = 0
    for number, fields in _lines(text):
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)}", number)
        topic, _, doc, grade = fields
        try:
            g = int(grade)
        except ValueError:
            raise ParseError(f"grade {grade!r} is not an integer", number) from None
        if not 0 <= g <= scale.G:
            warnings += 1
            log.warning("line %d: grade %d clamped into [0, %d]", number, g, scale.G)
            g = min(max(g, 0), scale.G)
        if (topic, doc) in entries:
            warnings += 1
            log.warning("line %d: duplicate judgment for %s/%s", number, topic, doc)
        entries[(topic, doc)] = g
    return Judgments(entries, warnings)


def parse_passage_run(text: str) -> dict[str, Trailtext]:
    """Parse a passage run into one trailtext per topic, ordered by rank."""
    rows: dict[str, list[tuple[int, int, Passage]]] = defaultdict(list)
    for number, fields in _lines(text):
        if len(fields) != 5:
            raise ParseError(f"expected 5 fields, got {len(fields)}", number)
        topic, doc, offset, length, rank = fields
        try:
            offset_i, length_i, rank_i = int(offset), int(length), int(rank)
        except ValueError as exc:
            raise ParseError(f"bad integer field ({exc})", number) from None
        if length_i <= 0:
            raise ParseError(f"passage length must be positive, got {length_i}", number)
        if offset_i < 0:
            raise ParseError(f"offset must be non-negative, got {offset_i}", number)
        rows[topic].append((rank_i, number, Passage(doc, offset_i, length_i)))
    return {
        topic: Trailtext(topic, tuple(p for _, _, p in sorted(rows[topic], key=lambda r: r[:2])))
        for topic in sorted(rows)
    }


def format_number(value) -> str:
    return f"{float(value):.6f}"


def write_matrix(labels: Sequence[str], values: Mapping[tuple[str, str], float]) -> str:
    """Square ``label x label`` CSV; labels are sorted for a stable layout."""
    labels = sorted(labels)
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["run", *labels])
    for row in labels:
        writer.writerow([row, *(format_number(values[(row, col)]) for col in labels)])
    return buf.getvalue()


def write_table(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """CSV with floats rendered to 6 decimals; other cells as ``str``."""
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            ["" if c is None else c if isinstance(c, str) else format_number(c) for c in row]
        )
    return buf.getvalue()
