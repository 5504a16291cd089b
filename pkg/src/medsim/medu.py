"""MED for the U-measure over trailtexts.

A trailtext is the concatenation of the passages shown to a user; position
``i`` (1-based, up to ``l``) carries the linear discount ``1 - i/l``. The
variables are characters, identified by ``(doc, offset)``. Instead of walking
characters, passages are cut into maximal intervals whose positions share a
classification, and discount sums are taken in closed form per interval.

A character repeated within one trailtext gains only at its first
occurrence; later copies are ``DUPLICATE`` and contribute nothing.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .core import MedOutcome
from .errors import InvalidArgument

DEFAULT_LENGTH = 12000

FREE, BOUND, DUPLICATE = "free", "bound", "duplicate"


@dataclass(frozen=True)
class Passage:
    doc: str
    offset: int
    length: int

    def __post_init__(self):
        if self.offset < 0 or self.length < 1:
            raise InvalidArgument(f"bad passage {self}: need offset >= 0 and length >= 1")


@dataclass(frozen=True)
class Trailtext:
    topic: str
    passages: tuple[Passage, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "passages", tuple(self.passages))


@dataclass(frozen=True)
class Interval:
    """Trailtext positions ``start..end`` (inclusive) with one classification.

    For ``BOUND`` intervals ``shift`` is the partner position minus this
    position; it is constant across the interval.
    """

    start: int
    end: int
    kind: str
    shift: int = 0

    @property
    def size(self) -> int:
        return self.end - self.start + 1


@dataclass(frozen=True)
class CharAlignment:
    l: int
    side_a: tuple[Interval, ...]
    side_b: tuple[Interval, ...]


@dataclass(frozen=True)
class _Segment:
    doc: str
    lo: int  # document offset, inclusive
    hi: int  # document offset, exclusive
    pos: int  # trailtext position of ``lo``


def _segments(text: Trailtext, l: int) -> tuple[list[_Segment], list[tuple[int, int]]]:
    """First-occurrence segments and duplicate position ranges, truncated at ``l``."""
    covered: dict[str, list[tuple[int, int]]] = defaultdict(list)
    live: list[_Segment] = []
    dupes: list[tuple[int, int]] = []
    pos = 1
    for p in text.passages:
        if pos > l:
            break
        hi = p.offset + min(p.length, l - pos + 1)
        cursor = p.offset
        # walk the passage, splitting at ranges of this doc already seen
        for c_lo, c_hi in sorted(covered[p.doc]):
            if c_hi <= cursor or c_lo >= hi:
                continue
            if c_lo > cursor:
                live.append(_Segment(p.doc, cursor, c_lo, pos + cursor - p.offset))
            d_lo, d_hi = max(c_lo, cursor), min(c_hi, hi)
            dupes.append((pos + d_lo - p.offset, pos + d_hi - 1 - p.offset))
            cursor = d_hi
        if cursor < hi:
            live.append(_Segment(p.doc, cursor, hi, pos + cursor - p.offset))
        covered[p.doc].append((p.offset, hi))
        pos += hi - p.offset
    return live, dupes


def _side(live, dupes, other, l) -> tuple[Interval, ...]:
    by_doc: dict[str, list[_Segment]] = defaultdict(list)
    for seg in other:
        by_doc[seg.doc].append(seg)
    out = [Interval(s, e, DUPLICATE) for s, e in dupes]
    covered_end = 0
    for seg in live:
        covered_end = max(covered_end, seg.pos + seg.hi - seg.lo - 1)
        pieces = []
        for o in by_doc.get(seg.doc, ()):
            lo, hi = max(seg.lo, o.lo), min(seg.hi, o.hi)
            if lo < hi:
                pieces.append((lo, hi, (o.pos - o.lo) - (seg.pos - seg.lo)))
        pieces.sort()
        cursor = seg.lo
        for lo, hi, shift in pieces:
            if lo > cursor:
                out.append(Interval(seg.pos + cursor - seg.lo, seg.pos + lo - 1 - seg.lo, FREE))
            out.append(Interval(seg.pos + lo - seg.lo, seg.pos + hi - 1 - seg.lo, BOUND, shift))
            cursor = hi
        if cursor < seg.hi:
            out.append(Interval(seg.pos + cursor - seg.lo, seg.pos + seg.hi - 1 - seg.lo, FREE))
    used = max([covered_end] + [e for _, e in dupes])
    if used < l:
        out.append(Interval(used + 1, l, FREE))
    return tuple(sorted(out, key=lambda iv: iv.start))


def align_chars(a: Trailtext, b: Trailtext, l: int = DEFAULT_LENGTH) -> CharAlignment:
    """Partition positions ``1..l`` of both trailtexts into classified intervals."""
    if l < 1:
        raise InvalidArgument("l must be >= 1")
    live_a, dupes_a = _segments(a, l)
    live_b, dupes_b = _segments(b, l)
    return CharAlignment(l, _side(live_a, dupes_a, live_b, l), _side(live_b, dupes_b, live_a, l))


def discount_sum(start: int, end: int, l: int) -> Fraction:
    """``sum_{i=start..end} (1 - i/l)`` in closed form."""
    n = end - start + 1
    return n - Fraction((start + end) * n, 2 * l)


def u_score(intervals: Sequence[tuple[int, int]], l: int = DEFAULT_LENGTH, gain: Fraction = Fraction(1)) -> Fraction:
    """U-measure of a trailtext whose relevant positions are the given
    inclusive ``(start, end)`` intervals (binary relevance, no normalization)."""
    total = Fraction(0)
    for start, end in intervals:
        if not 1 <= start <= end <= l:
            raise InvalidArgument(f"interval ({start}, {end}) outside [1, {l}]")
        total += discount_sum(start, end, l)
    return gain * total


def _direction(mine: Sequence[Interval], l: int) -> Fraction:
    total = Fraction(0)
    for iv in mine:
        if iv.kind == FREE:
            total += discount_sum(iv.start, iv.end, l)
        elif iv.kind == BOUND and iv.shift > 0:
            # relevant on both sides; this side sees it earlier
            total += discount_sum(iv.start, iv.end, l)
            total -= discount_sum(iv.start + iv.shift, iv.end + iv.shift, l)
    return total


def med_u(a: Trailtext, b: Trailtext, l: int = DEFAULT_LENGTH, gain: Fraction = Fraction(1)) -> MedOutcome:
    """MED-U@l.

    ``gain`` is the relevance value of a relevant character. The default 1
    reads the measure literally; ``gain=1/2`` (the binary value of the
    exponential-gain grade formula) rescales every distance by one half.

    The witness fields hold the relevant intervals of each side.
    """
    gain = Fraction(gain)
    if not 0 < gain <= 1:
        raise InvalidArgument("gain must lie in (0, 1]")
    al = align_chars(a, b, l)
    fwd = gain * _direction(al.side_a, l)
    bwd = gain * _direction(al.side_b, l)

    def relevant(mine, theirs_positive):
        out = []
        for iv in mine:
            if (iv.kind == FREE and theirs_positive) or (
                iv.kind == BOUND and (iv.shift > 0 if theirs_positive else iv.shift < 0)
            ):
                out.append((iv.start, iv.end))
        return tuple(out)

    if bwd > fwd:
        return MedOutcome(bwd, "B", relevant(al.side_a, False), relevant(al.side_b, True))
    return MedOutcome(fwd, "A", relevant(al.side_a, True), relevant(al.side_b, False))
