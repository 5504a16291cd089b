"""Ranked lists, grade scales, judgments and pair alignment.

An :class:`AlignedPair` is the variable model every MED solver works on:
each of the ``K`` ranks on either side holds a relevance variable that is

* ``FREE`` -- the document appears in one list only (or the rank is padding),
* :class:`Bound` -- the document appears in both lists, unjudged; its value
  must equal the variable at ``partner`` (1-based rank) on the other side,
* :class:`Predetermined` -- the document is judged; its value is fixed.

:func:`med` runs a measure's direction maximizer for S(A) - S(B) and for
S(B) - S(A) and keeps the larger.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Protocol, Union

from .errors import InvalidArgument, InvalidPair, MalformedRun, UnsupportedMeasure

Number = Union[Fraction, float]


# --------------------------------------------------------------------------
# Ranked lists and grades
# --------------------------------------------------------------------------


def _check_token(value: str, what: str) -> None:
    if not isinstance(value, str) or not value or any(ch.isspace() for ch in value):
        raise InvalidArgument(f"{what} must be a non-empty token without whitespace: {value!r}")


@dataclass(frozen=True)
class RankedList:
    """Duplicate-free ordered document ids for one topic; index 0 is rank 1."""

    topic: str
    docs: tuple[str, ...]

    def __init__(self, topic: str, docs: Iterable[str]):
        docs = tuple(docs)
        _check_token(topic, "topic")
        seen: set[str] = set()
        for doc in docs:
            _check_token(doc, "document id")
            if doc in seen:
                raise MalformedRun(f"document {doc!r} appears twice in topic {topic!r}")
            seen.add(doc)
        object.__setattr__(self, "topic", topic)
        object.__setattr__(self, "docs", docs)

    def __len__(self) -> int:
        return len(self.docs)

    def __iter__(self) -> Iterator[str]:
        return iter(self.docs)

    def rank_of(self, doc: str) -> int | None:
        try:
            return self.docs.index(doc) + 1
        except ValueError:
            return None


@dataclass(frozen=True)
class GradeScale:
    """Relevance values ``r_0 = 0 < r_1 < ... < r_G <= 1`` as exact rationals."""

    grades: tuple[Fraction, ...]

    def __post_init__(self):
        grades = tuple(Fraction(g) for g in self.grades)
        if len(grades) < 2:
            raise InvalidArgument("a grade scale needs at least two grades")
        if grades[0] != 0:
            raise InvalidArgument("the lowest grade must be 0")
        if any(lo >= hi for lo, hi in zip(grades, grades[1:])):
            raise InvalidArgument("grades must be strictly increasing")
        if grades[-1] > 1:
            raise InvalidArgument("the top grade must not exceed 1")
        object.__setattr__(self, "grades", grades)

    @property
    def G(self) -> int:
        return len(self.grades) - 1

    @property
    def top(self) -> Fraction:
        return self.grades[-1]

    def value(self, index: int) -> Fraction:
        if not 0 <= index <= self.G:
            raise InvalidArgument(f"grade index {index} outside [0, {self.G}]")
        return self.grades[index]

    @classmethod
    def binary(cls) -> GradeScale:
        """Binary relevance: grades 0 and 1."""
        return cls((Fraction(0), Fraction(1)))


def build_grade_scale(G: int) -> GradeScale:
    """Exponential-gain grades ``r_j = (2**j - 1) / 2**G`` for ``j = 0..G``.

    >>> build_grade_scale(2).grades
    (Fraction(0, 1), Fraction(1, 4), Fraction(3, 4))
    """
    if not isinstance(G, int) or G < 1:
        raise InvalidArgument(f"G must be an integer >= 1, got {G!r}")
    return GradeScale(tuple(Fraction(2**j - 1, 2**G) for j in range(G + 1)))


class Judgments(Mapping):
    """Known relevance: ``(topic, doc) -> grade index``.

    ``warnings`` counts recoverable problems found while parsing (clamped
    grades, duplicate entries).
    """

    def __init__(self, entries: Mapping[tuple[str, str], int] | None = None, warnings: int = 0):
        self._entries: dict[tuple[str, str], int] = dict(entries or {})
        for key, grade in self._entries.items():
            if not isinstance(grade, int) or grade < 0:
                raise InvalidArgument(f"grade index for {key} must be a non-negative int")
        self.warnings = warnings

    def __getitem__(self, key: tuple[str, str]) -> int:
        return self._entries[key]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        return f"Judgments({len(self)} entries)"

    def for_topic(self, topic: str) -> dict[str, int]:
        return {doc: g for (t, doc), g in self._entries.items() if t == topic}

    def subset(self, keys: Iterable[tuple[str, str]]) -> Judgments:
        return Judgments({k: self._entries[k] for k in keys})

    def clamped(self, G: int) -> Judgments:
        """Copy with every grade index capped at ``G`` (e.g. graded -> binary)."""
        return Judgments({k: min(g, G) for k, g in self._entries.items()}, self.warnings)


# --------------------------------------------------------------------------
# Variable model
# --------------------------------------------------------------------------


class _FreeKind:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "FREE"

    def __reduce__(self):
        return (_FreeKind, ())


FREE = _FreeKind()


@dataclass(frozen=True)
class Bound:
    partner: int  # 1-based rank on the other side


@dataclass(frozen=True)
class Predetermined:
    value: Fraction


VariableKind = Union[_FreeKind, Bound, Predetermined]


@dataclass(frozen=True)
class Slot:
    doc: str | None
    kind: VariableKind


@dataclass(frozen=True)
class AlignedPair:
    side_a: tuple[Slot, ...]
    side_b: tuple[Slot, ...]
    scale: GradeScale = field(default_factory=GradeScale.binary)

    def __post_init__(self):
        if len(self.side_a) != len(self.side_b) or not self.side_a:
            raise InvalidArgument("both sides must have the same depth K >= 1")
        for mine, theirs in ((self.side_a, self.side_b), (self.side_b, self.side_a)):
            for rank, slot in enumerate(mine, start=1):
                if isinstance(slot.kind, Bound):
                    other = theirs[slot.kind.partner - 1]
                    if not isinstance(other.kind, Bound) or other.kind.partner != rank:
                        raise InvalidArgument(f"bound variable at rank {rank} is not mirrored")

    @property
    def depth(self) -> int:
        return len(self.side_a)

    def swapped(self) -> AlignedPair:
        return AlignedPair(self.side_b, self.side_a, self.scale)

    def at_depth(self, k: int) -> AlignedPair:
        """Truncate to, or pad with free variables up to, depth ``k``.

        A bound variable whose partner falls below ``k`` becomes free: the
        partner is never scored, so the constraint no longer binds anything.
        """
        if k < 1:
            raise InvalidArgument("depth must be >= 1")
        if k == self.depth:
            return self

        def cut(side: tuple[Slot, ...]) -> tuple[Slot, ...]:
            out = []
            for slot in side[:k]:
                if isinstance(slot.kind, Bound) and slot.kind.partner > k:
                    slot = Slot(slot.doc, FREE)
                out.append(slot)
            out.extend(Slot(None, FREE) for _ in range(k - len(out)))
            return tuple(out)

        return AlignedPair(cut(self.side_a), cut(self.side_b), self.scale)

    def has_predetermined(self) -> bool:
        return any(isinstance(s.kind, Predetermined) for s in self.side_a + self.side_b)

    def fill(self, bound_values: Mapping[int, Number], free_a: Number, free_b: Number):
        """Materialize relevance vectors.

        ``bound_values`` maps an A-side rank of a bound variable to its value;
        the partner on the B side receives the same value.
        """
        a, b = [], []
        for rank, slot in enumerate(self.side_a, start=1):
            if isinstance(slot.kind, Predetermined):
                a.append(slot.kind.value)
            elif isinstance(slot.kind, Bound):
                a.append(bound_values[rank])
            else:
                a.append(free_a)
        for slot in self.side_b:
            if isinstance(slot.kind, Predetermined):
                b.append(slot.kind.value)
            elif isinstance(slot.kind, Bound):
                b.append(bound_values[slot.kind.partner])
            else:
                b.append(free_b)
        return a, b


def align(
    a: RankedList,
    b: RankedList,
    K: int,
    judgments: Mapping[tuple[str, str], int] | None = None,
    scale: GradeScale | None = None,
) -> AlignedPair:
    """Classify the top ``K`` ranks of ``a`` and ``b`` into relevance variables.

    Judged documents are predetermined on both sides (even when shared);
    unjudged documents present in both top-``K`` prefixes are bound; the
    rest, including padding past the end of a short list, are free.
    """
    if K < 1:
        raise InvalidArgument("K must be >= 1")
    if a.topic != b.topic:
        raise InvalidPair(f"topic mismatch: {a.topic!r} vs {b.topic!r}")
    scale = scale or GradeScale.binary()
    judgments = judgments or {}
    rank_a = {doc: r for r, doc in enumerate(a.docs[:K], start=1)}
    rank_b = {doc: r for r, doc in enumerate(b.docs[:K], start=1)}

    def side(docs: tuple[str, ...], other: dict[str, int]) -> tuple[Slot, ...]:
        slots = []
        for i in range(K):
            if i >= len(docs):
                slots.append(Slot(None, FREE))
                continue
            doc = docs[i]
            grade = judgments.get((a.topic, doc))
            if grade is not None:
                slots.append(Slot(doc, Predetermined(scale.value(grade))))
            elif doc in other:
                slots.append(Slot(doc, Bound(other[doc])))
            else:
                slots.append(Slot(doc, FREE))
        return tuple(slots)

    return AlignedPair(side(a.docs, rank_b), side(b.docs, rank_a), scale)


# --------------------------------------------------------------------------
# MED driver
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectionResult:
    """Best S(A) - S(B) found by a direction maximizer, with its witness."""

    value: Number
    witness_a: tuple
    witness_b: tuple
    epsilon: Number | None = None
    tail: Number | None = None


@dataclass(frozen=True)
class MedOutcome:
    """A MED distance with the relevance assignment that realizes it.

    ``direction`` names the list that scores higher under the witness.
    ``tail`` is the analytic contribution of unseen ranks (RBP); ``epsilon``
    bounds how far ``value`` may sit below the true maximum (ERR).
    """

    value: Number
    direction: str
    witness_a: tuple
    witness_b: tuple
    epsilon: Number | None = None
    tail: Number | None = None

    def __float__(self) -> float:
        return float(self.value)


class Measure(Protocol):
    depth: int | None

    def maximize_direction(self, pair: AlignedPair) -> DirectionResult: ...


def med(pair: AlignedPair, measure: Measure) -> MedOutcome:
    maximize = getattr(measure, "maximize_direction", None)
    if maximize is None:
        raise UnsupportedMeasure(f"{type(measure).__name__} is not a MED measure")
    depth = getattr(measure, "depth", None)
    if depth is not None:
        pair = pair.at_depth(depth)
    forward = maximize(pair)
    backward = maximize(pair.swapped())
    eps = None
    if forward.epsilon is not None or backward.epsilon is not None:
        eps = max(e for e in (forward.epsilon, backward.epsilon) if e is not None)
    if backward.value > forward.value:
        return MedOutcome(
            backward.value, "B", backward.witness_b, backward.witness_a, eps, backward.tail
        )
    return MedOutcome(forward.value, "A", forward.witness_a, forward.witness_b, eps, forward.tail)


def aggregate(values: Sequence[Real]) -> Number:
    """Arithmetic mean of per-topic MED values."""
    values = list(values)
    if not values:
        raise InvalidArgument("cannot aggregate an empty sequence")
    if all(isinstance(v, (int, Fraction)) for v in values):
        return Fraction(sum(values), len(values))
    return sum(float(v) for v in values) / len(values)
