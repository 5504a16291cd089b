"""Exhaustive MED: enumerate every constrained relevance assignment.

This is the ground truth the specialized solvers are checked against. It
scores assignments with its own vectorized implementations of each measure
and knows nothing about free/bound assignment rules.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import FREE, AlignedPair, Bound, GradeScale, MedOutcome, Predetermined, Slot, med
from .dotprod import DotProductMeasure, RBP
from .errors import InvalidArgument, TooLarge, UnsupportedMeasure
from .medmap import MAP
from .mederr import ERR
from .medu import DEFAULT_LENGTH, Trailtext

DEFAULT_BUDGET = 2**20


@dataclass(frozen=True)
class OracleBudget:
    max_enumerations: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.max_enumerations < 1:
            raise InvalidArgument("budget must be positive")


def _score_rows(measure, m: np.ndarray, scale: GradeScale) -> np.ndarray:
    K = m.shape[1]
    if isinstance(measure, DotProductMeasure):
        d = np.array([float(x) for x in measure.discounts(K)])
        return m @ d / float(measure.normalization(scale))
    if isinstance(measure, MAP):
        ranks = np.arange(1, K + 1)
        return (m / ranks * np.cumsum(m, axis=1)).sum(axis=1) / measure.k
    if isinstance(measure, ERR):
        total = np.zeros(m.shape[0])
        reach = np.ones(m.shape[0])
        for i in range(min(K, measure.depth)):
            total += m[:, i] * reach / (i + 1)
            reach *= 1.0 - m[:, i]
        return total
    raise UnsupportedMeasure(f"no oracle scorer for {measure!r}")


def brute_force_med(
    pair: AlignedPair,
    measure,
    grades: Sequence[Fraction] | None = None,
    budget: OracleBudget = OracleBudget(),
) -> MedOutcome:
    """Maximum of ``|S(A) - S(B)|`` over every assignment of ``grades``.

    Free and bound (one shared value per pair) variables range over
    ``grades`` (default: the pair's scale); predetermined ones stay fixed.
    The witness is the first maximizer in lexicographic enumeration order.
    """
    depth = getattr(measure, "depth", None)
    if depth is not None:
        pair = pair.at_depth(depth)
    grades = sorted(Fraction(g) for g in (grades if grades is not None else pair.scale.grades))
    K = pair.depth

    # variable index for each slot; -1 for predetermined
    var_a, var_b, fixed_a, fixed_b = [], [], [], []
    n_vars = 0
    for slot in pair.side_a:
        if isinstance(slot.kind, Predetermined):
            var_a.append(-1)
            fixed_a.append(float(slot.kind.value))
        else:
            var_a.append(n_vars)
            fixed_a.append(0.0)
            n_vars += 1
    for slot in pair.side_b:
        fixed_b.append(0.0)
        if isinstance(slot.kind, Predetermined):
            var_b.append(-1)
            fixed_b[-1] = float(slot.kind.value)
        elif isinstance(slot.kind, Bound):
            var_b.append(var_a[slot.kind.partner - 1])
        else:
            var_b.append(n_vars)
            n_vars += 1

    g = len(grades)
    total = g**n_vars
    if total > budget.max_enumerations:
        raise TooLarge(f"{g}**{n_vars} assignments exceed the budget of {budget.max_enumerations}")

    idx = np.arange(total, dtype=np.int64)
    digits = np.empty((total, n_vars), dtype=np.int64)
    for j in range(n_vars):
        digits[:, j] = (idx // g ** (n_vars - 1 - j)) % g
    values = np.array([float(x) for x in grades])[digits] if n_vars else np.zeros((1, 0))

    def side(var, fixed):
        m = np.tile(np.array(fixed), (total, 1))
        for i, v in enumerate(var):
            if v >= 0:
                m[:, i] = values[:, v]
        return m

    ma, mb = side(var_a, fixed_a), side(var_b, fixed_b)
    diff = _score_rows(measure, ma, pair.scale) - _score_rows(measure, mb, pair.scale)
    best = int(np.argmax(np.abs(diff)))
    tail = float(measure.tail(K, pair.scale.top)) if isinstance(measure, RBP) else 0.0
    value = float(abs(diff[best])) + tail

    def witness(var, slots):
        return tuple(
            grades[digits[best, v]] if v >= 0 else slot.kind.value for v, slot in zip(var, slots)
        )

    return MedOutcome(
        value,
        "A" if diff[best] >= 0 else "B",
        witness(var_a, pair.side_a),
        witness(var_b, pair.side_b),
        tail=tail or None,
    )


class LinearDiscount(DotProductMeasure):
    """The U-measure discount ``1 - i/l`` as a finite dot-product measure."""

    def __init__(self, l: int = DEFAULT_LENGTH):
        self.depth = self.l = l

    def discount(self, rank: int) -> Fraction:
        return max(Fraction(0), 1 - Fraction(rank, self.l))


def char_level_pair(a: Trailtext, b: Trailtext, l: int = DEFAULT_LENGTH, gain: Fraction = Fraction(1)) -> AlignedPair:
    """Expand two trailtexts into one variable per character position.

    Repeated characters are predetermined at 0; padding is free.
    """

    def chars(text: Trailtext) -> list[str | None]:
        out: list[str | None] = []
        for p in text.passages:
            out.extend(f"{p.doc}@{p.offset + j}" for j in range(p.length))
        out = out[:l]
        return out + [None] * (l - len(out))

    ca, cb = chars(a), chars(b)

    def first_positions(cs):
        first: dict[str, int] = {}
        for i, ch in enumerate(cs, start=1):
            if ch is not None:
                first.setdefault(ch, i)
        return first

    fa, fb = first_positions(ca), first_positions(cb)

    def side(cs, mine, other):
        slots = []
        for i, ch in enumerate(cs, start=1):
            if ch is None:
                slots.append(Slot(None, FREE))
            elif mine[ch] != i:
                slots.append(Slot(ch, Predetermined(Fraction(0))))
            elif ch in other:
                slots.append(Slot(ch, Bound(other[ch])))
            else:
                slots.append(Slot(ch, FREE))
        return tuple(slots)

    scale = GradeScale((Fraction(0), Fraction(gain)))
    return AlignedPair(side(ca, fa, fb), side(cb, fb, fa), scale)


def per_character_med_u(a: Trailtext, b: Trailtext, l: int = DEFAULT_LENGTH, gain: Fraction = Fraction(1)) -> Fraction:
    """MED-U by per-character summation (no interval arithmetic)."""
    return med(char_level_pair(a, b, l, gain), LinearDiscount(l)).value
