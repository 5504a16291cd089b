"""Closed-form MED for dot-product measures: precision@k, nDCG@k and RBP.

A dot-product measure scores a relevance vector ``c`` as ``sum(c_i * d_i) / N``
with a non-negative, non-increasing discount ``d``. To maximize S(A) - S(B):
free variables in A take the top grade, free variables in B take 0, and a
bound pair (A rank ``n``, B rank ``m``) takes the top grade iff ``n < m``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction

from .core import (
    AlignedPair,
    Bound,
    DirectionResult,
    GradeScale,
    MedOutcome,
    Number,
    med,
)
from .errors import InvalidArgument, InvalidMeasure


class DotProductMeasure:
    """Base class; subclasses override :meth:`discount`, :meth:`normalization`.

    ``depth`` is the cutoff ``k`` for finite measures, ``None`` for measures
    computed to infinity (those supply :meth:`tail`).
    """

    depth: int | None = None

    def discount(self, rank: int) -> Number:
        raise NotImplementedError

    def normalization(self, scale: GradeScale) -> Number:
        return 1

    def tail(self, K: int, top: Fraction) -> Number:
        """Largest contribution of ranks below ``K`` (all set to ``top``)."""
        return 0

    def discounts(self, K: int) -> list[Number]:
        d = [self.discount(i) for i in range(1, K + 2)]
        if any(x < 0 for x in d) or any(hi < lo for hi, lo in zip(d, d[1:])):
            raise InvalidMeasure(f"{self!r} has a negative or increasing discount")
        return d[:K]

    def score(self, relevance: Sequence[Number], scale: GradeScale) -> Number:
        """Measure value of a fully assigned relevance vector (no tail)."""
        d = self.discounts(len(relevance))
        total = sum((c * di for c, di in zip(relevance, d)), Fraction(0))
        return total / self.normalization(scale)

    def maximize_direction(self, pair: AlignedPair) -> DirectionResult:
        return maximize_direction(pair, self)


class Precision(DotProductMeasure):
    def __init__(self, k: int):
        if k < 1:
            raise InvalidArgument("k must be >= 1")
        self.depth = self.k = k

    def discount(self, rank: int) -> Fraction:
        return Fraction(1 if rank <= self.k else 0)

    def normalization(self, scale: GradeScale) -> Fraction:
        return Fraction(self.k)

    def __repr__(self) -> str:
        return f"Precision(k={self.k})"


class NDCG(DotProductMeasure):
    """nDCG@k normalized by an ideal list of ``k`` top-grade documents."""

    def __init__(self, k: int = 20, base: float = 2.0):
        if k < 1:
            raise InvalidArgument("k must be >= 1")
        if base <= 1:
            raise InvalidArgument("logarithm base must exceed 1")
        self.depth = self.k = k
        self.base = base

    def discount(self, rank: int) -> float:
        return 1.0 / math.log(rank + 1, self.base) if rank <= self.k else 0.0

    def normalization(self, scale: GradeScale) -> float:
        return float(scale.top) * math.fsum(self.discount(i) for i in range(1, self.k + 1))

    def score(self, relevance, scale):
        d = self.discounts(len(relevance))
        return math.fsum(float(c) * di for c, di in zip(relevance, d)) / self.normalization(scale)

    def __repr__(self) -> str:
        return f"NDCG(k={self.k}, base={self.base})"


class RBP(DotProductMeasure):
    """Rank-biased precision with persistence ``psi``, computed to infinity.

    ``psi`` is held as an exact rational (floats are read via their decimal
    repr, so ``0.9`` is exactly 9/10).
    """

    depth = None

    def __init__(self, psi: float | Fraction = Fraction(9, 10)):
        psi = psi if isinstance(psi, Fraction) else Fraction(str(psi))
        if not 0 < psi < 1:
            raise InvalidArgument(f"psi must lie in (0, 1), got {psi}")
        self.psi = psi

    def discount(self, rank: int) -> Fraction:
        return (1 - self.psi) * self.psi ** (rank - 1)

    def tail(self, K: int, top: Fraction) -> Fraction:
        return top * self.psi**K

    def __repr__(self) -> str:
        return f"RBP(psi={self.psi})"


def maximize_direction(pair: AlignedPair, measure: DotProductMeasure) -> DirectionResult:
    """Maximize S(A) - S(B) in closed form."""
    top = pair.scale.top
    bound_values = {
        n: (top if n < slot.kind.partner else Fraction(0))
        for n, slot in enumerate(pair.side_a, start=1)
        if isinstance(slot.kind, Bound)
    }
    wa, wb = pair.fill(bound_values, free_a=top, free_b=Fraction(0))
    tail = measure.tail(pair.depth, top)
    value = measure.score(wa, pair.scale) - measure.score(wb, pair.scale) + tail
    return DirectionResult(value, tuple(wa), tuple(wb), tail=tail or None)


def med_precision(pair: AlignedPair, k: int) -> MedOutcome:
    return med(pair, Precision(k))


def med_ndcg(pair: AlignedPair, k: int = 20, base: float = 2.0) -> MedOutcome:
    return med(pair, NDCG(k, base))


def med_rbp(pair: AlignedPair, psi: float | Fraction = Fraction(9, 10)) -> MedOutcome:
    return med(pair, RBP(psi))
