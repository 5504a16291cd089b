"""Truncated rank-biased overlap, the baseline similarity."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidArgument


@dataclass(frozen=True)
class RboParams:
    psi: Fraction = Fraction(9, 10)
    K: int | None = None  # None: the longer list's length

    def __post_init__(self):
        psi = self.psi if isinstance(self.psi, Fraction) else Fraction(str(self.psi))
        if not 0 < psi < 1:
            raise InvalidArgument(f"psi must lie in (0, 1), got {psi}")
        if self.K is not None and self.K < 1:
            raise InvalidArgument("K must be >= 1")
        object.__setattr__(self, "psi", psi)


def rbo(a: Sequence[str], b: Sequence[str], params: RboParams = RboParams()) -> Fraction:
    """``(1 - psi) * sum_{d=1..K} psi**(d-1) * |A[:d] & B[:d]| / d``.

    Accepts plain sequences or :class:`~medsim.core.RankedList`. Lists shorter
    than ``K`` simply stop contributing new items.

    >>> rbo(["x", "y"], ["y", "x"], RboParams(Fraction(9, 10), 2))
    Fraction(9, 100)
    """
    a, b = list(a), list(b)
    if not a or not b:
        raise InvalidArgument("rbo needs non-empty lists")
    K = params.K or max(len(a), len(b))
    psi = params.psi
    seen_a: set[str] = set()
    seen_b: set[str] = set()
    overlap = 0
    total = Fraction(0)
    weight = Fraction(1)
    for d in range(1, K + 1):
        x = a[d - 1] if d <= len(a) else None
        y = b[d - 1] if d <= len(b) else None
        if x is not None and x == y:
            overlap += 1
        else:
            if x is not None:
                overlap += x in seen_b
                seen_a.add(x)
            if y is not None:
                overlap += y in seen_a
                seen_b.add(y)
        total += weight * Fraction(overlap, d)
        weight *= psi
    return (1 - psi) * total
