"""MED for expected reciprocal rank under the cascade model.

ERR is multilinear in the relevance values, so free variables go to the top
grade in A and to 0 in B, and bound variables only ever need the values 0
or r_G. The search tries every subset of at most ``p_max`` A-side bound
variables set to r_G. Once ``p`` top-grade documents have been seen, the rest
of the list can add at most ``(1 - r_G)**p / (p + 1)`` to the score.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice

import numpy as np

from .core import AlignedPair, Bound, DirectionResult, GradeScale, MedOutcome, Number, med
from .errors import InvalidArgument

_CHUNK = 16384


def _check(c: Sequence[Number]) -> None:
    for x in c:
        if not 0 <= x <= 1:
            raise InvalidArgument(f"relevance value {x} outside [0, 1]")


def err_score(c: Sequence[Number], depth: int | None = None) -> Number:
    """``sum_i (c_i / i) * prod_{j<i} (1 - c_j)`` over the first ``depth`` ranks."""
    c = list(c if depth is None else c[:depth])
    _check(c)
    total = Fraction(0)
    reach = Fraction(1)
    for i, x in enumerate(c, start=1):
        total += x * reach / i
        reach *= 1 - x
    return total


def reach_probability(c: Sequence[Number], i: int) -> Number:
    """Probability that a cascade user reaches rank ``i`` (1-based)."""
    if i < 1:
        raise InvalidArgument("rank must be >= 1")
    prob = Fraction(1)
    for x in c[: i - 1]:
        prob *= 1 - x
    return prob


def epsilon_bound(p: int, r_G: Number) -> Number:
    """Most that ranks after ``p`` top-grade documents can add to ERR."""
    if p < 0:
        raise InvalidArgument("p must be >= 0")
    return (1 - r_G) ** p / (p + 1)


@dataclass(frozen=True)
class ErrParams:
    depth: int = 30
    p_max: int = 5

    def __post_init__(self):
        if self.depth < 1 or self.p_max < 0:
            raise InvalidArgument("depth must be >= 1 and p_max >= 0")


def _err_rows(m: np.ndarray) -> np.ndarray:
    reach = np.ones_like(m)
    reach[:, 1:] = np.cumprod(1.0 - m[:, :-1], axis=1)
    return (m * reach / np.arange(1, m.shape[1] + 1)).sum(axis=1)


class ERR:
    """ERR truncated at ``depth``, maximized by bounded subset search."""

    def __init__(self, depth: int = 30, p_max: int = 5):
        self.params = ErrParams(depth, p_max)
        self.depth = depth
        self.p_max = p_max

    def __repr__(self) -> str:
        return f"ERR(depth={self.depth}, p_max={self.p_max})"

    def score(self, relevance, scale: GradeScale | None = None) -> Number:
        return err_score(relevance, self.depth)

    def maximize_direction(self, pair: AlignedPair) -> DirectionResult:
        top = pair.scale.top
        zero = Fraction(0)
        bound_ranks = [n for n, s in enumerate(pair.side_a, start=1) if isinstance(s.kind, Bound)]
        partners = [pair.side_a[n - 1].kind.partner for n in bound_ranks]
        base_a, base_b = pair.fill({n: zero for n in bound_ranks}, top, zero)
        arr_a = np.array([float(x) for x in base_a])
        arr_b = np.array([float(x) for x in base_b])
        cols_a = np.array(bound_ranks, dtype=np.int64) - 1
        cols_b = np.array(partners, dtype=np.int64) - 1

        best_val, best_subset = -np.inf, ()
        for size in range(min(self.p_max, len(bound_ranks)) + 1):
            combos = combinations(range(len(bound_ranks)), size)
            while True:
                chunk = list(islice(combos, _CHUNK))
                if not chunk:
                    break
                idx = np.array(chunk, dtype=np.int64).reshape(len(chunk), size)
                rows = np.repeat(np.arange(len(chunk)), size)
                ma = np.tile(arr_a, (len(chunk), 1))
                mb = np.tile(arr_b, (len(chunk), 1))
                ma[rows, cols_a[idx].ravel()] = float(top)
                mb[rows, cols_b[idx].ravel()] = float(top)
                vals = _err_rows(ma) - _err_rows(mb)
                j = int(np.argmax(vals))
                if vals[j] > best_val:
                    best_val, best_subset = vals[j], chunk[j]

        chosen = {bound_ranks[u] for u in best_subset}
        wa, wb = pair.fill({n: (top if n in chosen else zero) for n in bound_ranks}, top, zero)
        value = self.score(wa) - self.score(wb)
        return DirectionResult(value, tuple(wa), tuple(wb), epsilon=self._epsilon(wa, bound_ranks, top))

    def _epsilon(self, wa, bound_ranks: list[int], top: Fraction) -> Number:
        if len(bound_ranks) <= self.p_max:
            return Fraction(0)
        # an optimum with more than p_max chosen variables has its p_max-th one
        # no earlier than this rank; everything fixed at r_G above it also counts
        cutoff = bound_ranks[max(self.p_max - 1, 0)]
        is_bound = set(bound_ranks)
        fixed = sum(1 for n in range(1, cutoff) if n not in is_bound and wa[n - 1] == top)
        return epsilon_bound(self.p_max + fixed, top)


def med_err(pair: AlignedPair, params: ErrParams = ErrParams()) -> MedOutcome:
    return med(pair, ERR(params.depth, params.p_max))
