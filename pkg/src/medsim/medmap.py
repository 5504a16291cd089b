"""MED for MAP@k via quadratic 0-1 optimization.

With ``R`` replaced by ``k``, average precision is

    S(C) = (1/k) * sum_{i<=k} (c_i / i) * sum_{j<=i} c_j

which is quadratic in the relevance values. Once free variables are fixed
(A -> 1, B -> 0) and predetermined ones substituted, each shared document
becomes one binary variable ``z`` and S(A) - S(B) takes the form
``z^T Q z + L^T z + F``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .core import AlignedPair, Bound, DirectionResult, GradeScale, MedOutcome, Predetermined, med
from .errors import InvalidArgument, InvalidMeasure, TooLarge

EXACT_LIMIT = 20


@dataclass(frozen=True)
class QuboProblem:
    """Maximize ``sum_{u<v} Q[u][v] z_u z_v + sum_u L[u] z_u + F`` over 0/1 ``z``.

    ``Q`` is strictly upper triangular (``z_u**2 == z_u`` folds the diagonal
    into ``L``). ``var_ranks[u]`` is the A-side rank of variable ``u``.
    """

    Q: tuple[tuple[Fraction, ...], ...]
    L: tuple[Fraction, ...]
    F: Fraction
    var_docs: tuple[str | None, ...] = ()
    var_ranks: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.L)

    def objective(self, z) -> Fraction:
        n = self.size
        total = self.F
        for u in range(n):
            if z[u]:
                total += self.L[u]
                for v in range(u + 1, n):
                    if z[v]:
                        total += self.Q[u][v]
        return total

    def integer_form(self) -> tuple[list[list[int]], list[int], int, int]:
        """``(Q, L, F, denom)`` scaled to integers by a common denominator."""
        fracs = [self.F, *self.L, *(q for row in self.Q for q in row)]
        denom = reduce(lambda x, y: x * y // math.gcd(x, y), (f.denominator for f in fracs), 1)
        Qi = [[int(q * denom) for q in row] for row in self.Q]
        return Qi, [int(x * denom) for x in self.L], int(self.F * denom), denom


@dataclass(frozen=True)
class TabuParams:
    seed: int = 0
    max_iterations: int | None = None  # None: 10 * k'
    tenure: int = 7
    restarts: int = 5

    def __post_init__(self):
        if self.tenure < 1 or self.restarts < 1:
            raise InvalidArgument("tenure and restarts must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise InvalidArgument("max_iterations must be positive")


def _require_binary(scale: GradeScale) -> None:
    if scale.grades != (0, 1):
        raise InvalidMeasure(f"MAP needs binary relevance grades (0, 1), got {scale.grades}")


def build_qubo(pair: AlignedPair, k: int) -> QuboProblem:
    """Encode S(A) - S(B) of MAP@k as a QUBO over the shared documents."""
    _require_binary(pair.scale)
    pair = pair.at_depth(k)
    var_of: dict[int, int] = {}  # A rank -> variable index
    docs, ranks = [], []
    for n, slot in enumerate(pair.side_a, start=1):
        if isinstance(slot.kind, Bound):
            var_of[n] = len(docs)
            docs.append(slot.doc)
            ranks.append(n)

    n_vars = len(docs)
    Q = [[Fraction(0)] * n_vars for _ in range(n_vars)]
    L = [Fraction(0)] * n_vars
    F = Fraction(0)

    # each entry is either ("const", value) or ("var", index)
    def terms(free_value: int, a_side: bool):
        side = pair.side_a if a_side else pair.side_b
        out = []
        for n, slot in enumerate(side, start=1):
            kind = slot.kind
            if isinstance(kind, Bound):
                out.append(("var", var_of[n if a_side else kind.partner]))
            elif isinstance(kind, Predetermined):
                out.append(("const", Fraction(kind.value)))
            else:
                out.append(("const", Fraction(free_value)))
        return out

    for sign, entries in ((Fraction(1, k), terms(1, True)), (Fraction(-1, k), terms(0, False))):
        for i, (kind_i, x_i) in enumerate(entries, start=1):
            w = sign / i
            for kind_j, x_j in entries[:i]:
                if kind_i == "const" and kind_j == "const":
                    F += w * x_i * x_j
                elif kind_i == "const":
                    L[x_j] += w * x_i
                elif kind_j == "const":
                    L[x_i] += w * x_j
                elif x_i == x_j:
                    L[x_i] += w
                else:
                    u, v = sorted((x_i, x_j))
                    Q[u][v] += w

    return QuboProblem(tuple(map(tuple, Q)), tuple(L), F, tuple(docs), tuple(ranks))


def solve_exact(q: QuboProblem) -> tuple[tuple[int, ...], Fraction]:
    """Global maximum by enumerating all ``2**k'`` assignments.

    Float enumeration shortlists near-optimal assignments; the shortlist is
    re-scored exactly and the lexicographically smallest maximizer wins.
    """
    n = q.size
    if n > EXACT_LIMIT:
        raise TooLarge(f"exact enumeration limited to {EXACT_LIMIT} variables, got {n}")
    if n == 0:
        return (), q.F
    values = np.full(1, float(q.F))
    for v in range(n):
        # gain of z_v = 1 for every assignment of z_0..z_{v-1}, built by doubling
        extra = np.full(1, float(q.L[v]))
        for u in range(v):
            extra = np.concatenate([extra, extra + float(q.Q[u][v])])
        values = np.concatenate([values, values + extra])
    best = values.max()
    candidates = np.nonzero(values >= best - 1e-9 * max(1.0, abs(best)))[0]
    scored = []
    for mask in candidates:
        z = tuple(int(mask >> u) & 1 for u in range(n))
        scored.append((-q.objective(z), z))
    neg, z = min(scored)
    return z, -neg


def greedy_local_optimum(q: QuboProblem) -> tuple[tuple[int, ...], Fraction]:
    """Steepest single-flip ascent from all zeros (lowest index on ties)."""
    Qi, Li, Fi, denom = q.integer_form()
    n = q.size
    z = [0] * n
    gain = list(Li)
    value = Fi
    while n:
        delta = [(1 - 2 * z[v]) * gain[v] for v in range(n)]
        v = max(range(n), key=lambda u: (delta[u], -u))
        if delta[v] <= 0:
            break
        value += delta[v]
        _flip(z, gain, Qi, v)
    return tuple(z), Fraction(value, denom)


def _flip(z: list[int], gain: list[int], Qi: list[list[int]], w: int) -> None:
    # gain[v] = L_v + sum_{u != v} Qsym[u][v] z_u; flipping w shifts every other gain
    step = 1 - 2 * z[w]
    z[w] ^= 1
    for v in range(len(z)):
        if v != w:
            q = Qi[w][v] if w < v else Qi[v][w]
            if q:
                gain[v] += step * q


def solve_tabu(q: QuboProblem, params: TabuParams = TabuParams()) -> tuple[tuple[int, ...], Fraction]:
    """Single-flip tabu search with aspiration.

    Restart 0 starts from all zeros, so its opening descent reproduces
    :func:`greedy_local_optimum`; later restarts start from seeded random
    assignments. Each iteration takes the best admissible flip, even a
    worsening one; a flip is admissible if it is not tabu or if it would beat
    the incumbent.
    """
    n = q.size
    if n < 1:
        raise InvalidArgument("tabu search needs at least one variable")
    Qi, Li, Fi, denom = q.integer_form()
    rng = random.Random(params.seed)
    iterations = params.max_iterations or 10 * n
    tenure = min(params.tenure, max(n - 1, 1))

    best_z: list[int] | None = None
    best_value = None
    for restart in range(params.restarts):
        z = [0] * n if restart == 0 else [rng.randint(0, 1) for _ in range(n)]
        gain = list(Li)
        value = Fi
        for u in range(n):
            if z[u]:
                value += Li[u]
                for v in range(u + 1, n):
                    if z[v]:
                        value += Qi[u][v]
        for v in range(n):
            gain[v] += sum(
                (Qi[u][v] if u < v else Qi[v][u]) for u in range(n) if u != v and z[u]
            )
        if best_value is None or value > best_value:
            best_z, best_value = list(z), value
        tabu_until = [0] * n
        for it in range(1, iterations + 1):
            move, move_delta = -1, None
            for v in range(n):
                delta = (1 - 2 * z[v]) * gain[v]
                if tabu_until[v] >= it and value + delta <= best_value:
                    continue
                if move_delta is None or delta > move_delta:
                    move, move_delta = v, delta
            if move < 0:
                break
            value += move_delta
            _flip(z, gain, Qi, move)
            tabu_until[move] = it + tenure
            if value > best_value:
                best_z, best_value = list(z), value
    return tuple(best_z), Fraction(best_value, denom)


def solve(q: QuboProblem, params: TabuParams = TabuParams()) -> tuple[tuple[int, ...], Fraction]:
    if q.size <= EXACT_LIMIT:
        return solve_exact(q)
    return solve_tabu(q, params)


class MAP:
    """MAP@k with ``R = k``; binary grades only."""

    def __init__(self, k: int = 100, tabu: TabuParams = TabuParams(), exact_limit: int = EXACT_LIMIT):
        if k < 1:
            raise InvalidArgument("k must be >= 1")
        self.depth = self.k = k
        self.tabu = tabu
        self.exact_limit = min(exact_limit, EXACT_LIMIT)

    def __repr__(self) -> str:
        return f"MAP(k={self.k})"

    def score(self, relevance, scale: GradeScale | None = None) -> Fraction:
        total = Fraction(0)
        running = Fraction(0)
        for i, c in enumerate(relevance[: self.k], start=1):
            running += c
            total += Fraction(c) * running / i
        return total / self.k

    def maximize_direction(self, pair: AlignedPair) -> DirectionResult:
        q = build_qubo(pair, self.k)
        if q.size <= self.exact_limit:
            z, value = solve_exact(q)
        else:
            z, value = solve_tabu(q, self.tabu)
        bound = {rank: Fraction(z[u]) for u, rank in enumerate(q.var_ranks)}
        wa, wb = pair.at_depth(self.k).fill(bound, Fraction(1), Fraction(0))
        return DirectionResult(value, tuple(wa), tuple(wb))


def med_map(pair: AlignedPair, k: int = 100, params: TabuParams = TabuParams()) -> MedOutcome:
    return med(pair, MAP(k, params))


def dump_qubo(q: QuboProblem) -> str:
    """Plain-text dump: ``k' F``, then the L entries, then ``i j Q_ij`` triples."""
    lines = [f"{q.size} {q.F}", " ".join(str(x) for x in q.L)]
    for u, row in enumerate(q.Q):
        for v, x in enumerate(row):
            if x:
                lines.append(f"{u} {v} {x}")
    return "\n".join(lines) + "\n"


def load_qubo(text: str) -> QuboProblem:
    lines = text.splitlines()
    n_str, f_str = lines[0].split()
    n = int(n_str)
    L = tuple(Fraction(x) for x in lines[1].split()) if n else ()
    Q = [[Fraction(0)] * n for _ in range(n)]
    for line in lines[2:]:
        if line.strip():
            u, v, x = line.split()
            Q[int(u)][int(v)] = Fraction(x)
    return QuboProblem(tuple(map(tuple, Q)), L, Fraction(f_str))
