import itertools
import random
from fractions import Fraction

import pytest

from medsim import (
    MAP,
    InvalidMeasure,
    Judgments,
    RankedList,
    TabuParams,
    TooLarge,
    align,
    build_grade_scale,
    build_qubo,
    med,
    solve_exact,
    solve_tabu,
)
from medsim.medmap import QuboProblem, dump_qubo, greedy_local_optimum, load_qubo
from medsim.oracle import brute_force_med
from strategies import BINARY, TOPIC, random_case, random_judgments


def _pair(a, b, k, j=None):
    return align(RankedList(TOPIC, a), RankedList(TOPIC, b), k, j)


def _shuffled_pair(rng, k, shared):
    shared_docs = [f"s{i}" for i in range(shared)]
    a = shared_docs + [f"a{i}" for i in range(k - shared)]
    b = shared_docs + [f"b{i}" for i in range(k - shared)]
    rng.shuffle(a)
    rng.shuffle(b)
    return _pair(a, b, k)


def _map_direct(q, pair, k, z):
    bound = {rank: Fraction(z[u]) for u, rank in enumerate(q.var_ranks)}
    wa, wb = pair.at_depth(k).fill(bound, Fraction(1), Fraction(0))
    m = MAP(k)
    return m.score(wa) - m.score(wb)


class TestQubo:
    def test_swapped_pair(self):
        q = build_qubo(_pair("xy", "yx", 2), 2)
        assert q.L == (Fraction(1, 4), Fraction(-1, 4))
        assert q.Q[0][1] == 0 and q.F == 0

    def test_disjoint_is_constant(self):
        q = build_qubo(_pair("abc", "def", 3), 3)
        assert q.size == 0 and q.F == 1

    def test_upper_triangular(self):
        q = build_qubo(_shuffled_pair(random.Random(1), 6, 5), 6)
        for u in range(q.size):
            for v in range(u + 1):
                assert q.Q[u][v] == 0

    def test_objective_matches_direct_evaluation(self):
        rng = random.Random(5)
        for _ in range(40):
            a, b = random_case(rng, 7)
            k = rng.randint(1, 7)
            pair = align(a, b, k, random_judgments(rng, [a, b], BINARY))
            q = build_qubo(pair, k)
            for z in itertools.product((0, 1), repeat=q.size):
                assert q.objective(z) == _map_direct(q, pair, k, z)

    def test_graded_scale_rejected(self):
        pair = align(RankedList(TOPIC, "ab"), RankedList(TOPIC, "ba"), 2, scale=build_grade_scale(2))
        with pytest.raises(InvalidMeasure):
            build_qubo(pair, 2)


class TestExact:
    def test_map_at_two(self):
        z, value = solve_exact(build_qubo(_pair("xy", "yx", 2), 2))
        assert z == (1, 0) and value == Fraction(1, 4)

    def test_empty_problem(self):
        assert solve_exact(QuboProblem((), (), Fraction(1, 3))) == ((), Fraction(1, 3))

    def test_size_limit(self):
        n = 21
        q = QuboProblem(tuple((Fraction(0),) * n for _ in range(n)), (Fraction(0),) * n, Fraction(0))
        with pytest.raises(TooLarge):
            solve_exact(q)

    def test_lexicographic_tie_break(self):
        # every assignment scores zero
        n = 3
        q = QuboProblem(tuple((Fraction(0),) * n for _ in range(n)), (Fraction(0),) * n, Fraction(0))
        assert solve_exact(q) == ((0, 0, 0), 0)

    def test_matches_oracle(self):
        rng = random.Random(9)
        for _ in range(60):
            a, b = random_case(rng, 5)
            pair = align(a, b, 5, random_judgments(rng, [a, b], BINARY))
            assert float(med(pair, MAP(5)).value) == pytest.approx(brute_force_med(pair, MAP(5)).value, abs=1e-12)

    def test_judged_shared_doc_is_not_a_variable(self):
        q = build_qubo(_pair("xy", "yx", 2, Judgments({(TOPIC, "x"): 1})), 2)
        assert q.size == 1


class TestTabu:
    def test_matches_exact_on_random_instances(self):
        rng = random.Random(2024)
        for _ in range(100):
            k = rng.randint(8, 20)
            q = build_qubo(_shuffled_pair(rng, k, rng.randint(4, k)), k)
            _, exact = solve_exact(q)
            z, value = solve_tabu(q)
            assert value == exact
            assert q.objective(z) == value

    def test_deterministic(self):
        q = build_qubo(_shuffled_pair(random.Random(4), 30, 25), 30)
        p = TabuParams(seed=17)
        assert solve_tabu(q, p) == solve_tabu(q, p)

    def test_not_worse_than_greedy(self):
        rng = random.Random(8)
        for _ in range(30):
            k = rng.randint(5, 40)
            q = build_qubo(_shuffled_pair(rng, k, rng.randint(1, k)), k)
            assert solve_tabu(q)[1] >= greedy_local_optimum(q)[1]

    def test_zero_quadratic_part_picks_positive_linear_terms(self):
        L = (Fraction(1), Fraction(-2), Fraction(3), Fraction(0))
        q = QuboProblem(tuple((Fraction(0),) * 4 for _ in range(4)), L, Fraction(5))
        assert solve_tabu(q)[1] == 9
        assert solve_exact(q) == ((1, 0, 1, 0), 9)

    def test_large_instance_uses_tabu(self):
        pair = _shuffled_pair(random.Random(6), 40, 30)
        out = med(pair, MAP(40))
        m = MAP(40)
        assert out.value == abs(m.score(out.witness_a) - m.score(out.witness_b))


def test_dump_round_trip():
    q = build_qubo(_shuffled_pair(random.Random(3), 8, 6), 8)
    back = load_qubo(dump_qubo(q))
    assert back.Q == q.Q and back.L == q.L and back.F == q.F
