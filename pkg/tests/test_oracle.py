from fractions import Fraction

import pytest

from medsim import ERR, MAP, NDCG, RBP, InvalidArgument, Precision, RankedList, TooLarge, align
from medsim.oracle import LinearDiscount, OracleBudget, brute_force_med, char_level_pair
from medsim.medu import Passage, Trailtext
from strategies import BINARY, GRADED, TOPIC


def _swap(scale=BINARY):
    return align(RankedList(TOPIC, "xy"), RankedList(TOPIC, "yx"), 2, scale=scale)


def test_precision_swap_is_zero():
    assert brute_force_med(_swap(), Precision(2)).value == 0


def test_rbp_includes_tail():
    out = brute_force_med(_swap(), RBP(0.9))
    assert out.value == pytest.approx(0.82, abs=1e-12)
    assert out.tail == pytest.approx(0.81)


def test_ndcg_swap():
    assert brute_force_med(_swap(GRADED), NDCG(2)).value == pytest.approx(0.2262943855309168, abs=1e-15)


def test_err_uses_full_grade_set():
    out = brute_force_med(_swap(GRADED), ERR(2))
    # 3/4 - 3/8; the optimum sits on the extreme grades
    assert out.value == pytest.approx(0.375, abs=1e-15)
    assert set(out.witness_a) == {0, Fraction(3, 4)}


def test_witness_is_consistent():
    out = brute_force_med(_swap(), MAP(2))
    # bound variables mirror across the lists
    assert out.witness_a == tuple(reversed(out.witness_b))


def test_budget():
    docs = [f"d{i}" for i in range(12)]
    pair = align(RankedList(TOPIC, docs), RankedList(TOPIC, [f"e{i}" for i in range(12)]), 12)
    with pytest.raises(TooLarge):
        brute_force_med(pair, Precision(12), budget=OracleBudget(1000))
    with pytest.raises(InvalidArgument):
        OracleBudget(0)


def test_linear_discount():
    m = LinearDiscount(4)
    assert [m.discount(i) for i in range(1, 5)] == [Fraction(3, 4), Fraction(1, 2), Fraction(1, 4), 0]


def test_char_level_pair_marks_repeats():
    a = Trailtext(TOPIC, (Passage("d", 0, 2), Passage("d", 1, 2)))
    pair = char_level_pair(a, Trailtext(TOPIC), 6)
    kinds = [type(s.kind).__name__ for s in pair.side_a]
    assert kinds[2] == "Predetermined"
    assert pair.side_a[3].doc == "d@2"
