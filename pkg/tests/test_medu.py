import random
from fractions import Fraction

import pytest

from medsim import InvalidArgument, Passage, Trailtext, med_u, u_score
from medsim.medu import BOUND, DUPLICATE, FREE, align_chars, discount_sum
from medsim.oracle import per_character_med_u
from strategies import TOPIC, random_trailtext


def text(*passages):
    return Trailtext(TOPIC, tuple(Passage(*p) for p in passages))


class TestDiscountSum:
    def test_matches_loop(self):
        for l in (1, 7, 50):
            for s in range(1, l + 1):
                for e in range(s, l + 1):
                    assert discount_sum(s, e, l) == sum(1 - Fraction(i, l) for i in range(s, e + 1))

    def test_u_score_rejects_bad_interval(self):
        with pytest.raises(InvalidArgument):
            u_score([(0, 3)], 10)


class TestExamples:
    def test_disjoint_full_length(self):
        a = text(("x", 0, 12000))
        b = text(("y", 0, 12000))
        assert med_u(a, b, 12000).value == Fraction(11999, 2)

    def test_half_gain_variant(self):
        a = text(("x", 0, 12000))
        b = text(("y", 0, 12000))
        assert med_u(a, b, 12000, gain=Fraction(1, 2)).value == Fraction(11999, 4)

    def test_identical_is_zero(self):
        a = text(("x", 0, 30), ("y", 5, 10))
        assert med_u(a, a, 40).value == 0

    def test_identical_short_leaves_unseen_positions(self):
        a = text(("x", 0, 30))
        assert med_u(a, a, 40).value == discount_sum(31, 40, 40)

    def test_empty_trailtexts(self):
        assert med_u(Trailtext(TOPIC), Trailtext(TOPIC), 10).value == sum(
            1 - Fraction(i, 10) for i in range(1, 11)
        )

    def test_shifted_overlap(self):
        # b shows the same characters one position later
        a = text(("x", 0, 4))
        b = text(("z", 0, 1), ("x", 0, 3))
        assert med_u(a, b, 4).value == per_character_med_u(a, b, 4)

    def test_gain_range(self):
        with pytest.raises(InvalidArgument):
            med_u(Trailtext(TOPIC), Trailtext(TOPIC), 5, gain=0)

    def test_l_range(self):
        with pytest.raises(InvalidArgument):
            med_u(Trailtext(TOPIC), Trailtext(TOPIC), 0)


class TestAlignment:
    def test_duplicates_marked(self):
        al = align_chars(text(("x", 0, 3), ("x", 1, 3)), Trailtext(TOPIC), 10)
        kinds = {(iv.start, iv.end): iv.kind for iv in al.side_a}
        assert kinds[(4, 5)] == DUPLICATE
        assert kinds[(6, 6)] == FREE

    def test_bound_shift(self):
        al = align_chars(text(("x", 0, 3)), text(("y", 0, 2), ("x", 0, 3)), 10)
        bound = [iv for iv in al.side_a if iv.kind == BOUND]
        assert bound == [type(bound[0])(1, 3, BOUND, 2)]

    def test_partition_covers_every_position(self):
        rng = random.Random(1)
        for _ in range(100):
            l = rng.randint(1, 80)
            al = align_chars(random_trailtext(rng, l), random_trailtext(rng, l), l)
            for side in (al.side_a, al.side_b):
                covered = [i for iv in side for i in range(iv.start, iv.end + 1)]
                assert covered == list(range(1, l + 1))


def test_interval_matches_per_character():
    rng = random.Random(77)
    for _ in range(200):
        l = rng.randint(1, 60)
        a = random_trailtext(rng, l, n_docs=2, doc_len=30)
        b = random_trailtext(rng, l, n_docs=2, doc_len=30)
        assert med_u(a, b, l).value == per_character_med_u(a, b, l)


def test_witness_scores_reproduce_value():
    rng = random.Random(5)
    for _ in range(50):
        l = rng.randint(5, 60)
        a, b = random_trailtext(rng, l), random_trailtext(rng, l)
        out = med_u(a, b, l)
        assert out.value == abs(u_score(out.witness_a, l) - u_score(out.witness_b, l))


def test_length_one_degenerates_to_zero():
    rng = random.Random(2)
    for _ in range(20):
        assert med_u(random_trailtext(rng, 1), random_trailtext(rng, 1), 1).value == 0


def test_triangle_inequality():
    rng = random.Random(13)
    for _ in range(200):
        l = rng.randint(1, 50)
        a, b, c = (random_trailtext(rng, l) for _ in range(3))
        assert med_u(a, c, l).value <= med_u(a, b, l).value + med_u(b, c, l).value
