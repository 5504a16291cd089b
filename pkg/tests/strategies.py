"""Random instance generators shared by the test modules."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from medsim import GradeScale, Judgments, RankedList, build_grade_scale
from medsim.medu import Passage, Trailtext

BINARY = GradeScale.binary()
GRADED = build_grade_scale(2)
TOPIC = "t1"


def random_list(rng: random.Random, max_len: int, pool: int) -> RankedList:
    n = rng.randint(1, max_len)
    docs = rng.sample([f"d{i}" for i in range(pool)], min(n, pool))
    return RankedList(TOPIC, docs)


def random_judgments(rng, lists, scale, prob=0.3) -> Judgments:
    docs = sorted({d for lst in lists for d in lst.docs})
    return Judgments(
        {(TOPIC, d): rng.randint(0, scale.G) for d in docs if rng.random() < prob}
    )


def random_case(rng, max_len=6, pool=None, n_lists=2):
    pool = pool or rng.randint(max_len, 2 * max_len)
    return [random_list(rng, max_len, pool) for _ in range(n_lists)]


@st.composite
def ranked_lists(draw, max_len=6, pool=9, n=2):
    out = []
    for _ in range(n):
        docs = draw(st.lists(st.integers(0, pool - 1), min_size=1, max_size=max_len, unique=True))
        out.append(RankedList(TOPIC, [f"d{i}" for i in docs]))
    return out


@st.composite
def judgment_sets(draw, lists, G):
    docs = sorted({d for lst in lists for d in lst.docs})
    chosen = draw(st.lists(st.sampled_from(docs), unique=True)) if docs else []
    return Judgments({(TOPIC, d): draw(st.integers(0, G)) for d in chosen})


def random_trailtext(rng: random.Random, l: int, n_docs=3, doc_len=60, max_passages=6) -> Trailtext:
    passages = []
    for _ in range(rng.randint(0, max_passages)):
        doc = f"doc{rng.randrange(n_docs)}"
        offset = rng.randrange(doc_len)
        length = rng.randint(1, max(1, min(doc_len - offset, l // 2)))
        passages.append(Passage(doc, offset, length))
    return Trailtext(TOPIC, tuple(passages))


def frac(x) -> Fraction:
    return Fraction(x)
