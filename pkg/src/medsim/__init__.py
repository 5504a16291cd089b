"""Maximized effectiveness difference: rank distances derived from IR measures."""

from .core import (
    FREE,
    AlignedPair,
    Bound,
    GradeScale,
    Judgments,
    MedOutcome,
    Predetermined,
    RankedList,
    aggregate,
    align,
    build_grade_scale,
    med,
)
from .dotprod import NDCG, RBP, DotProductMeasure, Precision, med_ndcg, med_precision, med_rbp
from .errors import (
    InvalidArgument,
    InvalidMeasure,
    InvalidPair,
    MalformedRun,
    MedError,
    ParseError,
    TooLarge,
    UnsupportedMeasure,
)
from .medmap import MAP, QuboProblem, TabuParams, build_qubo, med_map, solve_exact, solve_tabu
from .mederr import ERR, ErrParams, epsilon_bound, err_score, med_err, reach_probability
from .medu import Passage, Trailtext, med_u, u_score
from .rbo import RboParams, rbo

__version__ = "0.1.0"

__all__ = [
    "FREE",
    "AlignedPair",
    "Bound",
    "GradeScale",
    "Judgments",
    "MedOutcome",
    "Predetermined",
    "RankedList",
    "aggregate",
    "align",
    "build_grade_scale",
    "med",
    "NDCG",
    "RBP",
    "DotProductMeasure",
    "Precision",
    "med_ndcg",
    "med_precision",
    "med_rbp",
    "InvalidArgument",
    "InvalidMeasure",
    "InvalidPair",
    "MalformedRun",
    "MedError",
    "ParseError",
    "TooLarge",
    "UnsupportedMeasure",
    "MAP",
    "QuboProblem",
    "TabuParams",
    "build_qubo",
    "med_map",
    "solve_exact",
    "solve_tabu",
    "ERR",
    "ErrParams",
    "epsilon_bound",
    "err_score",
    "med_err",
    "reach_probability",
    "Passage",
    "Trailtext",
    "med_u",
    "u_score",
    "RboParams",
    "rbo",
]
