"""Tope logic: flattened formulas, the entailment procedure and the model oracle."""

from .flatten import flatten_points, flatten_tope
from .formulas import (
    BOTTOM,
    ONE,
    TOP,
    ZERO,
    And,
    Bottom,
    CubeContext,
    Eq,
    Leq,
    Or,
    PointConst,
    PointVar,
    Top,
    Tope,
    conj,
    disj,
    render_tope,
)
from .query import TopeAnswer, TopeQuery, answer_query, parse_query
from .semantics import IntervalModel, enumerate_models, eval_tope, find_countermodel, oracle_entails
from .solver import entails, log_cache_statistics, satisfiable

__all__ = [
    "BOTTOM",
    "ONE",
    "TOP",
    "ZERO",
    "And",
    "Bottom",
    "CubeContext",
    "Eq",
    "IntervalModel",
    "Leq",
    "Or",
    "PointConst",
    "PointVar",
    "Top",
    "Tope",
    "TopeAnswer",
    "TopeQuery",
    "answer_query",
    "conj",
    "disj",
    "entails",
    "enumerate_models",
    "eval_tope",
    "find_countermodel",
    "flatten_points",
    "flatten_tope",
    "log_cache_statistics",
    "oracle_entails",
    "parse_query",
    "render_tope",
    "satisfiable",
]
