"""Minimal-model reasoning for lightweight description logics."""

from .acyclicity import Acyclicity, classify_acyclicity
from .minimality import (
    NotAModelError,
    exists_smaller_model,
    is_minimal,
    is_pointwise_minimal,
    minimize,
    pointwise_smaller_model,
)
from .normalize import FragmentError, normalize_md1
from .oracle import OracleTooLarge, enumerate_minimal_models
from .semantics import Interpretation, eval_concept, is_model
from .solver import SolveOutcome, Status, small_model_bound, solve_bounded, solve_no_una
from .syntax import KnowledgeBase, parse_concept, parse_kb

__version__ = "0.1.0"

__all__ = [
    "Acyclicity", "FragmentError", "Interpretation", "KnowledgeBase", "NotAModelError",
    "OracleTooLarge", "SolveOutcome", "Status", "classify_acyclicity", "enumerate_minimal_models",
    "eval_concept", "exists_smaller_model", "is_minimal", "is_model", "is_pointwise_minimal",
    "minimize", "normalize_md1", "parse_concept", "parse_kb", "pointwise_smaller_model",
    "small_model_bound", "solve_bounded", "solve_no_una",
]
