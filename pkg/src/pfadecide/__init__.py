"""Exact decision procedures for unary polynomially ambiguous probabilistic automata."""

from .ambiguity import AmbiguityClass, AmbiguityReport, classify, has_eda, ida_degree_lower_bound
from .closedform import ClosedForm, closed_form
from .decider import BudgetExceeded, Decision, TriangularReduction, decide, triangular_reduction, verify_witness
from .fileformat import dumps, loads, read_pfa, write_pfa
from .gadgets import (
    GadgetBundle,
    QuadInstance,
    RegexUnionSpec,
    quad_nonstrict_gadget,
    quad_reach_gadget,
    quad_strict_gadget,
    regex_union_gadget,
    verify_bundle,
)
from .horizon import HorizonBound, bound_at_limit, bound_not_limit, horizon
from .linalg import RMatrix, jordan_decompose, kron, dsum, mat_mul, mat_pow
from .oracle import oracle_decide, sweep_grid, sweep_unary
from .pfa import Mode, Nfa, Pfa, Query, accept_prob, embed_nfa, useful_states

__version__ = "0.1.0"
