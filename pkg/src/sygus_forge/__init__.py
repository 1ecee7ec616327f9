"""Syntax-guided synthesis of linear integer arithmetic functions."""

from .cegis import synthesize_cegis
from .frontend import ParseError, ProblemError, parse, parse_term, print_problem, print_solution
from .grammar import GrammarSpec, default_grammar, example_grammar
from .kernel import BACKEND
from .lia import InternalError, ResourceLimit, check_sat
from .problem import Conjecture, Outcome, detect_single_invocation
from .single_invocation import solve_si_syntax_guided, solve_single_invocation
from .solver import select_mode, solve
from .verifier import grid_check, verify

__all__ = [
    "BACKEND",
    "Conjecture",
    "GrammarSpec",
    "InternalError",
    "Outcome",
    "ParseError",
    "ProblemError",
    "ResourceLimit",
    "check_sat",
    "default_grammar",
    "detect_single_invocation",
    "example_grammar",
    "grid_check",
    "parse",
    "parse_term",
    "print_problem",
    "print_solution",
    "select_mode",
    "solve",
    "solve_si_syntax_guided",
    "solve_single_invocation",
    "synthesize_cegis",
    "verify",
]
