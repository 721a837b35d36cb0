"""Regular expressions with backreferences, their ref-word semantics, and
the stack automata that recognize them."""
from .construct import build_nesa, build_nsa, derive_budget
from .langlab import crosscheck, example, language_slice
from .larsen import larsen_nesa, larsen_rewb
from .machine import Budget, StackMachine, accepts, validate_flavor
from .refnfa import build_ref_nfa, oracle_match
from .refword import deref, parse_refword, parse_word
from .syntax import parse, pretty_print

__all__ = [
    "Budget", "StackMachine", "accepts", "build_nesa", "build_nsa", "build_ref_nfa",
    "crosscheck", "deref", "derive_budget", "example", "language_slice",
    "larsen_nesa", "larsen_rewb", "oracle_match", "parse", "parse_refword",
    "parse_word", "pretty_print", "validate_flavor",
]
