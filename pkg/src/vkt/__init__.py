"""Invariants of virtual knot diagrams: bracket, cabled bracket, knot group, carrying surface."""
from .laurent import LaurentPoly, D, ONE, ZERO, d_power
from .codec import parse_gauss, emit_gauss, realize, code_of
from .diagram import Diagram, StateAssignment, TwistSite, cable, insert_twists, apply_move
from .bracket import bracket, bracket_contract, bracket_state_sum, n_bracket, f_poly, TooLarge

__version__ = "0.1.0"

__all__ = [
    "LaurentPoly", "D", "ONE", "ZERO", "d_power", "parse_gauss", "emit_gauss", "realize", "code_of",
    "Diagram", "StateAssignment", "TwistSite", "cable", "insert_twists", "apply_move", "bracket",
    "bracket_contract", "bracket_state_sum", "n_bracket", "f_poly", "TooLarge",
]
