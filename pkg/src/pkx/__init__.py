"""Generalized Puiseux series expansion with as-requested order control."""

from .controller import (Budget, Engine, GuessReport, SeriesResult, Trace, dominant_term_of,
                         expand_expr, guess_de, guess_inc, n_terms, required_operand_orders)
from .errors import (DivisionByZeroCoefficient, DivisionByZeroSeries, EssentialSingularity,
                     InsufficientOrder, NonElementaryIntegral, ParseError, PkxError,
                     ResourceExhausted, UnsupportedExpression)
from .frames import ExpansionFrame, make_frame
from .parser import parse
from .series import OrderTerm, SeriesRep

__all__ = [
    "Budget", "Engine", "GuessReport", "SeriesResult", "Trace", "dominant_term_of",
    "expand_expr", "guess_de", "guess_inc", "n_terms", "required_operand_orders",
    "DivisionByZeroCoefficient", "DivisionByZeroSeries", "EssentialSingularity",
    "InsufficientOrder", "NonElementaryIntegral", "ParseError", "PkxError",
    "ResourceExhausted", "UnsupportedExpression", "ExpansionFrame", "make_frame", "parse",
    "OrderTerm", "SeriesRep",
]
