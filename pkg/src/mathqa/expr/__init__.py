"""Formula layer: parsing, rendering and numeric evaluation."""

from .errors import (
    ExpressionError,
    LatexSyntaxError,
    MathDomainError,
    NoEvaluableSide,
    UnboundIdentifier,
    UnsupportedConstruct,
)
from .evaluator import CONSTANTS, evaluable_side, evaluate
from .nodes import (
    BinOp,
    Call,
    Const,
    Equation,
    Frac,
    FuncHeader,
    Ident,
    Node,
    Num,
    Unary,
    identifiers,
    ordered_identifiers,
    walk,
)
from .parser import parse_latex
from .render import render

__all__ = [
    "BinOp", "Call", "CONSTANTS", "Const", "Equation", "ExpressionError",
    "Frac", "FuncHeader", "Ident", "LatexSyntaxError", "MathDomainError",
    "NoEvaluableSide", "Node", "Num", "Unary", "UnboundIdentifier",
    "UnsupportedConstruct", "evaluable_side", "evaluate", "identifiers",
    "ordered_identifiers", "parse_latex", "render", "walk",
]
