"""Numeric evaluation of expression trees.

Plain IEEE double arithmetic.  ``log`` and ``ln`` both mean the natural
logarithm.  Values that leave the real domain (division by zero, roots
and logs of the wrong sign, overflow) raise MathDomainError naming the
offending subexpression.
"""

from __future__ import annotations

import math
from typing import Dict, Optional, Tuple, Union

from .errors import ExpressionError, MathDomainError, NoEvaluableSide, UnboundIdentifier
from .nodes import BinOp, Call, Const, Equation, Frac, FuncHeader, Ident, Node, Num, Unary, identifiers
from .render import render

__all__ = ["CONSTANTS", "evaluate", "evaluable_side"]

CONSTANTS = {"pi": math.pi, "e": math.e}

Bindings = Dict[str, float]


def evaluate(obj: Union[Node, Equation], bindings: Bindings) -> float:
    """Evaluate one expression under the given identifier bindings."""
    if isinstance(obj, Equation):
        if len(obj.sides) != 1:
            raise ValueError("cannot evaluate an equation chain directly; "
                             "pick a side with evaluable_side")
        obj = obj.sides[0]
    return _ev(obj, bindings)


def _ev(node: Node, bindings: Bindings) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Ident):
        try:
            return float(bindings[node.name])
        except KeyError:
            raise UnboundIdentifier(node.name) from None
    if isinstance(node, Unary):
        value = _ev(node.operand, bindings)
        return -value if node.op == "-" else value
    if isinstance(node, Frac):
        return _div(_ev(node.numerator, bindings), _ev(node.denominator, bindings), node)
    if isinstance(node, BinOp):
        left = _ev(node.left, bindings)
        right = _ev(node.right, bindings)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            return _div(left, right, node)
        if node.op == "^":
            return _pow(left, right, node)
        raise ExpressionError(f"unknown operator {node.op!r}")
    if isinstance(node, Call):
        return _call(node, _ev(node.arg, bindings))
    if isinstance(node, FuncHeader):
        raise ExpressionError("a function header is not a value")
    raise TypeError(f"cannot evaluate {type(node).__name__}")


def _div(num: float, den: float, node: Node) -> float:
    if den == 0:
        raise MathDomainError("division by zero", render(node))
    return num / den


def _pow(base: float, exponent: float, node: Node) -> float:
    if base == 0 and exponent < 0:
        raise MathDomainError("zero raised to a negative power", render(node))
    if base < 0 and exponent != int(exponent):
        raise MathDomainError("negative base with non-integer exponent", render(node))
    try:
        result = base ** exponent
    except OverflowError:
        raise MathDomainError("overflow", render(node)) from None
    if isinstance(result, complex):
        raise MathDomainError("complex result", render(node))
    return result


def _call(node: Call, arg: float) -> float:
    fn = node.func
    try:
        if fn == "sin":
            return math.sin(arg)
        if fn == "cos":
            return math.cos(arg)
        if fn == "tan":
            return math.tan(arg)
        if fn in ("log", "ln"):
            return math.log(arg)
        if fn == "exp":
            return math.exp(arg)
        if fn == "sqrt":
            return math.sqrt(arg)
        if fn == "abs":
            return abs(arg)
    except ValueError:
        raise MathDomainError(f"{fn} outside its domain", render(node)) from None
    except OverflowError:
        raise MathDomainError("overflow", render(node)) from None
    raise ExpressionError(f"unknown function {fn!r}")


def evaluable_side(eq: Equation, bindings: Bindings) -> Tuple[Optional[str], Node]:
    """Pick what to compute from an equation chain.

    If some side is a lone identifier and another side is fully bound,
    the lone identifier is the solve target and the first fully bound
    other side is returned.  Otherwise the first fully bound side wins
    and there is no target.  There is no algebraic rearrangement beyond
    this.  Raises NoEvaluableSide carrying the smallest set of missing
    identifiers that would unlock a side.
    """
    bound_names = set(bindings)

    def fully_bound(side: Node) -> bool:
        return not isinstance(side, FuncHeader) and identifiers(side) <= bound_names

    if len(eq.sides) > 1:
        for i, side in enumerate(eq.sides):
            if not isinstance(side, Ident):
                continue
            for j, other in enumerate(eq.sides):
                if j != i and fully_bound(other):
                    return side.name, other
    for side in eq.sides:
        if fully_bound(side):
            return None, side

    candidates = [s for s in eq.sides if not isinstance(s, (FuncHeader, Ident))]
    if not candidates:
        candidates = [s for s in eq.sides if not isinstance(s, FuncHeader)]
    best = min(candidates, key=lambda s: len(identifiers(s) - bound_names), default=None)
    missing = identifiers(best) - bound_names if best is not None else set()
    raise NoEvaluableSide(missing)
