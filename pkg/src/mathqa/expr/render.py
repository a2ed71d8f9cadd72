"""Canonical LaTeX rendering of expression trees.

The renderer and parser form a fixed point: parsing the rendered form of
a parsed formula yields a structurally identical tree.  Exponents and
subscripts are always braced, fractions come back as ``\\frac``, and a
``\\cdot`` is inserted wherever plain adjacency would glue two numbers
together.
"""

from __future__ import annotations

from decimal import Decimal
from typing import Union

from .nodes import BinOp, Call, Const, Equation, Frac, FuncHeader, Ident, Node, Num, Unary
from .parser import GREEK_BY_CHAR

__all__ = ["render"]

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_POW = 3
_PREC_ATOM = 4

_PREFIX_FUNCS = ("sin", "cos", "tan", "log", "ln", "exp")


def render(obj: Union[Node, Equation]) -> str:
    if isinstance(obj, Equation):
        return " = ".join(_render(side) for side in obj.sides)
    return _render(obj)


def _prec(node: Node) -> int:
    if isinstance(node, Unary):
        return _PREC_ADD
    if isinstance(node, BinOp):
        return _PREC_ADD if node.op in ("+", "-") else \
            _PREC_MUL if node.op in ("*", "/") else _PREC_POW
    return _PREC_ATOM


def _child(node: Node, need: int) -> str:
    text = _render(node)
    if _prec(node) < need:
        return f"({text})"
    return text


def _render(node: Node) -> str:
    if isinstance(node, Num):
        return _fmt_number(node.value)
    if isinstance(node, Ident):
        return _ident_latex(node.name)
    if isinstance(node, Const):
        return "\\pi" if node.name == "pi" else "\\mathrm{e}"
    if isinstance(node, Unary):
        return "-" + _child(node.operand, _PREC_MUL)
    if isinstance(node, Frac):
        return f"\\frac{{{_render(node.numerator)}}}{{{_render(node.denominator)}}}"
    if isinstance(node, Call):
        if node.func == "sqrt":
            return f"\\sqrt{{{_render(node.arg)}}}"
        if node.func == "abs":
            return f"\\left|{_render(node.arg)}\\right|"
        return f"\\{node.func}({_render(node.arg)})"
    if isinstance(node, FuncHeader):
        params = ", ".join(_ident_latex(p) for p in node.params)
        return f"{_ident_latex(node.name)}({params})"
    if isinstance(node, BinOp):
        return _render_binop(node)
    raise TypeError(f"cannot render {type(node).__name__}")


def _render_binop(node: BinOp) -> str:
    if node.op in ("+", "-"):
        left = _child(node.left, _PREC_ADD)
        right = _child(node.right, _PREC_MUL)
        return f"{left} {node.op} {right}"
    if node.op == "/":
        left = _child(node.left, _PREC_MUL)
        right = _child(node.right, _PREC_POW)
        return f"{left} / {right}"
    if node.op == "*":
        left = _child(node.left, _PREC_MUL)
        right = _child(node.right, _PREC_POW)
        sep = " \\cdot " if right[0].isdigit() or right[0] == "." else " "
        return f"{left}{sep}{right}"
    # exponentiation; a function power renders prefix-style so that the
    # exponent cannot be swallowed by the argument on re-parse
    exponent = _render(node.right)
    if isinstance(node.left, Call) and node.left.func in _PREFIX_FUNCS:
        return f"\\{node.left.func}^{{{exponent}}}({_render(node.left.arg)})"
    base = _child(node.left, _PREC_ATOM)
    return f"{base}^{{{exponent}}}"


def _fmt_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    text = repr(value)
    if "e" in text or "E" in text:
        text = format(Decimal(text), "f")
    return text


def _ident_latex(name: str) -> str:
    base, _, sub = name.partition("_")
    out = _letter_latex(base)
    if sub:
        pieces = []
        for ch in sub:
            if ch in GREEK_BY_CHAR:
                pieces.append(f"\\{GREEK_BY_CHAR[ch]} ")
            else:
                pieces.append(ch)
        out += "_{" + "".join(pieces).strip() + "}"
    return out


def _letter_latex(base: str) -> str:
    if len(base) == 1:
        if base in GREEK_BY_CHAR:
            return f"\\{GREEK_BY_CHAR[base]}"
        return base
    return f"\\mathrm{{{base}}}"
