"""Expression trees for the supported formula subset.

Every node is a frozen dataclass, so structural equality and hashing come
for free.  An :class:`Equation` is an ordered chain of one or more sides
(``C = 2 \\pi r = \\pi d`` has three).  A bare expression is represented as
an equation with a single side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Tuple, Union

__all__ = [
    "BinOp",
    "Call",
    "Const",
    "Equation",
    "Frac",
    "FuncHeader",
    "Ident",
    "Node",
    "Num",
    "Unary",
    "identifiers",
    "ordered_identifiers",
    "walk",
]

FUNCTIONS = ("sin", "cos", "tan", "log", "ln", "exp", "sqrt", "abs")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Ident:
    """A variable.  Names are a base letter plus an optional subscript
    suffix joined with ``_`` (``x``, ``x_0``, ``c_v``).  Text wrapped in
    ``\\mathrm{}`` or ``\\text{}`` may yield a word name such as ``Area``."""

    name: str


@dataclass(frozen=True)
class Const:
    """A named constant, either ``pi`` or Euler's ``e``."""

    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Frac:
    """A ``\\frac`` construct.  Evaluates like division but renders back
    to ``\\frac{..}{..}`` instead of an inline slash."""

    numerator: "Node"
    denominator: "Node"


@dataclass(frozen=True)
class Call:
    func: str  # one of FUNCTIONS
    arg: "Node"


@dataclass(frozen=True)
class FuncHeader:
    """Left-hand application syntax like ``f(x)``.

    The name ``f`` is not a variable that needs a binding; the parameters
    are.  Headers only ever appear as the first side of a multi-side
    equation and are never evaluable."""

    name: str
    params: Tuple[str, ...]


Node = Union[Num, Ident, Const, Unary, BinOp, Frac, Call, FuncHeader]


@dataclass(frozen=True)
class Equation:
    sides: Tuple[Node, ...]

    def __post_init__(self) -> None:
        if not self.sides:
            raise ValueError("an equation needs at least one side")


def walk(obj: Union[Node, Equation]) -> Iterator[Node]:
    """Yield every node in pre-order, left to right."""
    if isinstance(obj, Equation):
        for side in obj.sides:
            yield from walk(side)
        return
    yield obj
    if isinstance(obj, Unary):
        yield from walk(obj.operand)
    elif isinstance(obj, BinOp):
        yield from walk(obj.left)
        yield from walk(obj.right)
    elif isinstance(obj, Frac):
        yield from walk(obj.numerator)
        yield from walk(obj.denominator)
    elif isinstance(obj, Call):
        yield from walk(obj.arg)


def ordered_identifiers(obj: Union[Node, Equation]) -> list:
    """Identifier names in first-occurrence order.

    Constants and function names are not identifiers; the parameters of a
    function header are."""
    seen: dict = {}
    for node in walk(obj):
        if isinstance(node, Ident):
            seen.setdefault(node.name, None)
        elif isinstance(node, FuncHeader):
            for p in node.params:
                seen.setdefault(p, None)
    return list(seen)


def identifiers(obj: Union[Node, Equation]) -> set:
    return set(ordered_identifiers(obj))
