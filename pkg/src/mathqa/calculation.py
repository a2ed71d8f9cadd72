"""Combine user values with knowledge-base constants and evaluate.

User values always win over stored part values. The evaluated side is
chosen by the expression layer's side-selection rule; no algebraic
rearrangement happens here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from . import expr
from .kb import IdentifierPart

__all__ = [
    "CalculationRequest",
    "CalculationResult",
    "MissingBindings",
    "calculate",
]


class MissingBindings(Exception):
    """Not a failure: lists what the caller still has to supply."""

    def __init__(self, symbols):
        self.symbols = sorted(symbols)
        super().__init__(f"values needed for: {', '.join(self.symbols)}")


@dataclass(frozen=True)
class CalculationRequest:
    formula: expr.Equation
    user_bindings: Mapping[str, float] = field(default_factory=dict)
    kb_parts: Tuple[IdentifierPart, ...] = ()


@dataclass(frozen=True)
class CalculationResult:
    value: float
    solved_for: Optional[str]
    effective_bindings: Dict[str, float]
    constant_sources: Dict[str, str]  # symbol -> where its value came from


def calculate(req: CalculationRequest) -> CalculationResult:
    formula_ids = set(expr.identifiers(req.formula))
    unknown = set(req.user_bindings) - formula_ids
    if unknown:
        raise ValueError(
            "bindings for identifiers not in the formula: "
            + ", ".join(sorted(unknown)))

    merged: Dict[str, float] = {}
    sources: Dict[str, str] = {}
    for part in req.kb_parts:
        if part.value is None or part.symbol not in formula_ids:
            continue
        if part.symbol in req.user_bindings:
            continue  # user value wins
        merged[part.symbol] = float(part.value)
        sources[part.symbol] = part.label or "knowledge base"
    merged.update({k: float(v) for k, v in req.user_bindings.items()})

    try:
        target, side = expr.evaluable_side(req.formula, merged)
    except expr.NoEvaluableSide as err:
        raise MissingBindings(err.missing) from None

    value = expr.evaluate(side, merged)
    if not math.isfinite(value):
        raise expr.MathDomainError("result is not finite", expr.render(side))

    side_ids = set(expr.identifiers(side))
    constant_sources = {k: v for k, v in sources.items() if k in side_ids}
    effective = {k: merged[k] for k in constant_sources}
    effective.update({k: float(v) for k, v in req.user_bindings.items()})
    return CalculationResult(
        value=value,
        solved_for=target,
        effective_bindings=effective,
        constant_sources=constant_sources,
    )
