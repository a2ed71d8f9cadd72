"""Errors raised by the expression layer."""

from __future__ import annotations

__all__ = [
    "ExpressionError",
    "LatexSyntaxError",
    "MathDomainError",
    "NoEvaluableSide",
    "UnboundIdentifier",
    "UnsupportedConstruct",
]


class ExpressionError(Exception):
    """Base class for everything the expression layer can raise."""


class LatexSyntaxError(ExpressionError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnsupportedConstruct(ExpressionError):
    """Input used a construct outside the supported subset, for example
    a summation, integral or matrix environment."""

    def __init__(self, token: str, position: int):
        super().__init__(f"unsupported construct {token!r} (at position {position})")
        self.token = token
        self.position = position


class UnboundIdentifier(ExpressionError):
    def __init__(self, name: str):
        super().__init__(f"no value bound for identifier {name!r}")
        self.name = name


class MathDomainError(ExpressionError):
    """Evaluation hit a singularity or left the real domain."""

    def __init__(self, detail: str, subexpression: str):
        super().__init__(f"{detail} in {subexpression}")
        self.detail = detail
        self.subexpression = subexpression


class NoEvaluableSide(ExpressionError):
    def __init__(self, missing):
        names = ", ".join(sorted(missing)) if missing else ""
        super().__init__(f"no side of the equation is fully bound (missing: {names})")
        self.missing = set(missing)
