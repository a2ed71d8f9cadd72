"""Resolve a parsed question against the knowledge base.

Formula questions read the item's defining formula; property questions
go through its quality links. When several items share a label the
winner is chosen deterministically: first items that actually carry
what was asked for, then (for geometry properties) items that are
geometric shapes, then the lowest numeric qid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from . import expr, questions
from .kb import IdentifierPart, KBItem, Store

__all__ = [
    "GEOMETRIC_SHAPE_CLASSES",
    "Ambiguous",
    "FormulaAnswer",
    "ItemNotFound",
    "merge_identifiers",
    "retrieve",
]

# instance_of classes treated as geometric shapes for disambiguation
GEOMETRIC_SHAPE_CLASSES = frozenset({"Q815741"})


class ItemNotFound(Exception):
    def __init__(self, subject: str):
        super().__init__(f"no item found for {subject!r}")
        self.subject = subject


class Ambiguous(Exception):
    """Defensive: the tie-break chain always decides, so this should
    never escape; kept so a future rule change cannot fail silently."""

    def __init__(self, qids: List[str]):
        super().__init__(f"cannot decide between {', '.join(qids)}")
        self.qids = qids


@dataclass(frozen=True)
class FormulaAnswer:
    qid: Optional[str]
    item_label: str
    formula: expr.Equation
    formula_latex: str  # canonical rendering; reparses to .formula
    identifiers: Tuple[IdentifierPart, ...]
    provenance: str  # "defining-formula" | "has-quality" | "direct"


def merge_identifiers(
    equation: expr.Equation,
    parts: Tuple[IdentifierPart, ...],
) -> Tuple[IdentifierPart, ...]:
    """Formula identifiers in first-occurrence order, carrying KB part
    metadata where the symbols coincide."""
    by_symbol = {p.symbol: p for p in parts}
    return tuple(
        by_symbol.get(name, IdentifierPart(symbol=name))
        for name in expr.ordered_identifiers(equation))


Query = Union[questions.FormulaQuery, questions.PropertyQuery, questions.DirectFormula]


def retrieve(query: Query, store: Store, lang: str = "en") -> FormulaAnswer:
    if isinstance(query, questions.DirectFormula):
        equation = expr.parse_latex(query.latex)
        return FormulaAnswer(
            qid=None,
            item_label="",
            formula=equation,
            formula_latex=expr.render(equation),
            identifiers=merge_identifiers(equation, ()),
            provenance="direct",
        )

    subject = query.subject
    candidates = store.lookup_by_label(subject, lang)
    if not candidates and subject.endswith("s"):
        candidates = store.lookup_by_label(subject[:-1], lang)
    if not candidates:
        raise ItemNotFound(subject)

    predicate = query.predicate if isinstance(query, questions.PropertyQuery) else None
    item = _select(candidates, predicate, store)

    if predicate is None:
        latex = store.get_defining_formula(item)
        provenance = "defining-formula"
    else:
        latex = store.get_quality_formula(item, predicate)
        provenance = "has-quality"

    equation = expr.parse_latex(latex)
    return FormulaAnswer(
        qid=item.qid,
        item_label=item.labels.get(lang) or item.labels.get("en", item.qid),
        formula=equation,
        formula_latex=expr.render(equation),
        identifiers=merge_identifiers(equation, item.parts),
        provenance=provenance,
    )


def _carries(item: KBItem, predicate: Optional[str], store: Store) -> bool:
    if predicate is None:
        return any(item.formula_parseable)
    return store.has_quality(item, predicate)


def _select(candidates: List[KBItem], predicate: Optional[str], store: Store) -> KBItem:
    pool = list(candidates)
    if len(pool) == 1:
        return pool[0]
    carrying = [c for c in pool if _carries(c, predicate, store)]
    if carrying:
        pool = carrying
    if predicate in questions.PREDICATES:
        shapes = [c for c in pool if set(c.instance_of) & GEOMETRIC_SHAPE_CLASSES]
        if shapes:
            pool = shapes
    if not pool:
        raise Ambiguous([c.qid for c in candidates])
    return min(pool, key=KBItem.numeric_qid)
