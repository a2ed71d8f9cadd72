"""Question answering orchestration shared by the CLI and the HTTP API.

A QAService owns an immutable store and wires the parse, retrieve and
calculate steps into JSON-friendly payloads.  All methods are pure with
respect to the service state, so one instance can serve concurrent
requests without locking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from . import expr, kb, questions, retrieval
from .calculation import CalculationRequest, MissingBindings, calculate

_LANGS = ("en", "hi", "formula")


class BadRequest(Exception):
    """Malformed request (missing/unknown inputs), distinct from domain misses."""


@dataclass(frozen=True)
class IdentifierInfo:
    symbol: str
    label: str = ""
    known_value: Optional[float] = None
    unit: Optional[str] = None

    def to_dict(self) -> dict:
        return {"symbol": self.symbol, "label": self.label,
                "known_value": self.known_value, "unit": self.unit}


@dataclass(frozen=True)
class AnswerPayload:
    status: str  # ok | needs-values | not-found | unparseable
    formula_latex: Optional[str] = None
    identifiers: Tuple[IdentifierInfo, ...] = ()
    qid: Optional[str] = None
    message: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "formula_latex": self.formula_latex,
            "identifiers": [i.to_dict() for i in self.identifiers],
            "qid": self.qid,
            "message": self.message,
        }


def _solve_target(formula) -> Optional[str]:
    """Symbol of the first equation side that is a bare identifier.

    That side is what a later calculation will produce, so it is not
    offered as an input.
    """
    if isinstance(formula, expr.Equation):
        for side in formula.sides:
            if isinstance(side, expr.Ident):
                return side.name
    return None


class QAService:
    def __init__(self, store: kb.Store,
                 patterns: Optional[questions.HindiPatterns] = None):
        self.store = store
        self.patterns = patterns

    # -- question answering --

    def ask(self, text: str, lang: str = "en") -> AnswerPayload:
        if lang not in _LANGS:
            raise ValueError("lang must be one of %s" % (_LANGS,))
        if lang == "formula":
            query = questions.DirectFormula(latex=text.strip())
            retrieval_lang = "en"
        else:
            retrieval_lang = lang
            try:
                query = questions.parse_question(text, lang, self.patterns)
            except questions.NoParse:
                return AnswerPayload(
                    "unparseable",
                    message="could not understand the question: %r" % text)
        try:
            answer = retrieval.retrieve(query, self.store, lang=retrieval_lang)
        except retrieval.ItemNotFound as err:
            return AnswerPayload(
                "not-found",
                message='no knowledge-base item matches "%s"' % err.subject)
        except kb.NoFormula as err:
            detail = ("only unparseable formulae" if err.had_unparseable
                      else "no defining formula")
            return AnswerPayload(
                "not-found", qid=err.qid,
                message="item %s carries %s" % (err.qid, detail))
        except kb.NoSuchQuality as err:
            return AnswerPayload(
                "not-found", qid=err.qid,
                message='item %s has no "%s" quality' % (err.qid, err.label))
        except retrieval.Ambiguous as err:
            return AnswerPayload(
                "not-found",
                message="multiple items match equally well: %s" % ", ".join(err.qids))
        except expr.LatexSyntaxError as err:
            return AnswerPayload("unparseable",
                                 message="formula does not parse: %s" % err)
        return self._answer_payload(answer)

    def _answer_payload(self, answer: retrieval.FormulaAnswer) -> AnswerPayload:
        target = _solve_target(answer.formula)
        infos = tuple(
            IdentifierInfo(p.symbol, p.label, p.value, p.unit)
            for p in answer.identifiers if p.symbol != target)
        unresolved = [i for i in infos if i.known_value is None]
        if answer.provenance == "defining-formula" or not unresolved:
            status = "ok"
        else:
            status = "needs-values"
        return AnswerPayload(status, answer.formula_latex, infos, answer.qid)

    # -- calculation --

    def compute(self, qid: Optional[str] = None,
                formula: Optional[str] = None,
                bindings: Optional[Dict[str, float]] = None) -> dict:
        """Evaluate a formula (given directly, or looked up by qid).

        When both are given the formula wins and the qid only
        contributes known identifier values from the store.
        """
        bindings = dict(bindings or {})
        parts: Sequence[kb.IdentifierPart] = ()
        if qid is not None:
            try:
                item = self.store.item(qid)
            except LookupError:
                raise BadRequest("unknown qid %r" % qid)
            parts = tuple(self.store.get_parts(item))
        if formula:
            try:
                parsed = expr.parse_latex(formula)
            except expr.LatexSyntaxError as err:
                raise BadRequest("formula does not parse: %s" % err)
        elif qid is not None:
            try:
                parsed = expr.parse_latex(self.store.get_defining_formula(qid))
            except kb.NoFormula as err:
                raise BadRequest("item %s has no usable defining formula" % err.qid)
        else:
            raise BadRequest("provide a formula or a qid")
        try:
            result = calculate(CalculationRequest(parsed, bindings, parts))
        except MissingBindings as err:
            return {"status": "needs-values",
                    "missing": list(err.symbols),
                    "message": str(err)}
        except expr.MathDomainError as err:
            return {"status": "error", "message": str(err)}
        except ValueError as err:
            raise BadRequest(str(err))
        return {
            "status": "ok",
            "value": result.value,
            "solved_for": result.solved_for,
            "effective_bindings": dict(sorted(result.effective_bindings.items())),
            "constant_sources": dict(sorted(result.constant_sources.items())),
        }

    # -- lookup --

    def items(self, label: str, lang: str = "en") -> list:
        found = self.store.lookup_by_label(label, lang)
        return [
            {"qid": item.qid,
             "label": item.labels.get(lang) or item.labels.get("en", item.qid)}
            for item in found
        ]
