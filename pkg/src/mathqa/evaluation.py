"""Scoring for seeding and retrieval runs.

Two kinds of input are scored:

* Annotation files: CSV with header ``id,name,expected,observed``.
  ``expected`` is a human relevance judgment (``relevant`` or
  ``non-relevant``); ``observed`` records what the system did, either as
  ``retrieved``/``not-retrieved`` (seeding runs) or ``true``/``false``
  (retrieval runs).  They are tabulated into a contingency matrix from
  which precision, recall, F1 and accuracy are derived.

* Question files: one ``question<TAB>expected`` line each, where
  ``expected`` is the LaTeX formula the system should retrieve, or the
  word ``ABSENT`` when correct behaviour is to retrieve nothing.  Each
  question runs through the full parse/retrieve path against a store.

F1 is computed from unrounded precision and recall.  Any metric whose
denominator is zero is reported as None rather than raising.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from . import expr, kb, questions, retrieval

_EXPECTED_LABELS = ("relevant", "non-relevant")
_POSITIVE_LABELS = ("retrieved", "true")
_NEGATIVE_LABELS = ("not-retrieved", "false")

ABSENT = "ABSENT"


class EvalError(Exception):
    """Base class for scoring errors."""


class AnnotationError(EvalError):
    """An annotation file could not be read; carries the offending line."""

    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        self.reason = reason
        super().__init__("line %d: %s" % (line_number, reason))


class DuplicateId(AnnotationError):
    def __init__(self, line_number: int, annotation_id: int):
        self.annotation_id = annotation_id
        super().__init__(line_number, "duplicate id %d" % annotation_id)


class UnknownLabel(AnnotationError):
    def __init__(self, line_number: int, label: str):
        self.label = label
        super().__init__(line_number, "unknown label %r" % label)


class QuestionsFileError(EvalError):
    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        self.reason = reason
        super().__init__("line %d: %s" % (line_number, reason))


@dataclass(frozen=True)
class Annotation:
    id: int
    name: str
    expected: str  # "relevant" | "non-relevant"
    observed: str  # "retrieved" | "not-retrieved" | "true" | "false"


@dataclass(frozen=True)
class ContingencyMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        for field in ("tp", "fp", "fn", "tn"):
            if getattr(self, field) < 0:
                raise ValueError("%s must be non-negative" % field)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class Metrics:
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]
    accuracy: Optional[float]


@dataclass(frozen=True)
class QuestionVerdict:
    question: str
    expected_latex: Optional[str]  # None when the row expects no retrieval
    retrieved_latex: Optional[str]
    verdict: bool


@dataclass(frozen=True)
class RetrievalScore:
    verdicts: tuple
    accuracy: Optional[float]


def read_annotations(path: Union[str, Path]) -> tuple:
    """Parse an annotation CSV, validating labels and id uniqueness."""
    rows = []
    seen_ids = set()
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [c.strip().lower() for c in header] != [
            "id", "name", "expected", "observed",
        ]:
            raise AnnotationError(1, "expected header id,name,expected,observed")
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 4:
                raise AnnotationError(line, "expected 4 fields, got %d" % len(row))
            raw_id, name, expected, observed = (cell.strip() for cell in row)
            try:
                annotation_id = int(raw_id)
            except ValueError:
                raise AnnotationError(line, "id %r is not an integer" % raw_id)
            if annotation_id in seen_ids:
                raise DuplicateId(line, annotation_id)
            seen_ids.add(annotation_id)
            expected = expected.lower()
            observed = observed.lower()
            if expected not in _EXPECTED_LABELS:
                raise UnknownLabel(line, expected)
            if observed not in _POSITIVE_LABELS + _NEGATIVE_LABELS:
                raise UnknownLabel(line, observed)
            rows.append(Annotation(annotation_id, name, expected, observed))
    return tuple(rows)


def tabulate(annotations: Sequence[Annotation]) -> ContingencyMatrix:
    tp = fp = fn = tn = 0
    for a in annotations:
        relevant = a.expected == "relevant"
        positive = a.observed in _POSITIVE_LABELS
        if relevant and positive:
            tp += 1
        elif positive:
            fp += 1
        elif relevant:
            fn += 1
        else:
            tn += 1
    return ContingencyMatrix(tp, fp, fn, tn)


def metrics(m: ContingencyMatrix) -> Metrics:
    precision = m.tp / (m.tp + m.fp) if m.tp + m.fp else None
    recall = m.tp / (m.tp + m.fn) if m.tp + m.fn else None
    if precision is not None and recall is not None and precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1 = None
    accuracy = (m.tp + m.tn) / m.total if m.total else None
    return Metrics(precision, recall, f1, accuracy)


def _read_questions(path: Union[str, Path]) -> list:
    """Yield (line_number, question, expected_latex-or-None) triples."""
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise QuestionsFileError(
                    line_number, "expected 2 tab-separated fields, got %d" % len(fields))
            question, expected = fields[0].strip(), fields[1].strip()
            if not question:
                raise QuestionsFileError(line_number, "empty question")
            if expected == ABSENT:
                rows.append((line_number, question, None))
                continue
            try:
                expr.parse_latex(expected)
            except expr.LatexSyntaxError as err:
                raise QuestionsFileError(
                    line_number, "expected formula does not parse: %s" % err)
            rows.append((line_number, question, expected))
    return rows


def _run_question(text: str, store: kb.Store):
    """Parse and retrieve, returning the answer or None on any miss."""
    for lang in ("en", "hi"):
        try:
            query = questions.parse_question(text, lang=lang)
        except questions.NoParse:
            continue
        try:
            return retrieval.retrieve(query, store, lang=lang)
        except (retrieval.ItemNotFound, retrieval.Ambiguous,
                kb.NoFormula, kb.NoSuchQuality):
            return None
    return None


def score_retrieval(store: kb.Store, questions_path: Union[str, Path]) -> RetrievalScore:
    """Run every question in the file through parse/retrieve and grade it.

    A row with a formula is correct when the retrieved formula's syntax
    tree equals the expected one; an ABSENT row is correct when nothing
    is retrieved.  Verdicts keep file order.
    """
    verdicts = []
    for _, question, expected in _read_questions(questions_path):
        answer = _run_question(question, store)
        retrieved_latex = answer.formula_latex if answer is not None else None
        if expected is None:
            verdict = answer is None
        else:
            verdict = (answer is not None
                       and answer.formula == expr.parse_latex(expected))
        verdicts.append(QuestionVerdict(question, expected, retrieved_latex, verdict))
    accuracy = (sum(v.verdict for v in verdicts) / len(verdicts)
                if verdicts else None)
    return RetrievalScore(tuple(verdicts), accuracy)


def _fmt(value: Optional[float]) -> str:
    return "n/a" if value is None else "%.4f" % value


def render_report(matrix: ContingencyMatrix, scores: Metrics) -> str:
    """Plain-text table of the matrix and its derived metrics."""
    lines = [
        "%-14s %12s %14s" % ("", "retrieved", "not-retrieved"),
        "%-14s %12d %14d" % ("relevant", matrix.tp, matrix.fn),
        "%-14s %12d %14d" % ("non-relevant", matrix.fp, matrix.tn),
        "",
        "precision  %s" % _fmt(scores.precision),
        "recall     %s" % _fmt(scores.recall),
        "f1         %s" % _fmt(scores.f1),
        "accuracy   %s" % _fmt(scores.accuracy),
    ]
    return "\n".join(lines) + "\n"


def report_json(matrix: ContingencyMatrix, scores: Metrics) -> dict:
    return {
        "matrix": {"tp": matrix.tp, "fp": matrix.fp,
                   "fn": matrix.fn, "tn": matrix.tn},
        "metrics": {"precision": scores.precision, "recall": scores.recall,
                    "f1": scores.f1, "accuracy": scores.accuracy},
    }


def render_verdicts(score: RetrievalScore) -> str:
    lines = []
    for v in score.verdicts:
        lines.append("%-5s %s" % ("true" if v.verdict else "false", v.question))
    lines.append("")
    lines.append("accuracy   %s" % _fmt(score.accuracy))
    return "\n".join(lines) + "\n"


def verdicts_json(score: RetrievalScore) -> dict:
    return {
        "verdicts": [
            {"question": v.question, "expected": v.expected_latex,
             "retrieved": v.retrieved_latex, "verdict": v.verdict}
            for v in score.verdicts
        ],
        "accuracy": score.accuracy,
    }
