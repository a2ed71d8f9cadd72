"""Turn a natural-language question into a structured query.

English questions go through two fixed templates ("what is the formula
for X", "what is the <property> of a X"); Hindi questions go through
patterns loaded from a tab-separated data file so new phrasings can be
added without touching code. Anything that fails both but parses as
LaTeX becomes a DirectFormula; everything else raises NoParse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from . import expr
from .kb import normalize_label

__all__ = [
    "PREDICATES",
    "DirectFormula",
    "FormulaQuery",
    "HindiPatterns",
    "NoParse",
    "PatternError",
    "PropertyQuery",
    "load_hindi_patterns",
    "parse_question",
]

PREDICATES = (
    "volume",
    "area",
    "circumference",
    "perimeter",
    "circumradius",
    "inradius",
    "median",
)


class NoParse(Exception):
    def __init__(self, text: str):
        super().__init__(f"could not understand the question: {text!r}")
        self.text = text


class PatternError(Exception):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f"pattern file line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


@dataclass(frozen=True)
class FormulaQuery:
    subject: str


@dataclass(frozen=True)
class PropertyQuery:
    subject: str
    predicate: str


@dataclass(frozen=True)
class DirectFormula:
    latex: str


@dataclass(frozen=True)
class HindiPatterns:
    rules: Tuple[Tuple[re.Pattern, str], ...]
    stems: Dict[str, str]
    examples: Tuple[Tuple[str, str, str], ...]


_ARTICLE = r"(?:a|an|the)\s+"
_EN_FORMULA = re.compile(
    r"^what(?:'s| is)\s+the\s+formula\s+(?:for|of)\s+(?:%s)?(?P<subject>.+)$" % _ARTICLE)
_EN_PROPERTY = re.compile(
    r"^what(?:'s| is)\s+the\s+(?P<predicate>%s)\s+of\s+(?:%s)?(?P<subject>.+)$"
    % ("|".join(PREDICATES), _ARTICLE))

_PLACEHOLDER = "<X>"


def _compile_pattern(text: str, line_number: int) -> re.Pattern:
    if text.count(_PLACEHOLDER) != 1:
        raise PatternError(line_number, "pattern needs exactly one <X>")
    # normalize around a sentinel so the <X> boundaries keep their spacing
    sentinel = "\x00"
    normalized = normalize_label(text.replace(_PLACEHOLDER, sentinel))
    before, after = normalized.split(sentinel)
    return re.compile(
        "^" + re.escape(before) + "(?P<subject>.+?)" + re.escape(after) + "$")


def _parse_pattern_lines(lines: List[str]) -> HindiPatterns:
    keywords: Dict[str, str] = {}
    stems: Dict[str, str] = {}
    rules = []
    examples = []
    for line_number, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if line.startswith("#example:"):
            fields = line.split("\t")
            if len(fields) != 4:
                raise PatternError(line_number, "example needs question, predicate, subject")
            examples.append((fields[1].strip(), fields[2].strip(), fields[3].strip()))
            continue
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0].strip() or not fields[1].strip():
            raise PatternError(line_number, "expected two tab-separated columns")
        first, second = fields[0].strip(), fields[1].strip()
        if _PLACEHOLDER in first:
            if second == "formula" or second in PREDICATES:
                predicate = second
            elif second in keywords:
                predicate = keywords[second]
            else:
                raise PatternError(line_number, f"unknown predicate {second!r}")
            rules.append((_compile_pattern(first, line_number), predicate))
        elif second == "formula" or second in PREDICATES:
            keywords[first] = second
        else:
            stems[first] = second
    return HindiPatterns(rules=tuple(rules), stems=stems, examples=tuple(examples))


def load_hindi_patterns(path: Optional[Union[str, Path]] = None) -> HindiPatterns:
    if path is None:
        return _default_patterns()
    text = Path(path).read_text(encoding="utf-8")
    return _parse_pattern_lines(text.splitlines())


@lru_cache(maxsize=1)
def _default_patterns() -> HindiPatterns:
    source = resources.files("mathqa").joinpath("data/hindi_patterns.tsv")
    return _parse_pattern_lines(source.read_text(encoding="utf-8").splitlines())


def _apply_stems(subject: str, stems: Dict[str, str]) -> str:
    return " ".join(stems.get(word, word) for word in subject.split())


def _as_query(predicate: str, subject: str):
    if predicate == "formula":
        return FormulaQuery(subject)
    return PropertyQuery(subject, predicate)


def parse_question(
    text: str,
    lang: str = "en",
    patterns: Optional[HindiPatterns] = None,
) -> Union[FormulaQuery, PropertyQuery, DirectFormula]:
    """Ordered matching: language templates first, then direct LaTeX."""
    if lang not in ("en", "hi"):
        raise ValueError(f"unsupported language {lang!r}")
    stripped = text.strip()
    if not stripped:
        raise NoParse(text)
    normalized = normalize_label(stripped)

    if lang == "en":
        match = _EN_FORMULA.match(normalized)
        if match:
            return FormulaQuery(match.group("subject").strip())
        match = _EN_PROPERTY.match(normalized)
        if match:
            return PropertyQuery(
                match.group("subject").strip(), match.group("predicate"))
    else:
        if patterns is None:
            patterns = _default_patterns()
        for rule, predicate in patterns.rules:
            match = rule.match(normalized)
            if match:
                subject = _apply_stems(match.group("subject").strip(), patterns.stems)
                return _as_query(predicate, subject)

    try:
        expr.parse_latex(stripped)
    except expr.ExpressionError:
        raise NoParse(text) from None
    return DirectFormula(latex=stripped)
