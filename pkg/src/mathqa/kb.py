"""Immutable in-memory knowledge base loaded from a JSON-lines dump.

Each line of the dump describes one item:

    {"qid": "Q11518",
     "labels": {"en": "Pythagorean theorem", "hi": "..."},
     "aliases": {"en": ["Pythagoras' theorem"]},
     "instance_of": ["Q65943"],
     "defining_formulae": ["c^2 = a^2 + b^2"],
     "qualities": [{"label": "area of plane shape",
                    "target_qid": null, "inline_formula": "..."}],
     "parts": [{"symbol": "r", "label": "radius",
                "value": null, "unit": null}]}

Formulae that fail to parse are kept but flagged, never dropped; lookups
run against labels and aliases normalized with :func:`normalize_label`.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from . import expr

logger = logging.getLogger(__name__)

__all__ = [
    "IdentifierPart",
    "KBError",
    "KBItem",
    "MalformedRecord",
    "NoFormula",
    "NoSuchQuality",
    "QualityLink",
    "Store",
    "ingest_dump",
    "normalize_label",
]

_QID_RE = re.compile(r"^Q[0-9]+$")

_APOSTROPHES = dict.fromkeys(map(ord, "’‘ʼ‛"), "'")
_HYPHENS = dict.fromkeys(map(ord, "–—‐−"), "-")
_TRAILING_RE = re.compile(r"[\s.,;:!?।]+$")


class KBError(Exception):
    pass


class MalformedRecord(KBError):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f"malformed record on line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


class NoFormula(KBError):
    def __init__(self, qid: str, had_unparseable: bool = False):
        detail = " (only unparseable formulae present)" if had_unparseable else ""
        super().__init__(f"{qid} has no usable formula{detail}")
        self.qid = qid
        self.had_unparseable = had_unparseable


class NoSuchQuality(KBError):
    def __init__(self, qid: str, label: str):
        super().__init__(f"{qid} has no quality matching {label!r}")
        self.qid = qid
        self.label = label


def normalize_label(text: str) -> str:
    """Case-fold and collapse whitespace; typographic apostrophes and
    hyphens become their ASCII forms; trailing punctuation is dropped."""
    text = text.translate(_APOSTROPHES).translate(_HYPHENS)
    text = re.sub(r"\s+", " ", text).strip()
    text = _TRAILING_RE.sub("", text)
    return text.lower()


@dataclass(frozen=True)
class QualityLink:
    property_label: str
    target_qid: Optional[str] = None
    inline_formula: Optional[str] = None


@dataclass(frozen=True)
class IdentifierPart:
    symbol: str
    label: str = ""
    value: Optional[float] = None
    unit: Optional[str] = None


@dataclass(frozen=True)
class KBItem:
    qid: str
    labels: Dict[str, str] = field(default_factory=dict)
    aliases: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    instance_of: Tuple[str, ...] = ()
    defining_formulae: Tuple[str, ...] = ()
    formula_parseable: Tuple[bool, ...] = ()
    qualities: Tuple[QualityLink, ...] = ()
    parts: Tuple[IdentifierPart, ...] = ()

    def numeric_qid(self) -> int:
        return int(self.qid[1:])


class Store:
    """Read-only item collection with a label index.

    Built once by ingest_dump and safe to share across threads."""

    def __init__(self, items: Dict[str, KBItem], unparseable_count: int):
        self._items = dict(items)
        self.unparseable_count = unparseable_count
        index: Dict[Tuple[str, str], List[str]] = {}
        for item in self._items.values():
            for lang, label in item.labels.items():
                index.setdefault((lang, normalize_label(label)), []).append(item.qid)
            for lang, names in item.aliases.items():
                for name in names:
                    index.setdefault((lang, normalize_label(name)), []).append(item.qid)
        self._index = {
            key: tuple(sorted(set(qids), key=lambda q: int(q[1:])))
            for key, qids in index.items()
        }

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self._items.values())

    def item(self, qid: str) -> KBItem:
        try:
            return self._items[qid]
        except KeyError:
            raise LookupError(f"no item {qid}") from None

    def has_item(self, qid: str) -> bool:
        return qid in self._items

    def lookup_by_label(self, label: str, lang: str = "en") -> List[KBItem]:
        """All items whose label or alias normalizes to the query,
        ordered by ascending numeric qid."""
        qids = self._index.get((lang, normalize_label(label)), ())
        return [self._items[q] for q in qids]

    def get_parts(self, item: KBItem) -> List[IdentifierPart]:
        return list(item.parts)

    def has_quality(self, item: KBItem, property_label: str) -> bool:
        wanted = normalize_label(property_label)
        return any(
            _quality_matches(normalize_label(link.property_label), wanted)
            for link in item.qualities)

    def get_defining_formula(self, item: Union[KBItem, str]) -> str:
        """First parseable entry of the item's defining formulae."""
        if isinstance(item, str):
            item = self.item(item)
        for latex, ok in zip(item.defining_formulae, item.formula_parseable):
            if ok:
                return latex
        raise NoFormula(item.qid, had_unparseable=bool(item.defining_formulae))

    def get_quality_formula(self, item: Union[KBItem, str], property_label: str) -> str:
        """Formula for a named quality of the item.

        A quality matches when its label equals the query or extends it
        with "<query> of ..." (so "area" finds "area of plane shape").
        An inline formula wins; otherwise the link target's defining
        formula is used."""
        if isinstance(item, str):
            item = self.item(item)
        wanted = normalize_label(property_label)
        for link in item.qualities:
            if _quality_matches(normalize_label(link.property_label), wanted):
                if link.inline_formula is not None:
                    if _parses(link.inline_formula):
                        return link.inline_formula
                    raise NoFormula(item.qid, had_unparseable=True)
                if link.target_qid is not None and self.has_item(link.target_qid):
                    return self.get_defining_formula(link.target_qid)
                raise NoFormula(item.qid)
        raise NoSuchQuality(item.qid, property_label)


def _quality_matches(have: str, wanted: str) -> bool:
    # exact label, or the "<wanted> of <something>" refinement form
    return have == wanted or have.startswith(wanted + " of")


def _parses(latex: str) -> bool:
    try:
        expr.parse_latex(latex)
        return True
    except expr.ExpressionError:
        return False


def ingest_dump(path: Union[str, Path]) -> Store:
    """Load a JSON-lines dump into a Store.

    Bad JSON, a bad qid, wrong field shapes or a duplicate qid abort the
    ingest with MalformedRecord carrying the 1-based line number."""
    items: Dict[str, KBItem] = {}
    unparseable = 0
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as err:
                raise MalformedRecord(line_number, f"invalid JSON: {err.msg}") from None
            item, bad = _build_item(raw, line_number)
            unparseable += bad
            if item.qid in items:
                raise MalformedRecord(line_number, f"duplicate qid {item.qid}")
            items[item.qid] = item
    if unparseable:
        logger.warning("ingest kept %d unparseable formula(e)", unparseable)
    store = Store(items, unparseable)
    logger.info("ingested %d items from %s", len(store), path)
    return store


def _build_item(raw: object, line_number: int) -> Tuple[KBItem, int]:
    def fail(reason: str):
        raise MalformedRecord(line_number, reason)

    if not isinstance(raw, dict):
        fail("record is not an object")
    qid = raw.get("qid")
    if not isinstance(qid, str) or not _QID_RE.match(qid):
        fail(f"bad qid {qid!r}")

    labels = raw.get("labels", {})
    if not isinstance(labels, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in labels.items()):
        fail("labels must map language to string")

    aliases_raw = raw.get("aliases", {})
    if not isinstance(aliases_raw, dict):
        fail("aliases must be an object")
    aliases = {}
    for lang, names in aliases_raw.items():
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            fail(f"aliases for {lang!r} must be a list of strings")
        aliases[lang] = tuple(names)

    instance_of = raw.get("instance_of", [])
    if not isinstance(instance_of, list) or not all(
            isinstance(q, str) and _QID_RE.match(q) for q in instance_of):
        fail("instance_of must be a list of qids")

    formulae = raw.get("defining_formulae", [])
    if not isinstance(formulae, list) or not all(isinstance(f, str) for f in formulae):
        fail("defining_formulae must be a list of strings")
    parseable = tuple(_parses(f) for f in formulae)
    bad_count = sum(1 for ok in parseable if not ok)
    for latex, ok in zip(formulae, parseable):
        if not ok:
            logger.warning("%s: keeping unparseable formula %r", qid, latex)

    qualities = []
    for entry in raw.get("qualities", []):
        if not isinstance(entry, dict) or not isinstance(entry.get("label"), str):
            fail("quality entries need a string label")
        target = entry.get("target_qid")
        inline = entry.get("inline_formula")
        if target is not None and (not isinstance(target, str) or not _QID_RE.match(target)):
            fail(f"bad quality target {target!r}")
        if inline is not None and not isinstance(inline, str):
            fail("inline_formula must be a string")
        if inline is not None and not _parses(inline):
            bad_count += 1
            logger.warning("%s: keeping unparseable quality formula %r", qid, inline)
        qualities.append(QualityLink(entry["label"], target, inline))

    parts = []
    for entry in raw.get("parts", []):
        if not isinstance(entry, dict) or not isinstance(entry.get("symbol"), str):
            fail("part entries need a string symbol")
        value = entry.get("value")
        if value is not None and not isinstance(value, (int, float)):
            fail(f"bad part value {value!r}")
        unit = entry.get("unit")
        if unit is not None and not isinstance(unit, str):
            fail(f"bad part unit {unit!r}")
        parts.append(IdentifierPart(
            symbol=entry["symbol"],
            label=entry.get("label", ""),
            value=float(value) if value is not None else None,
            unit=unit,
        ))

    item = KBItem(
        qid=qid,
        labels=dict(labels),
        aliases=aliases,
        instance_of=tuple(instance_of),
        defining_formulae=tuple(formulae),
        formula_parseable=parseable,
        qualities=tuple(qualities),
        parts=tuple(parts),
    )
    return item, bad_count
