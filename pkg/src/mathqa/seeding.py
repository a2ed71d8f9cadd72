"""Harvest defining formulae from a MediaWiki XML export.

Pages containing math markup are streamed out of the dump; geometry
pages (recognized by category) contribute one formula per property
section, every other math page contributes its first formula. The
result can be written as a statement TSV or as a knowledge-store dump.
"""

from __future__ import annotations

import bisect
import hashlib
import json
import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .kb import normalize_label

logger = logging.getLogger(__name__)

__all__ = [
    "GEOMETRY_CATEGORIES",
    "PROPERTY_KEYWORDS",
    "GeometryConfig",
    "SeedStatement",
    "WikiPage",
    "XmlError",
    "classify",
    "collect_statements",
    "emit",
    "extract_general",
    "extract_geometry",
    "scan_dump",
]

GEOMETRY_CATEGORIES = (
    "Elementary geometry",
    "Theorems in geometry",
    "Polygons",
    "Elementary shapes",
    "Quadrilateral",
    "Area",
    "Volume",
    "Conic sections",
    "Geometric centers",
    "Circles",
    "Curves",
    "Surfaces",
    "Cubes",
    "Platonic solids",
    "Polytopes",
    "Euclidean plane geometry",
)

PROPERTY_KEYWORDS = (
    "Area",
    "Volume",
    "Circumference",
    "Perimeter",
    "Circumradius",
    "Inradius",
    "Median",
)

GENERAL_PROPERTY = "defining formula"


class XmlError(Exception):
    def __init__(self, byte_offset: int, detail: str):
        super().__init__(f"broken XML near byte {byte_offset}: {detail}")
        self.byte_offset = byte_offset
        self.detail = detail


@dataclass(frozen=True)
class GeometryConfig:
    categories: Tuple[str, ...] = GEOMETRY_CATEGORIES
    property_keywords: Tuple[str, ...] = PROPERTY_KEYWORDS


@dataclass(frozen=True)
class WikiPage:
    title: str
    categories: Tuple[str, ...] = ()
    # (heading, body); index 0 is the lead with an empty heading
    sections: Tuple[Tuple[str, str], ...] = ()
    # (section-index, latex) in document order
    math_spans: Tuple[Tuple[int, str], ...] = ()
    dump_id: str = ""


@dataclass(frozen=True)
class SeedStatement:
    page_title: str
    property_label: str
    formula_latex: str
    source: Tuple[str, str, int]  # (dump-id, page-title, span-index)
    target_qid: Optional[str] = None


_MATH_OPEN = re.compile(r"<math(?:\s[^>]*)?>", re.IGNORECASE)
_MATH_SPAN = re.compile(r"<math(\s[^>]*)?>(.*?)</math\s*>", re.IGNORECASE | re.DOTALL)
_HEADING = re.compile(r"(?m)^(={2,6})[ \t]*(.+?)[ \t]*\1[ \t]*$")
_CATEGORY = re.compile(r"\[\[\s*Category\s*:\s*([^\]|]+?)\s*(?:\|[^\]]*)?\]\]", re.IGNORECASE)


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _byte_offset(path: Union[str, Path], line: int, column: int) -> int:
    offset = 0
    with open(path, "rb") as fh:
        for _ in range(line - 1):
            chunk = fh.readline()
            if not chunk:
                break
            offset += len(chunk)
    return offset + column


def _build_page(title: str, text: str, dump_id: str) -> Optional[WikiPage]:
    opens = sum(1 for _ in _MATH_OPEN.finditer(text))
    matches = list(_MATH_SPAN.finditer(text))
    if opens != len(matches):
        logger.warning("%s: malformed math markup, page skipped", title)
        return None

    headings = list(_HEADING.finditer(text))
    starts = [0] + [h.start() for h in headings]
    sections: List[Tuple[str, str]] = []
    for index, start in enumerate(starts):
        end = starts[index + 1] if index + 1 < len(starts) else len(text)
        if index == 0:
            sections.append(("", text[:end]))
        else:
            heading = headings[index - 1]
            sections.append((heading.group(2), text[heading.end():end]))

    spans: List[Tuple[int, str]] = []
    for match in matches:
        attrs = (match.group(1) or "").lower()
        if "chem" in attrs:
            continue
        section_index = bisect.bisect_right(starts, match.start()) - 1
        spans.append((section_index, match.group(2).strip()))
    if not spans:
        return None
    return WikiPage(
        title=title,
        categories=tuple(m.group(1) for m in _CATEGORY.finditer(text)),
        sections=tuple(sections),
        math_spans=tuple(spans),
        dump_id=dump_id,
    )


def scan_dump(path: Union[str, Path]) -> Iterator[WikiPage]:
    """Stream the math-bearing pages of a MediaWiki export."""
    dump_id = Path(path).name
    context = ET.iterparse(str(path), events=("end",))
    try:
        for _, elem in context:
            name = _local(elem.tag)
            if name == "dbname" and elem.text:
                dump_id = elem.text.strip()
            if name != "page":
                continue
            title = ""
            namespace = "0"
            text = ""
            for child in elem.iter():
                local = _local(child.tag)
                if local == "title" and child.text:
                    title = child.text
                elif local == "ns" and child.text:
                    namespace = child.text.strip()
                elif local == "text" and child.text:
                    text = child.text
            elem.clear()
            if namespace != "0" or not title or not text:
                continue
            page = _build_page(title, text, dump_id)
            if page is not None:
                yield page
    except ET.ParseError as err:
        line, column = err.position
        raise XmlError(_byte_offset(path, line, column), str(err)) from None


def classify(page: WikiPage, cfg: Optional[GeometryConfig] = None) -> str:
    cfg = cfg or GeometryConfig()
    wanted = {normalize_label(c) for c in cfg.categories}
    if any(normalize_label(c) in wanted for c in page.categories):
        return "geometry"
    return "general"


def extract_general(page: WikiPage) -> Optional[SeedStatement]:
    if not page.math_spans:
        return None
    _, latex = page.math_spans[0]
    return SeedStatement(
        page_title=page.title,
        property_label=GENERAL_PROPERTY,
        formula_latex=latex,
        source=(page.dump_id, page.title, 0),
    )


def extract_geometry(page: WikiPage, cfg: Optional[GeometryConfig] = None) -> List[SeedStatement]:
    cfg = cfg or GeometryConfig()
    first_span_in_section: Dict[int, Tuple[int, str]] = {}
    for span_index, (section_index, latex) in enumerate(page.math_spans):
        first_span_in_section.setdefault(section_index, (span_index, latex))

    statements: List[SeedStatement] = []
    taken = set()
    for section_index, (heading, _body) in enumerate(page.sections):
        if section_index not in first_span_in_section:
            continue
        lowered = heading.lower()
        for keyword in cfg.property_keywords:
            prop = keyword.lower()
            if prop in taken or prop not in lowered:
                continue
            span_index, latex = first_span_in_section[section_index]
            statements.append(SeedStatement(
                page_title=page.title,
                property_label=prop,
                formula_latex=latex,
                source=(page.dump_id, page.title, span_index),
            ))
            taken.add(prop)
    return statements


def collect_statements(
    dump_path: Union[str, Path],
    cfg: Optional[GeometryConfig] = None,
) -> List[SeedStatement]:
    cfg = cfg or GeometryConfig()
    statements: List[SeedStatement] = []
    for page in scan_dump(dump_path):
        if classify(page, cfg) == "geometry":
            statements.extend(extract_geometry(page, cfg))
        else:
            statement = extract_general(page)
            if statement is not None:
                statements.append(statement)
    return statements


def _flatten(text: str) -> str:
    # keep TSV lines one-per-statement even for display-style spans
    return re.sub(r"[\t\r\n]+", " ", text)


def _synthetic_qid(title: str) -> str:
    digest = hashlib.md5(title.encode("utf-8")).hexdigest()
    return "Q9%07d" % (int(digest[:12], 16) % 10 ** 7)


def emit(statements: List[SeedStatement], out_path: Union[str, Path], format: str = "tsv") -> None:
    if format == "tsv":
        _emit_tsv(statements, out_path)
    elif format == "kbdump":
        _emit_kbdump(statements, out_path)
    else:
        raise ValueError(f"unknown format {format!r}")


def _emit_tsv(statements: List[SeedStatement], out_path: Union[str, Path]) -> None:
    rows = ["page_title\tproperty_label\tformula_latex\tsource"]
    for s in sorted(statements, key=lambda s: (s.page_title, s.property_label)):
        source = "%s:%s:%d" % s.source
        rows.append("\t".join([
            _flatten(s.page_title),
            s.property_label,
            _flatten(s.formula_latex),
            source,
        ]))
    Path(out_path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def _emit_kbdump(statements: List[SeedStatement], out_path: Union[str, Path]) -> None:
    by_title: Dict[str, List[SeedStatement]] = {}
    for s in statements:
        by_title.setdefault(s.page_title, []).append(s)

    lines = []
    for title in sorted(by_title):
        group = sorted(by_title[title], key=lambda s: s.property_label)
        qid = next((s.target_qid for s in group if s.target_qid), None) or _synthetic_qid(title)
        formulae = [s.formula_latex for s in group if s.property_label == GENERAL_PROPERTY]
        qualities = [
            {"label": s.property_label, "target_qid": None, "inline_formula": s.formula_latex}
            for s in group if s.property_label != GENERAL_PROPERTY
        ]
        record = {
            "qid": qid,
            "labels": {"en": title},
            "aliases": {},
            "instance_of": ["Q815741"] if qualities else [],
            "defining_formulae": formulae,
            "qualities": qualities,
            "parts": [],
        }
        lines.append(json.dumps(record, ensure_ascii=False, sort_keys=True))
    Path(out_path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
