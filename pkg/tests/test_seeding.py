import logging
from pathlib import Path

import pytest

from mathqa import kb, seeding
from mathqa.questions import PropertyQuery
from mathqa.retrieval import retrieve
from mathqa.seeding import (
    GeometryConfig,
    SeedStatement,
    WikiPage,
    XmlError,
    classify,
    collect_statements,
    emit,
    extract_general,
    extract_geometry,
    scan_dump,
)

MATH_TITLES = [
    "Circle",
    "Antiprism",
    "Gaussian function",
    "Coefficient of variation",
    "Holonomy",
    "Hyperfocal distance",
    "Plastic number",
]


@pytest.fixture(scope="module")
def pages(wiki_dump_path):
    return {p.title: p for p in scan_dump(wiki_dump_path)}


@pytest.fixture(scope="module")
def statements(wiki_dump_path):
    return collect_statements(wiki_dump_path)


# --- scanning ---

def test_only_math_pages_come_out(pages):
    assert sorted(pages) == sorted(MATH_TITLES)


def test_malformed_markup_skips_the_page_with_a_warning(wiki_dump_path, caplog):
    with caplog.at_level(logging.WARNING, logger="mathqa.seeding"):
        titles = [p.title for p in scan_dump(wiki_dump_path)]
    assert "Felix Klein" not in titles
    assert any("Felix Klein" in r.message for r in caplog.records)


def test_chem_markup_is_not_math(pages):
    assert "Chemical equation" not in pages


def test_sections_and_span_indices(pages):
    circle = pages["Circle"]
    assert [h for h, _ in circle.sections] == ["", "History", "Circumference", "Area enclosed"]
    assert circle.math_spans[0] == (1, "\\pi")
    assert circle.math_spans[1][0] == 2
    assert circle.math_spans[2][0] == 3
    assert circle.categories == ("Circles", "Elementary shapes", "Conic sections")


def test_template_enclosed_span_is_found(pages):
    spans = [latex for _, latex in pages["Plastic number"].math_spans]
    assert spans == ["x^3 = x + 1"]


def test_display_attribute_is_handled(pages):
    section, latex = pages["Hyperfocal distance"].math_spans[0]
    assert section == 0
    assert latex == "H = \\frac{f^2}{Nc} + f"


def test_dump_id_comes_from_the_dump(pages):
    assert pages["Circle"].dump_id == "enwiki"


def test_broken_xml_reports_byte_offset(tmp_path):
    bad = tmp_path / "broken.xml"
    bad.write_text("<mediawiki><page><title>x</title></wrong></mediawiki>")
    with pytest.raises(XmlError) as err:
        list(scan_dump(bad))
    assert err.value.byte_offset > 0
    assert "byte" in str(err.value)


def test_missing_dump_is_an_io_error(tmp_path):
    with pytest.raises(OSError):
        list(scan_dump(tmp_path / "nope.xml"))


# --- classification ---

def test_geometry_category_match(pages):
    assert classify(pages["Circle"]) == "geometry"
    assert classify(pages["Antiprism"]) == "geometry"


def test_general_pages(pages):
    for title in ["Gaussian function", "Holonomy", "Plastic number"]:
        assert classify(pages[title]) == "general"


def test_no_categories_means_general():
    page = WikiPage(title="Bare", math_spans=((0, "x"),), sections=(("", ""),))
    assert classify(page) == "general"


def test_category_match_is_normalized():
    page = WikiPage(
        title="Oddly tagged",
        categories=("  PLATONIC   SOLIDS .",),
        math_spans=((0, "x"),),
        sections=(("", ""),),
    )
    assert classify(page) == "geometry"


def test_custom_config_overrides_the_category_list(pages):
    cfg = GeometryConfig(categories=("Differential geometry",))
    assert classify(pages["Holonomy"], cfg) == "geometry"
    assert classify(pages["Circle"], cfg) == "general"


# --- extraction ---

def test_general_takes_the_first_span(pages):
    statement = extract_general(pages["Gaussian function"])
    assert statement.property_label == "defining formula"
    assert statement.formula_latex == \
        "f\\left(x\\right) = a e^{- { \\frac{(x-b)^2 }{ 2 c^2} } }"
    assert statement.source == ("enwiki", "Gaussian function", 0)

    statement = extract_general(pages["Coefficient of variation"])
    assert statement.formula_latex == "c_{v} = \\frac{\\sigma}{\\mu}"


def test_general_on_empty_page_is_none():
    assert extract_general(WikiPage(title="Empty")) is None


def test_geometry_extraction_on_the_circle(pages):
    got = {s.property_label: s for s in extract_geometry(pages["Circle"])}
    assert set(got) == {"circumference", "area"}
    assert got["circumference"].formula_latex == "C = 2 \\pi r = \\pi d"
    assert got["area"].formula_latex == "\\mathrm{Area} = \\pi r^2"
    # the History section's span never becomes a statement
    assert all(s.formula_latex != "\\pi" for s in got.values())


def test_surface_area_heading_matches_area_keyword(pages):
    got = {s.property_label for s in extract_geometry(pages["Antiprism"])}
    assert got == {"area", "volume"}


def test_first_section_with_a_span_wins():
    page = WikiPage(
        title="Doubly sectioned",
        sections=(("", ""), ("Volume approximation", ""), ("Volume", "")),
        math_spans=((1, "V_1"), (2, "V_2")),
    )
    got = extract_geometry(page)
    assert [(s.property_label, s.formula_latex) for s in got] == [("volume", "V_1")]


def test_sections_without_spans_do_not_burn_the_property():
    page = WikiPage(
        title="Sparse",
        sections=(("", ""), ("Volume", "prose only"), ("Volume formula", "")),
        math_spans=((2, "V = Bh"),),
    )
    got = extract_geometry(page)
    assert [(s.property_label, s.formula_latex) for s in got] == [("volume", "V = Bh")]


# --- whole-dump properties ---

def test_statement_counts(statements):
    general = [s for s in statements if s.property_label == "defining formula"]
    geometry = [s for s in statements if s.property_label != "defining formula"]
    assert len(general) == 5
    assert len(geometry) == 4
    assert len(statements) == 9


def test_verbatim_provenance(statements, wiki_dump_path):
    raw = Path(wiki_dump_path).read_text(encoding="utf-8")
    for s in statements:
        assert s.formula_latex in raw, s.formula_latex


def test_extraction_is_exclusive_per_page(statements):
    by_page = {}
    for s in statements:
        by_page.setdefault(s.page_title, set()).add(s.property_label)
    for page, props in by_page.items():
        assert props == {"defining formula"} or "defining formula" not in props, page


def test_cardinality(statements):
    seen = set()
    for s in statements:
        key = (s.page_title, s.property_label)
        assert key not in seen
        seen.add(key)


# --- emission ---

def test_tsv_round(statements, tmp_path):
    out = tmp_path / "seed.tsv"
    emit(statements, out, "tsv")
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "page_title\tproperty_label\tformula_latex\tsource"
    assert len(lines) == len(statements) + 1
    assert lines[1].startswith("Antiprism\tarea\t")
    assert all(len(line.split("\t")) == 4 for line in lines)


def test_empty_statement_list_keeps_the_header(tmp_path):
    out = tmp_path / "seed.tsv"
    emit([], out, "tsv")
    assert out.read_text(encoding="utf-8") == \
        "page_title\tproperty_label\tformula_latex\tsource\n"


def test_rerun_is_byte_identical(wiki_dump_path, tmp_path):
    first, second = tmp_path / "a.tsv", tmp_path / "b.tsv"
    emit(collect_statements(wiki_dump_path), first, "tsv")
    emit(collect_statements(wiki_dump_path), second, "tsv")
    assert first.read_bytes() == second.read_bytes()

    third, fourth = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    emit(collect_statements(wiki_dump_path), third, "kbdump")
    emit(collect_statements(wiki_dump_path), fourth, "kbdump")
    assert third.read_bytes() == fourth.read_bytes()


def test_unknown_format_rejected(tmp_path):
    with pytest.raises(ValueError):
        emit([], tmp_path / "x", "yaml")


def test_kbdump_is_ingestable_and_usable(statements, tmp_path):
    out = tmp_path / "seed.jsonl"
    emit(statements, out, "kbdump")
    store = kb.ingest_dump(out)
    assert len(store) == 7
    assert store.unparseable_count == 1  # the holonomy span

    qids = [item.qid for item in store]
    assert all(len(q) == 9 and q.startswith("Q9") for q in qids)

    answer = retrieve(PropertyQuery("antiprism", "volume"), store)
    assert answer.provenance == "has-quality"
    answer = retrieve(PropertyQuery("circle", "circumference"), store)
    assert answer.formula_latex == "C = 2 \\pi r = \\pi d"


def test_target_qid_passes_through_kbdump(tmp_path):
    statement = SeedStatement(
        page_title="Sphere",
        property_label="volume",
        formula_latex="V = \\frac{4}{3} \\pi r^3",
        source=("test", "Sphere", 0),
        target_qid="Q12507",
    )
    out = tmp_path / "seed.jsonl"
    emit([statement], out, "kbdump")
    store = kb.ingest_dump(out)
    assert store.has_item("Q12507")


def test_synthetic_qids_are_stable_and_distinct(statements):
    titles = {s.page_title for s in statements}
    qids = {t: seeding._synthetic_qid(t) for t in titles}
    assert len(set(qids.values())) == len(titles)
    assert qids == {t: seeding._synthetic_qid(t) for t in titles}
