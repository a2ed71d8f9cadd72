from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
REPO_ROOT = TESTS_DIR.parent
FIXTURES = REPO_ROOT / "fixtures"

sys.path.insert(0, str(TESTS_DIR))


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def kb_dump_path() -> Path:
    return FIXTURES / "kb" / "items.jsonl"


@pytest.fixture(scope="session")
def wiki_dump_path() -> Path:
    return FIXTURES / "wiki" / "dump.xml"
