from pathlib import Path

import pytest

import livesession
from livesession.harness import get_entry
from livesession.syntax import parse_env, parse_type

CORPUS_DIR = Path(livesession.__file__).parent / "corpus"
GOLDEN_DIR = Path(__file__).resolve().parent.parent / "docs" / "golden"



def corpus_path(name):
    return str(CORPUS_DIR / name)


def sty(name):
    return parse_type((CORPUS_DIR / f"{name}.sty").read_text())


@pytest.fixture(scope="session")
def t_p():
    return sty("t_p")


@pytest.fixture(scope="session")
def t_d():
    return sty("t_d")


@pytest.fixture(scope="session")
def t_e():
    return sty("t_e")


@pytest.fixture(scope="session")
def shopping_env():
    return parse_env((CORPUS_DIR / "shopping.env").read_text())


@pytest.fixture(scope="session")
def shop_d():
    return get_entry("shopping_d")


@pytest.fixture(scope="session")
def shop_d0():
    return get_entry("shopping_d0")


@pytest.fixture(scope="session")
def delivery():
    return get_entry("delivery_d")


# criterion number -> (title, passed, detail, seconds); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail, secs = ACCEPTANCE[n]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {n:2d}. {title} ({secs:.2f}s) {detail}".rstrip())
