import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gerst.examples import load_spec  # noqa: E402
from gerst.hodge import HodgePackage, kuranishi_expand  # noqa: E402
from gerst.models import build_complex_model  # noqa: E402

ALL_KEYS = ("heisenberg-c", "iwasawa", "filiform-4", "cxn1n2-k1-k2", "nakamura-generic",
            "nakamura-pi", "nak-family", "tyy-family", "torus-1", "torus-2", "torus-3")


def _freeze(params):
    return tuple(sorted((k, tuple(v) if isinstance(v, list) else v) for k, v in (params or {}).items()))


@lru_cache(maxsize=None)
def _spec(key, frozen):
    return load_spec(key, {k: list(v) if isinstance(v, tuple) else v for k, v in frozen})


@lru_cache(maxsize=None)
def _model(key, frozen):
    return build_complex_model(_spec(key, frozen))


@lru_cache(maxsize=None)
def _hodge(key, frozen):
    return HodgePackage(_model(key, frozen))


@lru_cache(maxsize=None)
def _kuranishi(key, frozen):
    return kuranishi_expand(_model(key, frozen), hodge=_hodge(key, frozen))


def spec_of(key, params=None):
    return _spec(key, _freeze(params))


def model_of(key, params=None):
    return _model(key, _freeze(params))


def hodge_of(key, params=None):
    return _hodge(key, _freeze(params))


def kuranishi_of(key, params=None):
    return _kuranishi(key, _freeze(params))


@pytest.fixture
def examples_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("GERST_EXAMPLES_DIR", str(tmp_path))
    return tmp_path


# --- acceptance criterion recorder ----------------------------------------------------

CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = CRITERIA.setdefault(number, {"title": title, "ok": True, "ran": False})
    if call.when == "call":
        entry["ran"] = True
    if call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception):
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        entry = CRITERIA[number]
        status = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        terminalreporter.write_line(f"[{status}] #{number} {entry['title']}")
