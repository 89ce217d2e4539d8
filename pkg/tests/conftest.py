import os

import pytest

from forestpat.patterns import PatternSet


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("FORESTPAT_CACHE", str(tmp_path / "cache"))
    monkeypatch.delenv("FORESTPAT_CAP", raising=False)


def ps(text, kind="classical"):
    return PatternSet.parse(text, kind)


_ACCEPTANCE = []


@pytest.fixture
def verdict(request):
    """Record one pass/fail line per acceptance criterion; shown in the terminal summary."""
    state = {}

    def record(label, checks):
        ok = all(v for _, v in checks)
        bad = [name for name, v in checks if not v]
        line = f"{label}: {'PASS' if ok else 'FAIL'}" + ("" if ok else f" ({'; '.join(bad)})")
        state["line"] = line
        print(line)
        return ok

    yield record
    if "line" in state:
        _ACCEPTANCE.append(state["line"])


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split(":")[0][1:])):
            terminalreporter.write_line(line)
