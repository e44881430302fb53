from __future__ import annotations

import pytest

from kacquiver.quiver import a2, a3, example_quiver, kronecker

_criteria: dict[str, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, text): acceptance criterion covered by a test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    label, text = marker.args
    callspec = getattr(item, "callspec", None)
    if callspec is not None:
        text = f"{text} [{callspec.id}]"
    outcome = "PASS" if call.excinfo is None else "FAIL"
    _criteria.setdefault(label, []).append((outcome, text))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: (len(s), s)):
        checks = _criteria[label]
        failed = [text for outcome, text in checks if outcome == "FAIL"]
        verdict = "FAIL" if failed else "PASS"
        terminalreporter.write_line(
            f"criterion {label}: {verdict} ({len(checks) - len(failed)}/{len(checks)} checks)"
        )
        for outcome, text in checks:
            terminalreporter.write_line(f"    {outcome}  {text}")


@pytest.fixture
def kron():
    return kronecker()


@pytest.fixture
def kron3():
    return kronecker(3)


@pytest.fixture
def quiver_a2():
    return a2()


@pytest.fixture
def quiver_a3():
    return a3()


@pytest.fixture
def example():
    return example_quiver()
