import pytest

CRITERIA = {
    1: "contextual duality",
    2: "octatonic tables",
    3: "PR products",
    4: "LR identities and M7 Qbar5",
    5: "affine commutation",
    6: "morphism classification",
    7: "sub dual theorem",
    8: "retro duality",
    9: "RICH",
    10: "network fixtures",
    11: "covers",
    12: "functor round trips",
    13: "CLI determinism",
}

_results: dict[int, list[bool]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            _results.setdefault(marker.args[0], [])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results.setdefault(marker.args[0], []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        runs = _results[n]
        verdict = "PASS" if runs and all(runs) else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2} ({CRITERIA.get(n, '?')}): {verdict} [{sum(runs)}/{len(runs)} checks]")
