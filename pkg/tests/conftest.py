"""Shared pytest wiring: a visible pass/fail line per acceptance criterion."""

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" and report.outcome != "failed":
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not any(name == seen for seen, _ in _ACCEPTANCE_RESULTS):
        _ACCEPTANCE_RESULTS.append((name, report.outcome))


def _describe(test_name: str) -> str:
    # test_c03_quadric_psd_and_planar_zero -> "criterion 3: quadric psd and planar zero"
    body = test_name.removeprefix("test_c")
    number, _, rest = body.partition("_")
    return f"criterion {int(number)}: {rest.replace('_', ' ')}"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE_RESULTS:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {_describe(name)}")
