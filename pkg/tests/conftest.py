"""Print a one-line verdict per acceptance criterion at the end of the run."""

import pytest

_VERDICTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    _VERDICTS[props["criterion"]] = (
        "PASS" if report.passed else "FAIL", props.get("title", ""), props.get("measured", ""))


@pytest.fixture
def criterion(request, record_property):
    marker = request.node.get_closest_marker("criterion")
    number, title = marker.args
    record_property("criterion", number)
    record_property("title", title)

    def measured(text):
        record_property("measured", text)

    return measured


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        verdict, title, measured = _VERDICTS[number]
        line = f"{verdict} criterion {number:2d}: {title}"
        if measured:
            line += f" | {measured}"
        terminalreporter.write_line(line)
