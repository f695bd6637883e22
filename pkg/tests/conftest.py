import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


# one summary line per acceptance criterion, failing if any of its tests failed
_criteria: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    entry = _criteria.setdefault(crit[0], {"title": crit[1], "ok": True, "notes": []})
    if report.when == "call" or report.outcome != "passed":
        failed = report.failed or hasattr(report, "wasxfail")
        if failed:
            entry["ok"] = False
            entry["notes"].append(report.nodeid.split("::")[-1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        e = _criteria[num]
        status = "PASS" if e["ok"] else "FAIL"
        extra = f"  (failing: {', '.join(e['notes'])})" if e["notes"] else ""
        terminalreporter.write_line(f"criterion {num}: {status}  {e['title']}{extra}")
