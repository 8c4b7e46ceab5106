import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, str] = {}
_outcomes: dict[int, list[bool]] = {}
_item_criterion: dict[str, int] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            num, title = mark.args
            _criteria[num] = title
            _item_criterion[item.nodeid] = num


def pytest_runtest_logreport(report):
    num = _item_criterion.get(report.nodeid)
    if num is None:
        return
    if report.when == "call" or report.failed:
        _outcomes.setdefault(num, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        results = _outcomes.get(num, [])
        if not results:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {status:7s} {_criteria[num]}")
