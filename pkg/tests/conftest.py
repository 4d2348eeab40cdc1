import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    num = int(name.split("_")[2])
    if report.when == "call" or report.failed:
        prev = _criteria.get(num)
        ok = report.passed and (prev is None or prev[0])
        _criteria[num] = (ok, name, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        ok, name, dur = _criteria[num]
        tag = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{tag}] criterion {num:2d}  {name}  ({dur:.2f} s)")
    passed = sum(ok for ok, _, _ in _criteria.values())
    terminalreporter.write_line(f"{passed}/{len(_criteria)} criteria passed")
