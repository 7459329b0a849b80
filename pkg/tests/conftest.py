import sys


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if module is None or not module.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for cid, passed, detail in module.REPORT:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {cid:<8} {detail}")
