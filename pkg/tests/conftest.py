def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    status = getattr(mod, "STATUS", None)
    if status:
        terminalreporter.section("acceptance criteria")
        for k in sorted(status):
            terminalreporter.write_line(status[k])
