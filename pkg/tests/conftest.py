import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print the acceptance verdict lines whenever that suite ran."""
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for line in verdicts:
        terminalreporter.write_line(line)
