def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Replay the acceptance checklist after the test summary."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance checklist")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
