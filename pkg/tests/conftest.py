def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion, capture or not."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    status = "PASS" if report.passed else "FAIL"
    name = report.nodeid.split("::")[-1]
    print(f"\n[acceptance] {status} {name}")
