from hypothesis import settings

# first calls trigger numba compilation, which would trip the deadline
settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    reports = [r for key in ("passed", "failed") for r in terminalreporter.stats.get(key, [])
               if "test_acceptance.py" in r.nodeid and r.when == "call"]
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(reports, key=lambda r: r.nodeid):
        name = r.nodeid.split("::")[-1].removeprefix("test_")
        summary = dict(r.user_properties).get("summary", "")
        terminalreporter.write_line(f"{'PASS' if r.passed else 'FAIL'}  {name}: {summary}")
