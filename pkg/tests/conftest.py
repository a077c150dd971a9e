import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# acceptance verdicts, filled by test_acceptance.py
VERDICTS = {}


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None or report.when != "call":
        return
    VERDICTS[crit] = VERDICTS.get(crit, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(VERDICTS, key=lambda c: int(c.split()[0][1:])):
        terminalreporter.write_line(f"{'PASS' if VERDICTS[crit] else 'FAIL'}  {crit}")
