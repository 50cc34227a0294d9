import os
import sys

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False,
                     help="run the long omega(10000) computation")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow") or os.environ.get("STERNCT_RUN_SLOW"):
        return
    skip = pytest.mark.skip(reason="slow: pass --run-slow or set STERNCT_RUN_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 9):
        status, label, detail = results.get(n, ("SKIP", "not run", "slow or deselected"))
        terminalreporter.write_line(f"criterion {n}: {status}  {label} ({detail})")
