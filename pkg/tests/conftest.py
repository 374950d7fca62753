import numpy as np
import pytest

from slitbm.mc import MCConfig, simulate_hits

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def report():
    """Record one acceptance line: ``report(number, passed, detail)``."""

    def add(number: int, passed: bool, detail: str):
        _ACCEPTANCE[number] = (bool(passed), detail)
        return passed

    return add


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {number:2d}: {detail}")


@pytest.fixture(scope="session")
def drift_run():
    """Hit times and places of 1e5 Euler paths of (B - 4t, W) from (1, 0)."""
    cfg = MCConfig(paths=100_000, step=1e-4, horizon=10.0, seed=5, drift_mu=2.0)
    rec = simulate_hits(cfg, (1.0, 0.0))
    keep = ~rec.censored
    return rec.time[keep], rec.place[keep], rec.horizon


@pytest.fixture(scope="session")
def axis_run():
    """1e5 Euler paths from (1, 0), step 1e-4."""
    return simulate_hits(MCConfig(paths=100_000, step=1e-4, horizon=10.0, seed=11), (1.0, 0.0))
