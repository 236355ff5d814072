import numpy as np
import pytest

from flatlqr import demos
from flatlqr.config import parse_config


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def horizon_cfg():
    return parse_config(demos.config("horizon"))


def demo_problem(name, T=None):
    """Problem and horizon of a built-in example (fixed-T configs use their own T)."""
    cfg = parse_config(demos.config(name))
    return cfg.problem(), (T if T is not None else cfg.horizon.T)


ACCEPTANCE_LINES = []


def record(number, ok, detail):
    """Log one acceptance criterion outcome; the summary is printed after the run."""
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
