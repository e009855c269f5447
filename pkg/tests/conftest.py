"""Shared fixtures: big sieve windows are built once per session.

The three sign windows cover [1, 1e7 + 256] so every test (including the
acceptance battery, which reads lags up to 100 past 1e7) can slice the
same arrays instead of re-sieving.
"""

import numpy as np
import pytest

from mflab.experiments import sign_window

WINDOW_TOP = 10**7 + 256

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def mu_window() -> np.ndarray:
    return sign_window("mobius", WINDOW_TOP)


@pytest.fixture(scope="session")
def lam_window() -> np.ndarray:
    return sign_window("liouville", WINDOW_TOP)


@pytest.fixture(scope="session")
def sq_window() -> np.ndarray:
    return sign_window("squarefree", WINDOW_TOP)
