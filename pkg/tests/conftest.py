import math

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from microrev.states import BlochState

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(criterion: str, passed: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append((criterion, bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {criterion}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_state(rng) -> BlochState:
    """Uniform on the Bloch sphere."""
    return BlochState(math.acos(rng.uniform(-1.0, 1.0)), rng.uniform(-math.pi, math.pi))


thetas = st.floats(0.0, math.pi, allow_nan=False)
phis = st.floats(-math.pi, math.pi, allow_nan=False, exclude_max=True)
bloch_states = st.builds(BlochState, thetas, phis)
dampings = st.floats(0.0, 1.0)
betas = st.floats(0.0, 10.0)
