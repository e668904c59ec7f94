import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from minkunits import load_fixture
from minkunits.context import field_context

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("repo")

# criterion number -> (PASS/FAIL, description)
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def record(criterion: int, ok: bool, text: str) -> None:
    ACCEPTANCE[criterion] = ("PASS" if ok else "FAIL", text)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status, text = ACCEPTANCE[k]
        terminalreporter.write_line(f"{status} criterion {k}: {text}")


@pytest.fixture(scope="session")
def fixtures():
    return {name: load_fixture(name) for name in ("sqrt2", "sqrt3", "sqrt5", "biquad", "zeta5", "zeta20")}


@pytest.fixture(scope="session")
def ctx(fixtures):
    def make(name, w_hat=0, bits=128):
        return field_context(fixtures[name].field, bits, w_hat)

    return make
