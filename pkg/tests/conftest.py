import pytest
from hypothesis import HealthCheck, settings

from glpsh.groups import gl

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

# criterion number -> (passed, description); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def g22():
    return gl(2, 2)


@pytest.fixture(scope="session")
def g23():
    return gl(2, 3)


@pytest.fixture(scope="session")
def g32():
    return gl(3, 2)


@pytest.fixture(scope="session")
def g13():
    return gl(1, 3)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {text}")
