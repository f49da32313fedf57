import os

import pytest
from hypothesis import HealthCheck, settings

from matching_homology.facts import default_registry
from matching_homology.homology import homology_of

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def brute_tables():
    """Brute-force equivariant homology of C^3_n for n = 0..10."""
    return {n: homology_of(3, n) for n in range(0, 11)}


@pytest.fixture(scope="session")
def derivation():
    """The full scripted derivation up to n = 24 with the shipped facts."""
    from matching_homology.pipeline import derive_all

    return derive_all(facts=default_registry())


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(criterion, ok: bool, detail: str) -> bool:
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
