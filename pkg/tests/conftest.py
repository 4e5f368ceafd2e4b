from __future__ import annotations

import pytest

from skewclifford import QuadricSystem, SkewRing, make_field, parse_input
from skewclifford.parsing import fixture_text


def ring(p: int, n: int, upper: dict | None = None, k: int = 1) -> SkewRing:
    return SkewRing.from_upper(make_field(p, k), n, upper or {})


def system_from_fixture(name: str) -> QuadricSystem:
    return parse_input(fixture_text(name)).system


@pytest.fixture(scope="session")
def vvw():
    return system_from_fixture("vvw-gca")


@pytest.fixture(scope="session")
def cv53():
    return system_from_fixture("cv-5-3")


@pytest.fixture
def qplane():
    """{z1^2, z2^2} with mu_12 = 2 over F5."""
    R = ring(5, 2, {(1, 2): 2})
    z1, z2 = R.gens()
    return QuadricSystem.from_forms(R, [z1 * z1, z2 * z2])


# criterion number -> list of (label, passed, detail), filled by test_acceptance
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[k]
        verdict = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        detail = "; ".join(f"{label}: {'ok' if ok else 'FAILED'} ({d})" for label, ok, d in parts)
        terminalreporter.write_line(f"criterion {k}: {verdict}  {detail}")
