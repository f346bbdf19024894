from __future__ import annotations

from fractions import Fraction

import pytest

from tubehyp.geometry import (
    Abscissa,
    DomainSpec,
    Point2,
    VerticalSlit,
    bare_strip,
    build_figure1,
    build_figure2,
    validate,
)
from tubehyp.interval import Interval

A = Point2(0.0, 2.0)

# lines printed by tests/test_acceptance.py, one per criterion
ACCEPTANCE_LINES: dict[int, str] = {}


def mutated_figure1() -> DomainSpec:
    """A single slit {pi/2} x [0, 2.6]: reaches above the mid-line into the band."""
    slit = VerticalSlit(Abscissa.pi_multiple(Fraction(1, 2)), Interval(0.0, 2.6))
    return validate(DomainSpec(0.0, 4.0, 2.0, (slit,), name="fig1-mut"))


@pytest.fixture(scope="session")
def fig1() -> DomainSpec:
    return build_figure1()


@pytest.fixture(scope="session")
def fig2() -> DomainSpec:
    return build_figure2()


@pytest.fixture(scope="session")
def strip() -> DomainSpec:
    return bare_strip()


@pytest.fixture(scope="session")
def fig1_mut() -> DomainSpec:
    return mutated_figure1()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
