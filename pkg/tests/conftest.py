"""Shared fixtures: warm scale engines are expensive, so build them once."""

from __future__ import annotations

import pytest

from bailout_dividends.levy import CompoundPoisson, Exponential, LevyModel, paper_model
from bailout_dividends.scale import ScaleEngine

Q = 0.1

# (criterion name, passed, detail) triples registered by test_acceptance.py;
# echoed after the run so the per-criterion verdicts survive output capture
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        verdict = "PASS" if ok else "FAIL"
        suffix = f"  [{detail}]" if detail else ""
        terminalreporter.write_line(f"{verdict}  {name}{suffix}")


@pytest.fixture(scope="session")
def engine() -> ScaleEngine:
    """Inversion-backed engine for the reference model."""
    return ScaleEngine(paper_model(), Q)


@pytest.fixture(scope="session")
def brownian_model() -> LevyModel:
    return LevyModel(drift=1.0, sigma=0.5)


@pytest.fixture(scope="session")
def cl_model() -> LevyModel:
    """Classical risk process: unit premium, rate-0.4 exponential(mean 2) claims."""
    return LevyModel(drift=1.0, sigma=0.0,
                     jumps=CompoundPoisson(rate=0.4, dist=Exponential(mean=2.0)))


@pytest.fixture(scope="session")
def cl_engine(cl_model) -> ScaleEngine:
    return ScaleEngine(cl_model, Q)
