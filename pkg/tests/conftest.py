import math

import mpmath
import pytest

from gravwitness.model import ExperimentConfig, ParticleSpec, baseline_for_flight_time

ORACLE_DPS = 80


@pytest.fixture
def mp80():
    with mpmath.workdps(ORACLE_DPS):
        yield mpmath.mp


@pytest.fixture
def planck_spec():
    return ParticleSpec.from_mass_gap("1e-8", "1e-25", math.pi / 4)


@pytest.fixture
def planck_config():
    # lab flight time L/v = 0.1 s at gamma = 1e4
    return ExperimentConfig(
        d="1e-15", L=baseline_for_flight_time("0.1", 1e4), gamma=1e4, M=6e24, R=1e7
    )


_acceptance = {}


def pytest_runtest_logreport(report):
    if "acceptance" in report.keywords and (report.when == "call" or report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        prev = _acceptance.get(name)
        if prev is None or prev == "PASS":
            _acceptance[name] = "PASS" if report.outcome == "passed" else report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{outcome:<7} {name}")
