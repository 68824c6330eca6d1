import math
from dataclasses import replace

import pytest

from gravwitness.errors import GridTooLargeError, InvalidInputError
from gravwitness.feasibility import (
    MARGIN_CAP,
    Axis,
    ScanGrid,
    apply_point,
    check_constraints,
    scan,
)
from gravwitness.model import ParticleSpec

# mpmath (80 digits), frozen
PLANCK_LAMBDA = 4.4204381858999799496e-13
PLANCK_OPTIMAL_SPREAD = 6.4948343073553462285e-16
WAVELENGTH_DM_BOUNDARY = 4.4204381858999799496e-23


def test_planck_regime_parameters(planck_spec, planck_config):
    r = check_constraints(planck_spec, planck_config)
    assert r.wavelength.passed
    assert abs(r.lambda_m - PLANCK_LAMBDA) < 1e-12 * PLANCK_LAMBDA
    assert r.wavelength.lhs == 1e-15

    assert r.background.passed
    assert abs(r.background.lhs - 1e-44) < 1e-58
    assert abs(r.background.rhs - 1e-8 / 6e24) < 1e-45
    assert r.background.margin > 1e10

    assert not r.spreading.passed
    assert abs(r.optimal_spread_m - PLANCK_OPTIMAL_SPREAD) < 1e-9 * PLANCK_OPTIMAL_SPREAD
    assert abs(r.spreading.margin - 5e-16 / PLANCK_OPTIMAL_SPREAD) < 1e-9
    assert r.spreading.status == "marginal"
    assert r.status == "marginal"
    assert r.notes


def test_pass_flags_recomputable(planck_spec, planck_config):
    r = check_constraints(planck_spec, planck_config)
    for c in r.constraints:
        assert c.passed == (c.lhs < c.rhs)
        assert c.passed == (c.margin > 1)


def test_zero_background_mass(planck_spec, planck_config):
    r = check_constraints(planck_spec, replace(planck_config, M=0.0))
    assert r.background.passed
    assert r.background.margin == MARGIN_CAP


def test_explicit_spread(planck_spec, planck_config):
    hbar, v = 1.054571817e-34, planck_config.v
    L = float(planck_config.L)
    delta = 3e-16
    r = check_constraints(planck_spec, replace(planck_config, delta=delta))
    expected = delta + hbar * L / (1e4 * v * 1e-8 * delta)
    assert abs(r.spreading.lhs - expected) < 1e-12 * expected
    # the optimal width never does worse
    assert r.spreading.lhs >= r.optimal_spread_m


def test_wavelength_marginal_and_hard_fail(planck_config):
    # lambda = 4.4e-15 m at dm = 1e-23 kg: still above d
    assert check_constraints(ParticleSpec.from_mass_gap("1e-8", "1e-23", 0.7), planck_config).wavelength.passed
    r = check_constraints(ParticleSpec.from_mass_gap("1e-8", "1e-22", 0.7), planck_config)
    assert r.wavelength.status == "marginal"
    spec = ParticleSpec.from_mass_gap("1e-8", "1e-21", math.pi / 4)
    r = check_constraints(spec, planck_config)
    assert not r.wavelength.passed
    assert r.wavelength.status == "fail"
    assert r.status == "fail"


def _margin(spec, config, name):
    return getattr(check_constraints(spec, config), name).margin


def test_monotonicity(planck_spec, planck_config):
    bg_M = [_margin(planck_spec, replace(planck_config, M=M), "background") for M in (1e20, 1e22, 1e24)]
    assert bg_M[0] > bg_M[1] > bg_M[2]
    bg_d = [_margin(planck_spec, replace(planck_config, d=d), "background") for d in (1e-16, 1e-15, 1e-14)]
    assert bg_d[0] > bg_d[1] > bg_d[2]
    wl = [_margin(planck_spec, replace(planck_config, gamma=g), "wavelength") for g in (10.0, 1e3, 1e5)]
    assert wl[0] < wl[1] < wl[2]
    sp = [
        _margin(ParticleSpec.from_mass_gap(m, "1e-25", 0.7), planck_config, "spreading")
        for m in (1e-9, 1e-8, 1e-7)
    ]
    assert sp[0] < sp[1] < sp[2]


def test_scan_one_axis(planck_spec, planck_config):
    grid = ScanGrid((Axis("dm", 1e-27, 1e-23, 5, log=True),))
    rows = scan(planck_spec, planck_config, grid)
    assert len(rows) == 5
    margins = [r.report.wavelength.margin for r in rows]
    assert all(a > b for a, b in zip(margins, margins[1:]))


def test_scan_two_axes_cardinality_and_order(planck_spec, planck_config):
    grid = ScanGrid((Axis("gamma", 10, 1e4, 3), Axis("L", 1e6, 3e7, 4)))
    rows = scan(planck_spec, planck_config, grid)
    assert len(rows) == 12
    # row-major: first axis slowest
    assert [r.point["gamma"] for r in rows[:4]] == [10.0] * 4
    assert [r.point["L"] for r in rows[:4]] == Axis("L", 1e6, 3e7, 4).values()


def test_scan_brackets_wavelength_frontier(planck_spec, planck_config):
    grid = ScanGrid((Axis("dm", 1e-24, 1e-22, 41, log=True),))
    rows = scan(planck_spec, planck_config, grid)
    flips = [
        (a.point["dm"], b.point["dm"])
        for a, b in zip(rows, rows[1:])
        if a.report.wavelength.passed and not b.report.wavelength.passed
    ]
    assert len(flips) == 1
    lo, hi = flips[0]
    assert lo < WAVELENGTH_DM_BOUNDARY < hi


def test_scan_rows_match_point_checks(planck_spec, planck_config):
    grid = ScanGrid((Axis("m1", 1e-9, 1e-7, 3, log=True), Axis("theta", 0.1, 1.0, 2), Axis("R", 1e6, 1e8, 2)))
    rows = scan(planck_spec, planck_config, grid, workers=3)
    assert rows == scan(planck_spec, planck_config, grid)
    for row in rows:
        spec, config = apply_point(planck_spec, planck_config, row.point)
        assert check_constraints(spec, config) == row.report


def test_grid_limits(planck_spec, planck_config):
    big = ScanGrid(tuple(Axis(n, 1, 2, 101) for n in ("gamma", "L", "M", "R")))
    assert big.size > 10**8
    with pytest.raises(GridTooLargeError):
        scan(planck_spec, planck_config, big)
    with pytest.raises(InvalidInputError):
        ScanGrid(())
    with pytest.raises(InvalidInputError):
        ScanGrid(tuple(Axis(n, 1, 2, 2) for n in ("gamma", "L", "M", "R", "d")))
    with pytest.raises(InvalidInputError):
        Axis("gamma", 2, 1, 5)
    with pytest.raises(InvalidInputError):
        Axis("gamma", 1, 2, 1)
    with pytest.raises(InvalidInputError):
        Axis("mass", 1, 2, 3)
    with pytest.raises(InvalidInputError):
        Axis("dm", 0, 1, 3, log=True)


def test_axis_parse():
    assert Axis.parse("dm:1e-27:1e-23:5:log") == Axis("dm", 1e-27, 1e-23, 5, True)
    assert Axis.parse("gamma:1:10:3") == Axis("gamma", 1.0, 10.0, 3, False)
    with pytest.raises(InvalidInputError):
        Axis.parse("gamma:1:10")
    with pytest.raises(InvalidInputError):
        Axis.parse("gamma:1:10:3:cubic")


def test_report_dict(planck_spec, planck_config):
    d = check_constraints(planck_spec, planck_config).to_dict()
    assert d["status"] == "marginal"
    assert d["spreading"]["status"] == "marginal"
    assert d["wavelength"]["passed"] is True
