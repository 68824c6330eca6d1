"""Experimental constraints: detectability, wave-packet spreading, background mass."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import GridTooLargeError, InvalidInputError
from .evolution import phase_bundle
from .model import CODATA2018, Constants, ExperimentConfig, ParticleSpec, speed_from_gamma
from .observables import oscillation_wavelength
from .phase import as_fraction

MARGIN_CAP = 1e300
MARGINAL_FLOOR = 0.1
MAX_GRID_POINTS = 10**8

WEAK_RANGE_NOTE = (
    "weak interaction range ~1e-18 m is treated as negligible against d; not a computed constraint"
)


@dataclass(frozen=True)
class Constraint:
    """Inequality lhs < rhs; ``margin`` is rhs / lhs (capped)."""

    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool

    @property
    def status(self) -> str:
        if self.passed:
            return "pass"
        if self.margin >= MARGINAL_FLOOR:
            return "marginal"
        return "fail"


def _constraint(name, lhs, rhs) -> Constraint:
    if lhs > 0:
        margin = min(rhs / lhs, MARGIN_CAP)
    else:
        margin = MARGIN_CAP if rhs > 0 else 0.0
    return Constraint(name, float(lhs), float(rhs), float(margin), bool(lhs < rhs))


@dataclass(frozen=True)
class FeasibilityReport:
    wavelength: Constraint
    spreading: Constraint
    background: Constraint
    lambda_m: float
    tau_s: float
    Phi_rad: float
    Phi_G_rad: float
    phi_E_rad: float
    optimal_spread_m: float
    notes: tuple = field(default=(WEAK_RANGE_NOTE,))

    @property
    def constraints(self) -> tuple[Constraint, Constraint, Constraint]:
        return (self.wavelength, self.spreading, self.background)

    @property
    def status(self) -> str:
        """'pass' if every check holds strictly, 'marginal' if the failures
        are all within an order of magnitude, else 'fail'."""
        statuses = {c.status for c in self.constraints}
        if "fail" in statuses:
            return "fail"
        if "marginal" in statuses:
            return "marginal"
        return "pass"

    def to_dict(self) -> dict:
        out = asdict(self)
        out["notes"] = list(self.notes)
        for c in ("wavelength", "spreading", "background"):
            out[c]["status"] = getattr(self, c).status
        out["status"] = self.status
        return out


def check_constraints(
    spec: ParticleSpec, config: ExperimentConfig, constants: Constants = CODATA2018
) -> FeasibilityReport:
    hbar = float(constants.hbar)
    d = float(config.d)
    L = float(config.L)
    m = float(spec.m1)
    v = speed_from_gamma(config.gamma, constants)
    gv = config.gamma * v

    lam = oscillation_wavelength(spec, config.gamma, constants)
    wavelength = _constraint("wavelength_detectability", d, lam)

    optimal = 2.0 * math.sqrt(hbar * L / (gv * m))
    if config.delta is None:
        spread = optimal
    else:
        spread = config.delta + hbar * L / (gv * m * config.delta)
    spreading = _constraint("wave_packet_spreading", spread, d / 2.0)

    if config.M == 0:
        rhs = math.inf
    else:
        rhs = m / config.M
    background = _constraint("background_mass", (d / config.R) ** 2, rhs)

    b = phase_bundle(spec, config, constants)
    return FeasibilityReport(
        wavelength=wavelength,
        spreading=spreading,
        background=background,
        lambda_m=lam,
        tau_s=float(b.tau),
        Phi_rad=float(b.Phi),
        Phi_G_rad=float(b.Phi_G),
        phi_E_rad=float(b.phi_E),
        optimal_spread_m=optimal,
    )


# --- grid scans ---------------------------------------------------------------

SCAN_PARAMETERS = ("m1", "dm", "theta", "d", "L", "gamma", "M", "R")


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    points: int
    log: bool = False

    def __post_init__(self):
        if self.name not in SCAN_PARAMETERS:
            raise InvalidInputError(f"unknown scan parameter {self.name!r}; expected one of {SCAN_PARAMETERS}")
        if not (math.isfinite(self.min) and math.isfinite(self.max) and self.min < self.max):
            raise InvalidInputError(f"axis {self.name}: need finite min < max")
        if self.points < 2:
            raise InvalidInputError(f"axis {self.name}: need at least 2 points")
        if self.log and self.min <= 0:
            raise InvalidInputError(f"axis {self.name}: log spacing needs min > 0")

    def values(self) -> list[float]:
        if self.log:
            return [float(x) for x in np.geomspace(self.min, self.max, self.points)]
        return [float(x) for x in np.linspace(self.min, self.max, self.points)]

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """``name:min:max:points[:log|lin]``"""
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise InvalidInputError(f"bad axis spec {text!r}; expected name:min:max:points[:log]")
        spacing = parts[4] if len(parts) == 5 else "lin"
        if spacing not in ("lin", "log"):
            raise InvalidInputError(f"bad spacing {spacing!r}")
        try:
            return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]), spacing == "log")
        except ValueError as exc:
            raise InvalidInputError(f"bad axis spec {text!r}: {exc}") from exc


@dataclass(frozen=True)
class ScanGrid:
    axes: tuple[Axis, ...]

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not 1 <= len(self.axes) <= 4:
            raise InvalidInputError("a scan grid needs 1 to 4 axes")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise InvalidInputError("duplicate scan axis")

    @property
    def size(self) -> int:
        return math.prod(a.points for a in self.axes)

    @classmethod
    def from_mapping(cls, doc) -> "ScanGrid":
        axes = doc["axes"] if isinstance(doc, dict) else doc
        return cls(
            tuple(
                Axis(a["name"], float(a["min"]), float(a["max"]), int(a["points"]), a.get("spacing", "lin") == "log")
                for a in axes
            )
        )


def apply_point(spec: ParticleSpec, config: ExperimentConfig, point: dict):
    """Template records with the named parameters overridden."""
    point = dict(point)
    m1 = as_fraction(point.pop("m1", spec.m1))
    dm = as_fraction(point.pop("dm", spec.dm))
    theta = point.pop("theta", spec.theta)
    spec = ParticleSpec.from_mass_gap(m1, dm, theta)
    config = replace(config, **point)
    return spec, config


@dataclass(frozen=True)
class ScanRow:
    point: dict
    report: FeasibilityReport

    def flat(self) -> dict:
        r = self.report
        row = {name: float(v) for name, v in self.point.items()}
        row.update(
            lambda_m=r.lambda_m,
            phi_G_rad=r.Phi_G_rad,
            phi_E_rad=r.phi_E_rad,
            wl_pass=r.wavelength.passed,
            spread_pass=r.spreading.passed,
            bg_pass=r.background.passed,
            spread_margin=r.spreading.margin,
            wl_margin=r.wavelength.margin,
            bg_margin=r.background.margin,
        )
        return row


def scan(
    spec: ParticleSpec,
    config: ExperimentConfig,
    grid: ScanGrid,
    constants: Constants = CODATA2018,
    workers: int = 1,
) -> list[ScanRow]:
    """Row-major sweep over ``grid`` (first axis slowest)."""
    if grid.size > MAX_GRID_POINTS:
        raise GridTooLargeError(f"grid has {grid.size} points; limit is {MAX_GRID_POINTS}")
    names = [a.name for a in grid.axes]
    points = [dict(zip(names, combo)) for combo in itertools.product(*(a.values() for a in grid.axes))]

    def one(point):
        s, c = apply_point(spec, config, point)
        return ScanRow(point, check_constraints(s, c, constants))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, points))
    return [one(p) for p in points]
