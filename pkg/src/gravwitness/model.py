"""Physical constants, particle/experiment records and their validation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import InvalidInputError, ValidationError
from .phase import as_fraction


@dataclass(frozen=True)
class Constants:
    """SI constants held as exact decimals (CODATA 2018 by default).

    Tests build ``dataclasses.replace(CODATA2018, G=0)`` to switch off
    the gravitational coupling.
    """

    G: Fraction = Fraction("6.67430e-11")
    hbar: Fraction = Fraction("1.054571817e-34")
    c: Fraction = Fraction(299792458)
    tag: str = "CODATA2018"

    def __post_init__(self):
        for name in ("G", "hbar", "c"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))


CODATA2018 = Constants()


@dataclass(frozen=True)
class ParticleSpec:
    """Two rest masses (kg) and the flavour mixing angle (rad).

    Masses are exact rationals: in the Planck-mass regime the gap m2 - m1
    sits ~17 orders below m1 and would vanish in a double.
    """

    m1: Fraction
    m2: Fraction
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "m1", as_fraction(self.m1))
        object.__setattr__(self, "m2", as_fraction(self.m2))
        object.__setattr__(self, "theta", float(self.theta))

    @classmethod
    def from_mass_gap(cls, m1, dm, theta) -> "ParticleSpec":
        m1 = as_fraction(m1)
        return cls(m1=m1, m2=m1 + as_fraction(dm), theta=theta)

    @property
    def dm(self) -> Fraction:
        return self.m2 - self.m1

    @property
    def weights(self) -> tuple[float, float]:
        """Mass-basis components (cos theta, sin theta) of the flavour state."""
        return math.cos(self.theta), math.sin(self.theta)


@dataclass(frozen=True)
class ExperimentConfig:
    """Geometry and kinematics, SI units.

    ``d`` is both the pair separation and the source/detector size.
    ``M == 0`` means no background mass.  ``delta`` is the initial
    wave-packet width; ``None`` selects the optimal width.
    """

    d: Fraction
    L: Fraction
    gamma: float
    M: float
    R: float
    delta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "d", as_fraction(self.d))
        object.__setattr__(self, "L", as_fraction(self.L))
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "M", float(self.M))
        object.__setattr__(self, "R", float(self.R))
        if self.delta is not None:
            object.__setattr__(self, "delta", float(self.delta))

    @property
    def v(self) -> float:
        return speed_from_gamma(self.gamma)


def speed_from_gamma(gamma: float, constants: Constants = CODATA2018) -> float:
    """Speed for Lorentz factor ``gamma``: c*sqrt(1 - 1/gamma**2)."""
    gamma = float(gamma)
    if not gamma >= 1.0 or math.isinf(gamma):
        raise InvalidInputError(f"gamma must be finite and >= 1, got {gamma!r}")
    c = float(constants.c)
    # (g-1)(g+1) keeps full relative precision as gamma -> 1
    return min(c, c * math.sqrt((gamma - 1.0) * (gamma + 1.0)) / gamma)


def baseline_for_flight_time(t_lab, gamma: float, constants: Constants = CODATA2018) -> Fraction:
    """Baseline L covered in lab time ``t_lab`` at Lorentz factor ``gamma``."""
    return as_fraction(t_lab) * as_fraction(speed_from_gamma(gamma, constants))


def validate(spec: ParticleSpec, config: ExperimentConfig):
    """Return ``(spec, config)`` unchanged, or raise ValidationError listing every violation."""
    problems: list[str] = []
    if spec.m1 <= 0:
        problems.append(f"m1: must be positive, got {float(spec.m1)!r}")
    if spec.m2 <= spec.m1:
        problems.append(
            f"m2: must exceed m1 (dm > 0), got m2 - m1 = {float(spec.m2 - spec.m1)!r}"
        )
    if not (0.0 <= spec.theta <= math.pi / 2):
        problems.append(f"theta: must lie in [0, pi/2], got {spec.theta!r}")

    if config.d <= 0:
        problems.append(f"d: must be positive, got {float(config.d)!r}")
    if config.L <= 0:
        problems.append(f"L: must be positive, got {float(config.L)!r}")
    if not (config.gamma >= 1.0 and math.isfinite(config.gamma)):
        problems.append(f"gamma: must be finite and >= 1, got {config.gamma!r}")
    if not (config.M >= 0.0 and math.isfinite(config.M)):
        problems.append(f"M: must be finite and >= 0, got {config.M!r}")
    if not (config.R > 0.0 and math.isfinite(config.R)):
        problems.append(f"R: must be finite and positive, got {config.R!r}")
    if config.delta is not None and not (config.delta > 0.0 and math.isfinite(config.delta)):
        problems.append(f"delta: must be finite and positive, got {config.delta!r}")

    if problems:
        raise ValidationError(problems)
    return spec, config


# --- JSON config document ---------------------------------------------------

_REQUIRED_KEYS = ("m1_kg", "m2_kg", "theta_rad", "d_m", "L_m", "gamma", "M_kg", "R_m")
_OPTIONAL_KEYS = ("delta_m",)


def _exact(x):
    if isinstance(x, bool) or not isinstance(x, (int, Decimal, Fraction, float)):
        raise InvalidInputError(f"expected a number, got {x!r}")
    return as_fraction(x)


def config_from_mapping(doc: dict) -> tuple[ParticleSpec, ExperimentConfig]:
    if not isinstance(doc, dict):
        raise ValidationError(["config: top level must be a JSON object"])
    problems = [f"{k}: unknown key" for k in doc if k not in _REQUIRED_KEYS + _OPTIONAL_KEYS]
    problems += [f"{k}: missing" for k in _REQUIRED_KEYS if k not in doc]
    values = {}
    for k, v in doc.items():
        if k in _REQUIRED_KEYS + _OPTIONAL_KEYS and not (k == "delta_m" and v is None):
            try:
                values[k] = _exact(v)
            except InvalidInputError as exc:
                problems.append(f"{k}: {exc}")
    if problems:
        raise ValidationError(problems)
    spec = ParticleSpec(values["m1_kg"], values["m2_kg"], float(values["theta_rad"]))
    delta = values.get("delta_m")
    config = ExperimentConfig(
        d=values["d_m"],
        L=values["L_m"],
        gamma=float(values["gamma"]),
        M=float(values["M_kg"]),
        R=float(values["R_m"]),
        delta=None if delta is None else float(delta),
    )
    return spec, config


def loads_config(text: str):
    """Parse a JSON config; numbers are read as exact decimals."""
    try:
        doc = json.loads(text, parse_float=Decimal, parse_int=Decimal)
    except json.JSONDecodeError as exc:
        raise ValidationError([f"config: invalid JSON ({exc})"]) from exc
    return config_from_mapping(doc)


def load_config(path) -> tuple[ParticleSpec, ExperimentConfig]:
    return loads_config(Path(path).read_text())


def format_exact(x, digits: Optional[int] = None) -> str:
    """Decimal rendering of an exact value.

    With ``digits=None`` terminating fractions (every float among them) are
    rendered exactly; otherwise the value is rounded to ``digits``
    significant digits.
    """
    x = as_fraction(x)
    den = x.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    prec = digits or (5000 if den == 1 else 60)
    with localcontext() as ctx:
        ctx.prec = prec
        d = (Decimal(x.numerator) / Decimal(x.denominator)).normalize()
    return "0" if d == 0 else str(d).lower()


def config_to_mapping(spec: ParticleSpec, config: ExperimentConfig) -> dict:
    doc = {
        "m1_kg": spec.m1,
        "m2_kg": spec.m2,
        "theta_rad": spec.theta,
        "d_m": config.d,
        "L_m": config.L,
        "gamma": config.gamma,
        "M_kg": config.M,
        "R_m": config.R,
    }
    if config.delta is not None:
        doc["delta_m"] = config.delta
    return doc


def dumps_config(spec: ParticleSpec, config: ExperimentConfig) -> str:
    """JSON text that :func:`loads_config` reads back to equal records."""
    items = []
    for k, v in config_to_mapping(spec, config).items():
        text = format_exact(v) if isinstance(v, Fraction) else repr(float(v))
        items.append(f'  "{k}": {text}')
    return "{\n" + ",\n".join(items) + "\n}\n"
