"""Gravitationally coupled flavour oscillations of mass-superposed particle pairs."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    GravWitnessError,
    GridTooLargeError,
    InvalidInputError,
    InvalidStateError,
    PhaseRangeError,
    SingularSeparationError,
    ValidationError,
)
from .model import (  # noqa: E402
    CODATA2018,
    Constants,
    ExperimentConfig,
    ParticleSpec,
    baseline_for_flight_time,
    load_config,
    speed_from_gamma,
    validate,
)
from .phase import PrecisePhase, phase_from_product, reduce_mod_2pi  # noqa: E402

__all__ = [
    "CODATA2018",
    "Constants",
    "ExperimentConfig",
    "GravWitnessError",
    "GridTooLargeError",
    "InvalidInputError",
    "InvalidStateError",
    "ParticleSpec",
    "PhaseRangeError",
    "PrecisePhase",
    "SingularSeparationError",
    "ValidationError",
    "baseline_for_flight_time",
    "load_config",
    "phase_from_product",
    "reduce_mod_2pi",
    "speed_from_gamma",
    "validate",
]
