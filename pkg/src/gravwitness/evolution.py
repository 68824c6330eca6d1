"""Phases and evolved states of one particle and of the coupled pair.

Every exponent is accumulated exactly (see :mod:`gravwitness.phase`) and
only reduced mod 2*pi right before exponentiation.  Time evolution uses
exp(-i E tau / hbar) throughout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError, SingularSeparationError
from .model import CODATA2018, Constants, ExperimentConfig, ParticleSpec
from .phase import PrecisePhase, as_fraction, reduce_mod_2pi


@dataclass(frozen=True)
class TwoParticleAmplitudes:
    """Pair state in the |m_i>|m_j> basis, global phase of a11 removed."""

    a11: complex
    a12: complex
    a21: complex
    a22: complex

    def as_array(self):
        import numpy as np

        return np.array([self.a11, self.a12, self.a21, self.a22], dtype=complex)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in (self.a11, self.a12, self.a21, self.a22)))


@dataclass(frozen=True)
class PhaseBundle:
    """Free, gravitational and entangling phases accrued over ``tau``."""

    Phi: PrecisePhase
    Phi_G: PrecisePhase
    phi_E: PrecisePhase
    tau: Fraction


def proper_time(config: ExperimentConfig, constants: Constants = CODATA2018) -> Fraction:
    """Rest-frame duration L/(gamma v) of the flight over the baseline.

    Evaluated as L / (c sqrt(gamma^2 - 1)), exact in L for fixed gamma, so
    phases stay coherent across a fine grid of baselines.
    """
    L = as_fraction(config.L)
    if L == 0:
        return Fraction(0)
    g = float(config.gamma)
    if not g >= 1.0:
        raise InvalidInputError(f"gamma must be >= 1, got {g!r}")
    root = math.sqrt((g - 1.0) * (g + 1.0))
    if root == 0.0:
        raise InvalidInputError("gamma = 1: particle at rest never reaches the detector")
    return L / (constants.c * Fraction(root))


def _tau(tau) -> Fraction:
    tau = as_fraction(tau)
    if tau < 0:
        raise InvalidInputError(f"tau must be >= 0, got {float(tau)!r}")
    return tau


def _separation(d) -> Fraction:
    d = as_fraction(d)
    if d <= 0:
        raise SingularSeparationError(f"pair separation must be positive, got {float(d)!r}")
    return d


def rest_energy_phase(m, tau, constants: Constants = CODATA2018) -> PrecisePhase:
    return PrecisePhase(as_fraction(m) * constants.c**2 * _tau(tau) / constants.hbar)


def single_particle_state(spec: ParticleSpec, tau, constants: Constants = CODATA2018):
    """Amplitudes on (|m1>, |m2>) after free evolution from the flavour state."""
    c1, c2 = spec.weights
    p1 = reduce_mod_2pi(rest_energy_phase(spec.m1, tau, constants))
    p2 = reduce_mod_2pi(rest_energy_phase(spec.m2, tau, constants))
    return c1 * cmath.exp(-1j * p1), c2 * cmath.exp(-1j * p2)


def pair_energy_phase(mi, mj, d, tau, constants: Constants = CODATA2018) -> PrecisePhase:
    """((mi + mj) c^2 + G mi mj / d) tau / hbar."""
    mi, mj = as_fraction(mi), as_fraction(mj)
    energy = (mi + mj) * constants.c**2 + constants.G * mi * mj / _separation(d)
    return PrecisePhase(energy * _tau(tau) / constants.hbar)


def pair_relative_phases(spec: ParticleSpec, d, tau, constants: Constants = CODATA2018):
    """Exact exponents of alpha_12/alpha_11 and alpha_22/alpha_11."""
    e11 = pair_energy_phase(spec.m1, spec.m1, d, tau, constants)
    e12 = pair_energy_phase(spec.m1, spec.m2, d, tau, constants)
    e22 = pair_energy_phase(spec.m2, spec.m2, d, tau, constants)
    return e12 - e11, e22 - e11


def two_particle_amplitudes(
    spec: ParticleSpec, d, tau, constants: Constants = CODATA2018
) -> TwoParticleAmplitudes:
    c1, c2 = spec.weights
    r12, r22 = pair_relative_phases(spec, d, tau, constants)
    a12 = c1 * c2 * cmath.exp(-1j * reduce_mod_2pi(r12))
    a22 = c2 * c2 * cmath.exp(-1j * reduce_mod_2pi(r22))
    return TwoParticleAmplitudes(complex(c1 * c1), a12, a12, a22)


def phases_at(spec: ParticleSpec, d, tau, constants: Constants = CODATA2018) -> PhaseBundle:
    tau = _tau(tau)
    d = _separation(d)
    dm = spec.dm
    scale = tau / constants.hbar
    return PhaseBundle(
        Phi=PrecisePhase(dm * constants.c**2 * scale / 2),
        Phi_G=PrecisePhase(constants.G * spec.m1 * dm * scale / d),
        phi_E=PrecisePhase(constants.G * dm * dm * scale / d),
        tau=tau,
    )


def phase_bundle(
    spec: ParticleSpec, config: ExperimentConfig, constants: Constants = CODATA2018
) -> PhaseBundle:
    return phases_at(spec, config.d, proper_time(config, constants), constants)


def entangling_phase_period(spec: ParticleSpec, d, constants: Constants = CODATA2018) -> float:
    """Rest-frame time over which the entangling phase advances by 2*pi."""
    return float(2 * math.pi * as_fraction(d) * constants.hbar / (constants.G * spec.dm**2))
