"""Detection probabilities, oscillation wavelength and detector event counts."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInputError
from .evolution import (
    TwoParticleAmplitudes,
    phases_at,
    proper_time,
    two_particle_amplitudes,
    _separation,
)
from .model import CODATA2018, Constants, ExperimentConfig, ParticleSpec
from .phase import PI, as_fraction, reduce_mod_2pi


def _mixing_strength(theta: float) -> float:
    return math.sin(2.0 * theta) ** 2


def _survival(theta: float, half_phase) -> float:
    """1 - sin^2(2 theta) sin^2(half_phase) with an exact argument."""
    s = math.sin(reduce_mod_2pi(half_phase))
    p = 1.0 - _mixing_strength(theta) * s * s
    return min(1.0, max(0.0, p))


def survival_isolated(spec: ParticleSpec, tau, constants: Constants = CODATA2018) -> float:
    """Probability that a lone particle is still found in its initial flavour."""
    tau = as_fraction(tau)
    if tau < 0:
        raise InvalidInputError(f"tau must be >= 0, got {float(tau)!r}")
    return _survival(spec.theta, spec.dm * constants.c**2 * tau / (2 * constants.hbar))


def survival_paper_pair(spec: ParticleSpec, d, tau, constants: Constants = CODATA2018) -> float:
    """Survival with the oscillation argument shifted by the gravitational phase.

    Literal closed form 1 - sin^2(2 theta) sin^2(Phi + Phi_G).  It is not
    what the exact pair amplitudes give; see :func:`survival_exact_marginal`.
    """
    b = phases_at(spec, d, tau, constants)
    return _survival(spec.theta, b.Phi.value + b.Phi_G.value)


def joint_projection(theta: float, amps: TwoParticleAmplitudes) -> float:
    """|<nu1 nu1|phi>|^2 for given pair amplitudes."""
    c1, c2 = math.cos(theta), math.sin(theta)
    overlap = c1 * c1 * amps.a11 + c1 * c2 * amps.a12 + c2 * c1 * amps.a21 + c2 * c2 * amps.a22
    return min(1.0, abs(overlap) ** 2)


def marginal_projection(theta: float, amps: TwoParticleAmplitudes) -> float:
    """Tr[(|nu1><nu1| x 1) |phi><phi|] = sum_j |sum_i <nu1|m_i> a_ij|^2."""
    c1, c2 = math.cos(theta), math.sin(theta)
    b1 = c1 * amps.a11 + c2 * amps.a21
    b2 = c1 * amps.a12 + c2 * amps.a22
    return min(1.0, abs(b1) ** 2 + abs(b2) ** 2)


def survival_exact_joint(spec: ParticleSpec, d, tau, constants: Constants = CODATA2018) -> float:
    """Probability that both particles are found as nu1."""
    return joint_projection(spec.theta, two_particle_amplitudes(spec, d, tau, constants))


def survival_exact_marginal(spec: ParticleSpec, d, tau, constants: Constants = CODATA2018) -> float:
    """Probability that particle A alone is found as nu1, partner unobserved.

    To first order this is survival_isolated with the argument shifted by
    Phi_G / 2, half the shift of :func:`survival_paper_pair`.
    """
    return marginal_projection(spec.theta, two_particle_amplitudes(spec, d, tau, constants))


def oscillation_wavelength(spec: ParticleSpec, gamma: float, constants: Constants = CODATA2018) -> float:
    """Lab-frame wavelength 2 pi c gamma / omega with omega = dm c^2 / (2 hbar).

    This is the length over which the oscillation argument advances by 2 pi
    (for v -> c).  The detection probability, a sin^2 of that argument,
    repeats twice per wavelength.
    """
    gamma = float(gamma)
    if not gamma >= 1.0:
        raise InvalidInputError(f"gamma must be >= 1, got {gamma!r}")
    return float(4 * PI * constants.hbar * Fraction(gamma) / (spec.dm * constants.c))


@dataclass(frozen=True)
class OutOfPhaseBaseline:
    n: int
    L: Fraction
    Phi_G: float


def out_of_phase_baselines(
    spec: ParticleSpec,
    config: ExperimentConfig,
    n_max: int,
    constants: Constants = CODATA2018,
) -> list[OutOfPhaseBaseline]:
    """Baselines where the gravitational phase equals (n + 1/2) pi, n = 0..n_max.

    Each entry carries Phi_G re-evaluated at its baseline as a check.
    """
    if n_max < 0:
        raise InvalidInputError("n_max must be >= 0")
    d = _separation(config.d)
    # Phi_G(L) = G m1 dm L / (d hbar gamma v); with v gamma = c sqrt(gamma^2 - 1)
    # taken from proper_time so the round trip is exact.
    per_metre = proper_time(replace(config, L=1), constants)
    gain = constants.G * spec.m1 * spec.dm / (d * constants.hbar) * per_metre
    if gain == 0:
        raise InvalidInputError("gravitational phase does not grow with L")
    out = []
    for n in range(n_max + 1):
        L = (n + Fraction(1, 2)) * PI / gain
        phi_g = phases_at(spec, d, proper_time(replace(config, L=L), constants), constants).Phi_G
        out.append(OutOfPhaseBaseline(n=n, L=L, Phi_G=float(phi_g)))
    return out


def survival_curve(
    spec: ParticleSpec,
    config: ExperimentConfig,
    L_values: Sequence,
    constants: Constants = CODATA2018,
) -> list[tuple]:
    """Rows (L, P_isolated, P_paper_pair, P_joint, P_marginal) over baselines."""
    rows = []
    for L in L_values:
        L = as_fraction(L)
        tau = proper_time(replace(config, L=L), constants)
        rows.append(
            (
                L,
                survival_isolated(spec, tau, constants),
                survival_paper_pair(spec, config.d, tau, constants),
                survival_exact_joint(spec, config.d, tau, constants),
                survival_exact_marginal(spec, config.d, tau, constants),
            )
        )
    return rows


# --- Monte-Carlo detector events ----------------------------------------------


@dataclass(frozen=True)
class EventSample:
    L_bin: Fraction
    n_pairs_emitted: int
    n_double_hits: int
    n_single_hits: int
    rng_seed: int
    n_affected: int
    bin_index: int


def bin_stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based (Philox) stream fixed by ``(seed, index)`` alone."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)])
    return np.random.Generator(np.random.Philox(ss))


def default_bins(config: ExperimentConfig, n_bins: int, width=None) -> list[Fraction]:
    """Centres of ``n_bins`` uniform bins starting at the configured baseline."""
    w = as_fraction(config.d if width is None else width)
    L0 = as_fraction(config.L)
    return [L0 + (i + Fraction(1, 2)) * w for i in range(n_bins)]


def draw_bin(rng: np.random.Generator, n_pairs: int, affected_fraction: float, p_double: float, p_single: float):
    """(n_affected, n_double, n_single) for one bin.

    Affected pairs reach the detector together; the rest arrive as lone
    particles whose partners went elsewhere.
    """
    n_aff = int(rng.binomial(n_pairs, affected_fraction))
    n_double = int(rng.binomial(n_aff, p_double))
    n_single = int(rng.binomial(n_pairs - n_aff, p_single))
    return n_aff, n_double, n_single


def simulate_events(
    spec: ParticleSpec,
    config: ExperimentConfig,
    affected_fraction: float = 0.5,
    n_pairs: int = 10_000,
    seed: int = 0,
    L_values: Optional[Sequence] = None,
    n_bins: int = 100,
    bin_width=None,
    constants: Constants = CODATA2018,
    workers: int = 1,
) -> list[EventSample]:
    """Seeded single/double-hit counts per baseline bin.

    Bin ``i`` draws from its own substream, so results do not depend on
    ``workers`` or evaluation order.
    """
    if not 0.0 <= affected_fraction <= 1.0:
        raise InvalidInputError(f"affected_fraction must lie in [0, 1], got {affected_fraction!r}")
    if n_pairs < 1:
        raise InvalidInputError("n_pairs must be >= 1")
    if L_values is None:
        if n_bins < 1:
            raise InvalidInputError("need at least one L bin")
        L_values = default_bins(config, n_bins, bin_width)
    L_values = [as_fraction(L) for L in L_values]
    if not L_values:
        raise InvalidInputError("need at least one L bin")

    def one(index):
        L = L_values[index]
        tau = proper_time(replace(config, L=L), constants)
        p_double = survival_exact_joint(spec, config.d, tau, constants)
        p_single = survival_isolated(spec, tau, constants)
        n_aff, n_double, n_single = draw_bin(
            bin_stream(seed, index), n_pairs, affected_fraction, p_double, p_single
        )
        return EventSample(L, n_pairs, n_double, n_single, int(seed), n_aff, index)

    indices = range(len(L_values))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, indices))
    return [one(i) for i in indices]
