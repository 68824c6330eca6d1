"""How many emitted pairs it takes to see the gravitational phase shift.

The contrast tested is the one the detector records: the double-hit rate of
gravitationally coupled pairs against the single-hit rate of lone
particles, at one baseline, via a two-proportion z-test.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from statistics import NormalDist
from typing import Callable, Optional, Union

import numpy as np

from .errors import InvalidInputError
from .evolution import phase_bundle
from .model import CODATA2018, Constants, ExperimentConfig, ParticleSpec
from .observables import bin_stream, draw_bin, survival_exact_joint, survival_isolated
from .phase import as_fraction, circular_distance, reduce_mod_2pi

METHOD = "two-proportion-z"
MIN_PHASE = 1e-6
MAX_PAIRS = 2**40


@dataclass(frozen=True)
class PowerEstimate:
    n_required: int
    confidence: float
    phase_resolution_rad: float
    trials: int
    power: float
    method: str = METHOD

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class NotResolvable:
    reason: str
    phase_resolution_rad: float

    def to_dict(self) -> dict:
        return {"resolvable": False, **asdict(self)}


def two_proportion_rejects(x1: int, n1: int, x2: int, n2: int, z_crit: float) -> bool:
    if n1 == 0 or n2 == 0:
        return False
    p1, p2 = x1 / n1, x2 / n2
    pooled = (x1 + x2) / (n1 + n2)
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    if se == 0.0:
        return p1 != p2
    return abs(p1 - p2) / se > z_crit


def _trial_seed(seed: int, n: int, trial: int) -> int:
    words = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, n, trial]).generate_state(2, np.uint32)
    return int(words[0]) << 32 | int(words[1])


def search_sample_size(
    trial: Callable[[int, int], tuple[int, int, int, int]],
    confidence: float,
    trials: int = 200,
    power: float = 0.9,
    max_n: int = MAX_PAIRS,
) -> Optional[tuple[int, float]]:
    """Smallest n whose rejection rate over ``trials`` reaches ``power``.

    ``trial(n, k)`` returns (x1, n1, x2, n2) for trial k at sample size n.
    Doubling brackets the answer, bisection refines it.  Returns
    ``(n, achieved_power)`` or None if ``max_n`` is not enough.
    """
    z_crit = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    cache: dict[int, float] = {}

    def rate(n):
        if n not in cache:
            hits = sum(two_proportion_rejects(*trial(n, k), z_crit) for k in range(trials))
            cache[n] = hits / trials
        return cache[n]

    hi = 1
    while rate(hi) < power:
        if hi >= max_n:
            return None
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if rate(mid) >= power:
            hi = mid
        else:
            lo = mid
    return hi, rate(hi)


def required_events_for_rates(
    p_double: float,
    p_single: float,
    confidence: float = 0.95,
    seed: int = 0,
    affected_fraction: float = 0.5,
    trials: int = 200,
    power: float = 0.9,
) -> Optional[tuple[int, float]]:
    """Sample-size search for known hit probabilities (no physics)."""

    def trial(n, k):
        rng = bin_stream(_trial_seed(seed, n, k), 0)
        n_aff, n_double, n_single = draw_bin(rng, n, affected_fraction, p_double, p_single)
        return n_double, n_aff, n_single, n - n_aff

    return search_sample_size(trial, confidence, trials, power)


def required_events(
    spec: ParticleSpec,
    config: ExperimentConfig,
    confidence: float = 0.95,
    seed: int = 0,
    affected_fraction: float = 0.5,
    trials: int = 200,
    power: float = 0.9,
    L=None,
    constants: Constants = CODATA2018,
) -> Union[PowerEstimate, NotResolvable]:
    """Pairs needed at baseline ``L`` (default: the configured one)."""
    if not 0.0 < confidence < 1.0:
        raise InvalidInputError(f"confidence must lie in (0, 1), got {confidence!r}")
    if not 0.0 < power <= 1.0 or trials < 1:
        raise InvalidInputError("need trials >= 1 and power in (0, 1]")
    if L is not None:
        config = replace(config, L=as_fraction(L))
    bundle = phase_bundle(spec, config, constants)
    resolution = circular_distance(reduce_mod_2pi(bundle.Phi_G), 0.0)
    if resolution <= MIN_PHASE:
        return NotResolvable(
            f"gravitational phase {float(bundle.Phi_G):.3e} rad reduces to {resolution:.3e} rad, "
            f"below the {MIN_PHASE:g} rad floor",
            resolution,
        )

    tau = bundle.tau
    p_double = survival_exact_joint(spec, config.d, tau, constants)
    p_single = survival_isolated(spec, tau, constants)
    found = required_events_for_rates(
        p_double, p_single, confidence, seed, affected_fraction, trials, power
    )
    if found is None:
        return NotResolvable(
            f"no sample size up to {MAX_PAIRS} separates double-hit rate {p_double:.6g} "
            f"from single-hit rate {p_single:.6g}",
            resolution,
        )
    n, achieved = found
    return PowerEstimate(n, confidence, resolution, trials, achieved)
