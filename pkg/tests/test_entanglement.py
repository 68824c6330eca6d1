import cmath
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gravwitness.entanglement import (
    binary_entropy,
    concurrence,
    entanglement_entropy,
    negativity,
    reduce,
)
from gravwitness.errors import InvalidStateError
from gravwitness.evolution import entangling_phase_period, phases_at, two_particle_amplitudes
from gravwitness.model import CODATA2018, ParticleSpec

NO_G = replace(CODATA2018, G=0)
BELL = np.array([1, 0, 0, 1]) / math.sqrt(2)
PRODUCT = np.kron([0.6, 0.8j], [math.sqrt(0.5), -math.sqrt(0.5)])


def _random_state(rng):
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    return psi / np.linalg.norm(psi)


def _partial_trace_oracle(psi):
    rho = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                rho[i, j] += psi[2 * i + k] * np.conj(psi[2 * j + k])
    return rho


def _negativity_oracle(psi):
    rho = np.outer(psi, psi.conj())
    pt = np.zeros((4, 4), dtype=complex)
    for iA in range(2):
        for iB in range(2):
            for jA in range(2):
                for jB in range(2):
                    pt[2 * iA + iB, 2 * jA + jB] = rho[2 * iA + jB, 2 * jA + iB]
    ev = np.linalg.eigvalsh(pt)
    return -ev[ev < 0].sum()


def test_reduce_product_and_bell():
    ev = np.linalg.eigvalsh(reduce(PRODUCT))
    assert ev[0] < 1e-12
    assert np.allclose(reduce(BELL), np.eye(2) / 2, atol=1e-15)


def test_reduce_against_oracle():
    rng = np.random.default_rng(1)
    for _ in range(200):
        psi = _random_state(rng)
        rho = reduce(psi)
        assert np.max(np.abs(rho - _partial_trace_oracle(psi))) < 1e-12
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
        assert abs(np.trace(rho) - 1) < 1e-12
        ev = np.linalg.eigvalsh(rho)
        assert ev.min() > -1e-12 and ev.max() < 1 + 1e-12


def test_unnormalized_rejected():
    with pytest.raises(InvalidStateError):
        reduce(np.array([1, 1, 0, 0]))
    with pytest.raises(InvalidStateError):
        concurrence(np.array([0, 0, 0, 0]))


def test_bell_and_product_values():
    assert abs(concurrence(BELL) - 1) < 1e-15
    assert abs(negativity(BELL) - 0.5) < 1e-12
    assert abs(entanglement_entropy(BELL) - 1) < 1e-12
    assert concurrence(PRODUCT) < 1e-12
    assert negativity(PRODUCT) < 1e-12
    assert entanglement_entropy(PRODUCT) < 1e-12


def test_entropy_of_known_spectrum():
    psi = np.array([math.sqrt(0.9), 0, 0, math.sqrt(0.1)])
    assert abs(entanglement_entropy(psi) - 0.4690) < 1e-4
    assert abs(entanglement_entropy(psi) - binary_entropy(0.9)) < 1e-12


def test_negativity_is_half_concurrence():
    rng = np.random.default_rng(2)
    for _ in range(200):
        psi = _random_state(rng)
        n = negativity(psi)
        assert abs(n - _negativity_oracle(psi)) < 1e-12
        assert abs(n - concurrence(psi) / 2) < 1e-10


def _draw_spec(data):
    dm_exp = data.draw(st.floats(min_value=-38, max_value=-20))
    m1_exp = data.draw(st.floats(min_value=dm_exp, max_value=-6))
    theta = data.draw(st.floats(min_value=0, max_value=math.pi / 2))
    return ParticleSpec.from_mass_gap(10**m1_exp, 10**dm_exp, theta)


@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_concurrence_closed_form(data):
    spec = _draw_spec(data)
    d = 10 ** data.draw(st.floats(min_value=-16, max_value=-10))
    tau = 10 ** data.draw(st.floats(min_value=-6, max_value=6))
    amps = two_particle_amplitudes(spec, d, tau)
    phi_e = phases_at(spec, d, tau).phi_E.reduced()
    expected = math.sin(2 * spec.theta) ** 2 * abs(math.sin(phi_e / 2))
    assert abs(concurrence(amps) - expected) < 1e-10


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_zero_coupling_law(data):
    spec = _draw_spec(data)
    tau = 10 ** data.draw(st.floats(min_value=-6, max_value=6))
    amps = two_particle_amplitudes(spec, 1e-15, tau, NO_G)
    assert concurrence(amps) < 1e-12
    assert negativity(amps) < 1e-12
    assert entanglement_entropy(amps) < 1e-12


@settings(max_examples=100, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    g=st.floats(0, 2 * math.pi),
    b1=st.floats(0, 2 * math.pi),
    b2=st.floats(0, 2 * math.pi),
    c1=st.floats(0, 2 * math.pi),
    c2=st.floats(0, 2 * math.pi),
)
def test_phase_invariance(seed, g, b1, b2, c1, c2):
    psi = _random_state(np.random.default_rng(seed))
    glob = psi * cmath.exp(1j * g)
    local = psi * np.exp(1j * np.array([b1 + c1, b1 + c2, b2 + c1, b2 + c2]))
    for f in (concurrence, negativity, entanglement_entropy):
        assert abs(f(glob) - f(psi)) < 1e-12
        assert abs(f(local) - f(psi)) < 1e-12


def test_concurrence_periodic_in_tau():
    spec = ParticleSpec.from_mass_gap(1e-6, 1e-20, 0.6)
    period = entangling_phase_period(spec, 1e-15)
    for tau in (0.1 * period, 0.37 * period, 0.8 * period):
        c0 = concurrence(two_particle_amplitudes(spec, 1e-15, tau))
        c1 = concurrence(two_particle_amplitudes(spec, 1e-15, tau + period))
        assert c0 > 1e-3
        assert abs(c0 - c1) < 1e-9


def test_entropy_concurrence_consistency():
    rng = np.random.default_rng(3)
    for eps in (0.0, 1e-12, 1e-10):
        psi = np.kron([1, 0], [1, 0]) + eps * _random_state(rng)
        psi = psi / np.linalg.norm(psi)
        assert concurrence(psi) < 1e-9
        assert entanglement_entropy(psi) < 1e-12
    for _ in range(50):
        psi = _random_state(rng)
        if concurrence(psi) > 1e-3:
            assert entanglement_entropy(psi) > 0
