"""Entanglement measures for the two-particle pure state."""

from __future__ import annotations

import numpy as np

from .errors import InvalidStateError
from .evolution import TwoParticleAmplitudes

NORM_TOLERANCE = 1e-6
EIGEN_CLIP = 1e-12


def _matrix(state) -> np.ndarray:
    if isinstance(state, TwoParticleAmplitudes):
        psi = state.as_array()
    else:
        psi = np.asarray(state, dtype=complex).reshape(4)
    norm = np.linalg.norm(psi)
    if not np.isfinite(norm) or abs(norm - 1.0) > NORM_TOLERANCE:
        raise InvalidStateError(f"state norm {norm!r} deviates from 1 by more than {NORM_TOLERANCE}")
    return psi.reshape(2, 2)


def reduce(state) -> np.ndarray:
    """Density matrix of particle A (first index), particle B traced out."""
    a = _matrix(state)
    rho = a @ a.conj().T
    return 0.5 * (rho + rho.conj().T)


def concurrence(state) -> float:
    a = _matrix(state)
    return float(min(1.0, 2.0 * abs(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])))


def negativity(state) -> float:
    """Sum of |negative eigenvalues| of the partial transpose of |phi><phi|."""
    a = _matrix(state)
    # rho[iA, iB, jA, jB]; swapping the two B axes transposes on particle B
    rho = np.einsum("ij,kl->ijkl", a, a.conj())
    pt = rho.transpose(0, 3, 2, 1).reshape(4, 4)
    pt = 0.5 * (pt + pt.conj().T)
    ev = np.linalg.eigvalsh(pt)
    return float(-ev[ev < 0].sum())


def entanglement_entropy(state) -> float:
    """Von Neumann entropy of the reduced state, in bits."""
    ev = np.linalg.eigvalsh(reduce(state))
    ev = np.where((ev < 0) & (ev >= -EIGEN_CLIP), 0.0, ev)
    ev = ev[ev > 0]
    return float(max(0.0, -(ev * np.log2(ev)).sum()))


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))
