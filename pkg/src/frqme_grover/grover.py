"""Grover sign-flip specifics: input/target states, metrics and the closed-form
drive-induced-dissipation references."""

import math
import warnings

import numpy as np

from .seqdsl import BASIS_LABELS

NORM_ATOL = 1e-12
ROUNDOFF_ATOL = 1e-10


class NegativeOverlapWarning(UserWarning):
    """<phi|rho|phi> came out negative beyond round-off."""


def uniform_state():
    """|psi0><psi0| with |psi0> = (1, 1, 1, 1)/2."""
    return np.full((4, 4), 0.25, dtype=complex)


def target_state(target):
    """Uniform superposition with the sign of the ``target`` amplitude flipped."""
    if target not in BASIS_LABELS:
        raise ValueError(f"target must be one of {BASIS_LABELS}, got {target!r}")
    phi = np.full(4, 0.5, dtype=complex)
    phi[int(target, 2)] *= -1
    return phi


def fidelity(phi, rho):
    """sqrt(<phi|rho|phi>) for a pure ``phi`` and a density matrix ``rho``."""
    phi = np.asarray(phi, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (phi.size, phi.size):
        raise ValueError(f"dimension mismatch: ket {phi.shape}, rho {rho.shape}")
    if abs(np.linalg.norm(phi) - 1.0) > NORM_ATOL:
        raise ValueError("phi must be normalized")
    overlap = float(np.real(phi.conj() @ rho @ phi))
    if overlap < 0:
        if overlap < -ROUNDOFF_ATOL:
            warnings.warn(f"<phi|rho|phi> = {overlap:.3g} is negative",
                          NegativeOverlapWarning, stacklevel=2)
        overlap = 0.0
    return math.sqrt(overlap)


def purity(rho):
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho @ rho)))


def efficiency(u, n=2):
    """Tr(U U^H) / (2^n)^2 for a Liouville-space map ``u`` on ``n`` qubits."""
    u = np.asarray(u, dtype=complex)
    d2 = 4 ** n
    if u.shape != (d2, d2):
        raise ValueError(f"map shape {u.shape} does not match {n} qubits")
    return float(np.real(np.sum(u * u.conj()))) / d2


def purity_did(x):
    """Closed-form purity after the sign flip with only drive-induced
    dissipation, as a function of omega1 * tau_c."""
    if x < 0:
        raise ValueError("omega1 * tau_c must be >= 0")
    e = lambda k: math.exp(-k * math.pi * x)
    return (17 + 2 * e(18) + 4 * e(14) + 3 * e(10) + 33 * e(8)
            - 2 * e(6) - 2 * e(4) + 9 * e(2)) / 64


def fidelity_did(x):
    """Closed-form fidelity counterpart of :func:`purity_did`."""
    if x < 0:
        raise ValueError("omega1 * tau_c must be >= 0")
    e = lambda k: math.exp(-k * math.pi * x)
    return 0.25 * math.sqrt(4 + e(9) + e(5) + 8 * e(4) + 2 * e(1))
