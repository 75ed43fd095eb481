"""Two-qubit operators, parameters and Hamiltonians (rotating frame, rad/s)."""

from dataclasses import dataclass
import math

import numpy as np

from .linalg import check_hermitian, kron

SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
I2 = np.eye(2, dtype=complex)
QUBITS = (1, 2)


@dataclass(frozen=True)
class PhysicalParams:
    """Physical parameter set.

    ``omega1``, ``omega_se`` and ``offsets`` are in rad/s, ``tau_c`` in s and
    ``j_coupling`` in Hz. The dimensionless sweep coordinates are derived
    properties and never stored.
    """

    omega1: float
    tau_c: float
    omega_se: float
    j_coupling: float = 10e3
    offsets: tuple = (0.0, 0.0)

    def __post_init__(self):
        for name in ("omega1", "tau_c", "omega_se", "j_coupling"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if len(self.offsets) != 2:
            raise ValueError("offsets needs one entry per qubit")
        object.__setattr__(self, "offsets", tuple(float(o) for o in self.offsets))

    @property
    def omega1_s(self):
        return self.omega1 / self.omega_se

    @property
    def tauc_s(self):
        return self.omega_se * self.tau_c

    @classmethod
    def from_scaled(cls, omega1_s, tauc_s, omega_se, j_coupling=10e3, offsets=(0.0, 0.0)):
        if not omega_se > 0:
            raise ValueError("omega_se must be > 0 to use scaled coordinates")
        return cls(omega1=omega1_s * omega_se, tau_c=tauc_s / omega_se,
                   omega_se=omega_se, j_coupling=j_coupling, offsets=offsets)


@dataclass(frozen=True, eq=False)
class CouplingChannel:
    """System side of one system-environment coupling term.

    ``strength`` and ``frequency`` (secular oscillation frequency entering the
    Lorentzian weight) are in rad/s.
    """

    operator: np.ndarray
    strength: float
    frequency: float = 0.0

    def __post_init__(self):
        op = np.asarray(self.operator, dtype=complex)
        check_hermitian(op, strict=True, name="channel operator")
        op.setflags(write=False)
        object.__setattr__(self, "operator", op)


def pauli(qubit, axis):
    """Pauli ``axis`` on ``qubit`` (1 or 2), identity on the other qubit."""
    if qubit not in QUBITS:
        raise ValueError(f"qubit must be 1 or 2, got {qubit!r}")
    if axis not in SIGMA:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    s = SIGMA[axis]
    return kron(s, I2) if qubit == 1 else kron(I2, s)


def zz():
    return kron(SIGMA["z"], SIGMA["z"])


def h_system(p):
    """Free-evolution Hamiltonian: resonance offsets plus scalar J coupling."""
    h = 0.5 * (p.offsets[0] * pauli(1, "z") + p.offsets[1] * pauli(2, "z"))
    return h + 2 * math.pi * p.j_coupling / 4 * zz()


def h_drive(axis, targets, omega1):
    """Resonant transverse drive ``(omega1/2) * sum_q sigma_axis(q)``.

    ``axis`` is one of ``x``, ``y``, ``-x``, ``-y``.
    """
    targets = tuple(sorted(set(targets)))
    if not targets:
        raise ValueError("drive needs at least one target qubit")
    sign = -1.0 if axis.startswith("-") else 1.0
    bare = axis.lstrip("-")
    if bare not in ("x", "y"):
        raise ValueError(f"drive axis must be x, y, -x or -y, got {axis!r}")
    return sign * omega1 / 2 * sum(pauli(q, bare) for q in targets)


def se_channels(p):
    """Local isotropic system-environment coupling.

    Every Pauli on every qubit is an independent channel of strength
    ``omega_se`` with zero secular frequency in the rotating frame.
    """
    return [CouplingChannel(pauli(q, a), p.omega_se, 0.0)
            for q in QUBITS for a in ("x", "y", "z")]
