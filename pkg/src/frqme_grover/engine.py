"""Liouvillian assembly and propagation.

The generator of one segment is

    Gamma = -i [H, .] - tau_c [H_d, [H_d, .]] - sum_k w_k g_k^2 [A_k, [A_k, .]]

where ``H`` is the drive during pulses and the free Hamiltonian during
delays, ``H_d`` is the drive (absent during delays) and ``A_k`` are the
system-environment channels with Lorentzian weight
``w_k = tau_c / (1 + omega_k^2 tau_c^2)``. Secular, rotating-frame
Hamiltonians are static within a segment, so the exponential memory kernel
integrates to these static weights.
"""

from dataclasses import dataclass
import warnings

import numpy as np

from .linalg import commutator_super, double_commutator_super, expm, unvec, vec
from .model import h_drive, h_system, se_channels

MODES = ("unitary", "did-only", "relax-only", "both")

TRACE_ATOL = 1e-9
HERMITIAN_ATOL = 1e-8
POSITIVITY_ATOL = 1e-7


class DensityMatrixError(RuntimeError):
    """Propagation broke trace or Hermiticity beyond tolerance."""


class PositivityWarning(UserWarning):
    """An eigenvalue of the propagated state dipped below -1e-7."""


def _terms(mode):
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return mode in ("did-only", "both"), mode in ("relax-only", "both")


@dataclass(frozen=True, eq=False)
class SegmentLiouvillian:
    generator: np.ndarray  # rad/s
    duration: float  # s
    labels: frozenset

    def propagator(self):
        return expm(self.generator * self.duration)


def build_first_order(h):
    """Coherent part ``-i [H, .]``."""
    return -1j * commutator_super(h, strict=True)


def build_did(h_drive, tau_c):
    """Drive-induced dissipation ``-tau_c [H, [H, .]]``."""
    if tau_c < 0:
        raise ValueError("tau_c must be >= 0")
    h = np.asarray(h_drive, dtype=complex)
    commutator_super(h, strict=True)
    return -tau_c * double_commutator_super(h, h)


def lorentzian_weight(frequency, tau_c):
    return tau_c / (1.0 + (frequency * tau_c) ** 2)


def build_relaxation(channels, tau_c):
    if tau_c < 0:
        raise ValueError("tau_c must be >= 0")
    if not channels:
        raise ValueError("no coupling channels given")
    d2 = channels[0].operator.shape[0] ** 2
    out = np.zeros((d2, d2), dtype=complex)
    for ch in channels:
        weight = ch.strength ** 2 * lorentzian_weight(ch.frequency, tau_c)
        if weight:
            out -= weight * double_commutator_super(ch.operator, ch.operator)
    return out


def assemble_gamma(p, segment, mode, channels=None):
    """Generator and duration for one compiled segment.

    ``mode`` only gates the second-order terms; the coherent part is always
    present. ``channels`` defaults to :func:`se_channels` of ``p``.
    """
    did, relax = _terms(mode)
    duration = segment.duration(p)
    if segment.kind == "pulse":
        h = h_drive(segment.axis, segment.targets, p.omega1)
    else:
        h = h_system(p)
    gen = build_first_order(h)
    labels = {"first-order"}
    if did and segment.kind == "pulse":
        gen = gen + build_did(h, p.tau_c)
        labels.add("did")
    if relax:
        gen = gen + build_relaxation(channels if channels is not None else se_channels(p),
                                     p.tau_c)
        labels.add("relaxation")
    return SegmentLiouvillian(gen, duration, frozenset(labels))


def compile_sequence(p, seq, mode, channels=None):
    if channels is None:
        channels = se_channels(p)
    return [assemble_gamma(p, s, mode, channels) for s in seq]


def density_diagnostics(rho):
    """Return (trace error, Hermiticity error, smallest eigenvalue)."""
    rho = np.asarray(rho)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = abs(np.trace(rho) - 1.0)
    low = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    return trace, herm, low


def check_density_matrix(rho, what="state"):
    """Raise on trace/Hermiticity violations; warn and return False on negativity."""
    trace, herm, low = density_diagnostics(rho)
    if trace > TRACE_ATOL:
        raise DensityMatrixError(f"{what}: trace deviates from 1 by {trace:.3g}")
    if herm > HERMITIAN_ATOL:
        raise DensityMatrixError(f"{what}: not Hermitian (max |rho - rho^H| = {herm:.3g})")
    if low < -POSITIVITY_ATOL:
        warnings.warn(f"{what}: eigenvalue {low:.3g} below -{POSITIVITY_ATOL:g}",
                      PositivityWarning, stacklevel=2)
        return False
    return True


def propagate(seg, rho, check=True):
    if seg.duration < 0:
        raise ValueError("segment duration must be >= 0")
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    out = unvec(seg.propagator() @ vec(rho), d)
    if check:
        check_density_matrix(out, "propagated state")
    return out


def compose_map(segments):
    """Total map, the last applied segment leftmost."""
    if not segments:
        raise ValueError("compose_map needs at least one segment")
    total = None
    for seg in segments:
        u = seg.propagator()
        total = u if total is None else u @ total
    return total
