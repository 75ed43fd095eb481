"""Dense complex linear algebra for Liouville-space work.

Matrices are plain ``numpy`` arrays. Vectorization is column stacking, so
that ``vec(A @ X @ B) == kron(B.T, A) @ vec(X)``; left multiplication by
``A`` is ``kron(I, A)`` and right multiplication by ``B`` is
``kron(B.T, I)``.
"""

import math
import warnings

import numpy as np

HERMITIAN_ATOL = 1e-10


class HermiticityWarning(UserWarning):
    """Operator expected to be Hermitian is not (within tolerance)."""


def kron(a, b):
    """Kronecker product; the shape of the result is the product of shapes."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _require_square(a, name="matrix"):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def is_hermitian(h, atol=HERMITIAN_ATOL):
    h = np.asarray(h)
    return h.ndim == 2 and h.shape[0] == h.shape[1] and \
        bool(np.max(np.abs(h - h.conj().T), initial=0.0) <= atol)


def check_hermitian(h, strict=False, name="operator"):
    """Warn (or raise ``ValueError`` when ``strict``) if ``h`` is not Hermitian."""
    if is_hermitian(h):
        return
    msg = f"{name} is not Hermitian within {HERMITIAN_ATOL:g}"
    if strict:
        raise ValueError(msg)
    warnings.warn(msg, HermiticityWarning, stacklevel=3)


# -- vectorization ---------------------------------------------------------

def vec(m):
    """Column-stack a square matrix into a vector of length d**2."""
    m = _require_square(m, "vec input")
    return m.reshape(-1, order="F")


def unvec(v, d):
    """Inverse of :func:`vec`."""
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or v.size != d * d:
        raise ValueError(f"expected a vector of length {d * d}, got shape {v.shape}")
    return v.reshape((d, d), order="F")


def left_super(a):
    """Superoperator for X -> A X."""
    a = _require_square(a)
    return np.kron(np.eye(a.shape[0]), a)


def right_super(b):
    """Superoperator for X -> X B."""
    b = _require_square(b)
    return np.kron(b.T, np.eye(b.shape[0]))


def commutator_super(h, strict=False):
    """Superoperator for rho -> [H, rho] (no factor of -i).

    A non-Hermitian ``h`` triggers a :class:`HermiticityWarning`, or a
    ``ValueError`` if ``strict`` is set.
    """
    h = _require_square(h, "h")
    check_hermitian(h, strict=strict, name="h")
    return left_super(h) - right_super(h)


def double_commutator_super(a, b):
    """Superoperator for rho -> [A, [B, rho]]."""
    a = _require_square(a, "a")
    b = _require_square(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    ca = left_super(a) - right_super(a)
    cb = left_super(b) - right_super(b)
    return ca @ cb


# -- matrix exponential ----------------------------------------------------

_PADE_DEGREES = (3, 5, 7, 9, 13)


def _pade_coefficients(m):
    # numerator of the [m/m] Pade approximant to exp(x); denominator is p(-x)
    return [math.factorial(2 * m - j) * math.factorial(m)
            / (math.factorial(2 * m) * math.factorial(j) * math.factorial(m - j))
            for j in range(m + 1)]


def _pade_error_constant(m):
    # leading term of exp(x) - r_m(x) is c_m x**(2m+1)
    return math.factorial(m) ** 2 / (math.factorial(2 * m) * math.factorial(2 * m + 1))


def _pade(a, m):
    n = a.shape[0]
    c = _pade_coefficients(m)
    a2 = a @ a
    powers = [np.eye(n, dtype=complex)]
    for _ in range(m // 2):
        powers.append(powers[-1] @ a2)
    odd = sum(c[2 * k + 1] * powers[k] for k in range((m + 1) // 2))
    even = sum(c[2 * k] * powers[k] for k in range(m // 2 + 1))
    u = a @ odd
    return np.linalg.solve(even - u, even + u)


def expm(a, tol=1e-12):
    """Matrix exponential by scaling and squaring with a Pade kernel.

    The Pade degree and number of squarings are chosen so that the leading
    truncation term of the scaled problem is below ``tol`` (relative to the
    1-norm). A small safety factor absorbs the growth during squaring.
    """
    a = _require_square(a, "expm input")
    if not tol > 0:
        raise ValueError("tol must be positive")
    n = a.shape[0]
    if n == 0:
        return a.copy()
    norm = np.linalg.norm(a, 1)
    if norm == 0.0:
        return np.eye(n, dtype=complex)
    target = tol / 16.0
    for m in _PADE_DEGREES:
        if _pade_error_constant(m) * norm ** (2 * m + 1) <= target:
            return _pade(a, m)
    m = _PADE_DEGREES[-1]
    theta = (target / _pade_error_constant(m)) ** (1.0 / (2 * m + 1))
    s = max(0, math.ceil(math.log2(norm / theta)))
    r = _pade(a / 2.0 ** s, m)
    for _ in range(s):
        r = r @ r
    return r
