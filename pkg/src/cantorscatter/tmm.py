"""Transfer-matrix scattering for piecewise-constant well/gap stacks.

Conventions: the exterior regions have zero potential, wells sit at ``-V``,
and energies enter through the dimensionless pair ``(phi, phi_V)`` measured
against the finest well width ``a``::

    k0 = phi / a,    k1 = sqrt(phi**2 + phi_V**2) / a

The total matrix maps right-hand amplitudes to left-hand ones,
``M = D(k0)^-1 [prod_i D_i P_i(d_i) D_i^-1] D(k0)``, so that
``R = |M21|^2 / |M11|^2`` and ``T = 1 / |M11|^2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NegativeWidth, NonPositiveEnergy, NonUnimodular, ZeroWavenumber
from .geometry import LayerStack

# A Complex2x2 is a (2, 2) complex128 ndarray; [[m11, m12], [m21, m22]].


@dataclass(frozen=True)
class EnergyPoint:
    phi: float
    phi_V: float
    a: float = 1.0

    @classmethod
    def for_stack(cls, stack: LayerStack, phi: float, phi_V: float) -> EnergyPoint:
        a = 1.0 if stack.params is None else float(stack.params.finest_well)
        return cls(phi, phi_V, a)


@dataclass(frozen=True)
class ScatterResult:
    R: float
    T: float
    M: np.ndarray


def _check_energy(phi):
    if not np.all(np.asarray(phi) > 0):
        raise NonPositiveEnergy("normalized energy phi must be > 0 (k0 = 0 is singular)")


def wavenumbers(point: EnergyPoint) -> tuple[float, float]:
    """Return ``(k0, k1)`` per unit initiator length."""
    _check_energy(point.phi)
    if not point.a > 0:
        raise NegativeWidth(f"finest well width must be positive, got {point.a!r}")
    k0 = point.phi / point.a
    k1 = math.hypot(point.phi, point.phi_V) / point.a
    return k0, k1


def interface_matrix(k: float) -> tuple[np.ndarray, np.ndarray]:
    """``D(k) = [[1, 1], [k, -k]]`` together with its inverse."""
    if k == 0:
        raise ZeroWavenumber("interface matrix is singular at k = 0")
    d = np.array([[1, 1], [k, -k]], dtype=np.complex128)
    d_inv = np.array([[0.5, 0.5 / k], [0.5, -0.5 / k]], dtype=np.complex128)
    return d, d_inv


def propagation_matrix(k: float, d: float) -> np.ndarray:
    if d < 0:
        raise NegativeWidth(f"layer width must be >= 0, got {d!r}")
    ph = cmath.exp(1j * k * d)
    return np.array([[ph, 0], [0, ph.conjugate()]], dtype=np.complex128)


def _entries(q: np.ndarray, k0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # D0^-1 [[q11, i q12], [i q21, q22]] D0, reduced to (M11, M21) times 2**shift
    q11, q12, q21, q22, shift = q[..., 0], q[..., 1], q[..., 2], q[..., 3], q[..., 4]
    m11 = 0.5 * (q11 + q22) + 0.5j * (q12 * k0 + q21 / k0)
    m21 = 0.5 * (q11 - q22) + 0.5j * (q12 * k0 - q21 / k0)
    return m11, m21, shift.astype(np.int64)


def stack_entries(stack: LayerStack, phi, phi_V: float, a: float | None = None):
    """Vectorized ``(M11, M21, shift)`` over an array of normalized energies.

    The true entries are ``M11 * 2**shift`` and ``M21 * 2**shift``; the split
    keeps strongly reflecting stacks (|M11| beyond 1e308) finite.
    """
    phi = np.atleast_1d(np.asarray(phi, dtype=np.float64))
    _check_energy(phi)
    if a is None:
        a = EnergyPoint.for_stack(stack, 1.0, phi_V).a
    k0 = phi / a
    if phi_V == 0:
        # no potential: one free-propagation phase, exactly reflectionless
        m11 = np.exp(1j * k0 * float(np.sum(stack.widths)))
        return m11, np.zeros_like(m11), np.zeros(phi.shape, dtype=np.int64)
    k1 = np.hypot(phi, phi_V) / a
    q = kernels.cell_products(stack.widths, stack.well_mask, k0, k1)
    return _entries(q, k0)


def reflectance(stack: LayerStack, phi, phi_V: float, a: float | None = None) -> np.ndarray:
    """R(phi) for an array of energies."""
    m11, m21, _ = stack_entries(stack, phi, phi_V, a)
    return np.abs(m21) ** 2 / np.abs(m11) ** 2


def _scale(z: complex, shift: int) -> complex:
    return complex(math.ldexp(z.real, shift), math.ldexp(z.imag, shift)) if shift else z


def _assemble(m11: complex, m21: complex, shift: int) -> np.ndarray:
    try:
        m11, m21 = _scale(m11, shift), _scale(m21, shift)
    except OverflowError:
        m11 = m21 = complex(math.inf, math.inf)
    return np.array([[m11, m21.conjugate()], [m21, m11.conjugate()]], dtype=np.complex128)


def transfer_matrix(stack: LayerStack, point: EnergyPoint) -> np.ndarray:
    """Full 2x2 matrix; entries overflow to inf only past the double range."""
    m11, m21, shift = stack_entries(stack, [point.phi], point.phi_V, point.a)
    return _assemble(complex(m11[0]), complex(m21[0]), int(shift[0]))


def scatter(stack: LayerStack, point: EnergyPoint) -> ScatterResult:
    """R and T from the scaled entries, so neither overflows when M does."""
    m11, m21, shift = stack_entries(stack, [point.phi], point.phi_V, point.a)
    a11 = np.abs(m11) ** 2
    R = float((np.abs(m21) ** 2 / a11)[0])  # same arithmetic as reflectance()
    T = math.ldexp(float(1.0 / a11[0]), -2 * int(shift[0]))
    return ScatterResult(R=R, T=T, M=_assemble(complex(m11[0]), complex(m21[0]), int(shift[0])))


def _trace_phase(M) -> complex:
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if abs(det - 1) > 1e-8:
        raise NonUnimodular(f"det M = {det!r}, expected 1")
    return cmath.acos((M[0, 0] + M[1, 1]) / 2)


def bloch_phase(M: np.ndarray) -> complex | float:
    """Principal theta with tr(M) = 2 cos(theta); real while |tr M| <= 2."""
    M = np.asarray(M)
    theta = _trace_phase(M)
    tr = (M[0, 0] + M[1, 1]).real
    if abs(tr) <= 2:
        return math.acos(tr / 2)
    return complex(theta)


def matrix_power_bloch(M: np.ndarray, n: int) -> np.ndarray:
    """M**n through the Bloch phase: sin(n t)/sin(t) M - sin((n-1) t)/sin(t) I.

    Falls back to repeated multiplication where |sin t| < 1e-8, where the
    ratio degenerates to n.
    """
    if n < 1:
        raise ValueError(f"power must be >= 1, got {n}")
    M = np.asarray(M, dtype=np.complex128)
    theta = _trace_phase(M)
    s = cmath.sin(theta)
    if abs(s) < 1e-8:
        return np.linalg.matrix_power(M, n)
    return (cmath.sin(n * theta) / s) * M - (cmath.sin((n - 1) * theta) / s) * np.eye(2)


def chebyshev_u(n: int, x):
    """U_n(x) by the three-term recurrence; U_{n-1}(cos t) = sin(n t)/sin(t)."""
    if n < 0:
        return 0 * x
    u_prev, u = 1 + 0 * x, 2 * x
    if n == 0:
        return u_prev
    for _ in range(n - 1):
        u_prev, u = u, 2 * x * u - u_prev
    return u


def trace_of_cell(point: EnergyPoint, a: float, b: float) -> float:
    """Trace of the symmetric cell b/2 | well a | b/2."""
    k0, k1 = wavenumbers(point)
    return (2 * math.cos(b * k0) * math.cos(a * k1)
            - (k0 * k0 + k1 * k1) / (k0 * k1) * math.sin(b * k0) * math.sin(a * k1))
