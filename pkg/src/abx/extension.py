"""The family of self-adjoint realizations of the flux Hamiltonian.

A particle on the plane with a single flux line at the origin (flux
parameter alpha in (0,1)) admits a four-parameter family of self-adjoint
Hamiltonians.  Only the angular-momentum channels m = 0 (s-wave) and
m = -1 (p-wave) support boundary conditions at the origin; the family is
parametrized by a unitary 2x2 map between the two-dimensional deficiency
subspaces, written

    U = e^{i eta} [[a, -conj(b)], [b, conj(a)]],    |a|^2 + |b|^2 = 1.

The point (eta, a, b) = (0, -1, 0) is the regular (pure magnetic-flux)
Hamiltonian; b = 0 gives the rotationally invariant extensions; b != 0
couples the two channels, so angular momentum is no longer conserved.

This module holds the parameter types with their validation, the unitary
matrix and its inverse parametrization, the radial deficiency elements

    xi0_pm(r)  = N r^{1/2} K_alpha(e^{-+i pi/4} r)        (s-wave)
    xim1_pm(r) = M r^{1/2} K_{1-alpha}(e^{-+i pi/4} r)    (p-wave)

with N = sqrt(2 cos(pi alpha/2))/pi, M = sqrt(2 sin(pi alpha/2))/pi (the
minus elements carry the extra phases e^{i pi alpha/2} resp.
e^{i pi (1-alpha)/2} that make the analytic basis of the resolvent module
reduce to them), and the quadrature diagnostic of their norms.  With
these constants the two-dimensional elements r^{-1/2} xi(r) e^{i m phi}
have unit L2 norm; the radial elements themselves have norm
1/sqrt(2 pi).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _integrate

from .errors import ConvergenceError
from .specfun import bessel_k

__all__ = [
    "ALPHA_MIN",
    "ALPHA_MAX",
    "FluxAlpha",
    "ExtensionParams",
    "UMatrix",
    "DeficiencyElement",
    "ExtensionKind",
    "ExtensionClass",
    "as_alpha",
    "s_channel_norm",
    "p_channel_norm",
    "build_u_matrix",
    "u_matrix_params",
    "canonical_params",
    "deficiency_radial",
    "classify",
    "l2_norm_deficiency",
]

ALPHA_MIN = 1e-6
ALPHA_MAX = 1.0 - 1e-6

_NORM_TOL = 1e-12
_CLASS_TOL = 1e-12


@dataclass(frozen=True)
class FluxAlpha:
    """Magnetic flux parameter, restricted to [1e-6, 1 - 1e-6].

    The channel coefficients carry 1/sin(pi alpha); the endpoints are
    excluded to keep them finite.  Out-of-range values are an error, not
    clamped.
    """

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        object.__setattr__(self, "alpha", a)
        if not math.isfinite(a) or not ALPHA_MIN <= a <= ALPHA_MAX:
            raise ValueError(
                f"flux parameter must lie in [{ALPHA_MIN}, {ALPHA_MAX}], got {a}"
            )


def as_alpha(alpha) -> float:
    if isinstance(alpha, FluxAlpha):
        return alpha.alpha
    return FluxAlpha(float(alpha)).alpha


def _wrap_angle(eta: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    out = eta % (2.0 * math.pi)
    if out > math.pi:
        out -= 2.0 * math.pi
    return out


@dataclass(frozen=True)
class ExtensionParams:
    """Parameters (eta, a, b) selecting one self-adjoint extension.

    eta is normalized to (-pi, pi] at construction; |a|^2 + |b|^2 must
    equal 1 within 1e-12 or construction fails.
    """

    eta: float
    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "eta", _wrap_angle(float(self.eta)))
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(
                f"|a|^2 + |b|^2 must equal 1 within {_NORM_TOL}, got {norm:.6g}"
            )

    @classmethod
    def ab_point(cls) -> "ExtensionParams":
        """The regular (pure magnetic) extension."""
        return cls(0.0, -1.0, 0.0)

    @classmethod
    def rotationally_invariant(cls, eta: float, tau: float) -> "ExtensionParams":
        return cls(eta, cmath.exp(1j * tau), 0.0)

    @classmethod
    def mixing(cls, gamma: float, eta: float = 0.0) -> "ExtensionParams":
        """The simplest channel-coupling family: a = 0, b = e^{i gamma}."""
        return cls(eta, 0.0, cmath.exp(1j * gamma))


@dataclass(frozen=True)
class UMatrix:
    """The unitary channel map, ordered channels (0, -1)."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        object.__setattr__(self, "entries", m)

    def unitarity_residual(self) -> float:
        m = self.entries
        return float(np.max(np.abs(m @ m.conj().T - np.eye(2))))


def build_u_matrix(params: ExtensionParams) -> UMatrix:
    """Assemble e^{i eta} [[a, -conj b], [b, conj a]]."""
    phase = cmath.exp(1j * params.eta)
    a, b = params.a, params.b
    return UMatrix(phase * np.array([[a, -b.conjugate()], [b, a.conjugate()]]))


def _is_canonical(a: complex, b: complex) -> bool:
    ref = a if abs(a) > _CLASS_TOL else b
    if abs(ref.real) > _CLASS_TOL:
        return ref.real > 0.0
    return ref.imag > 0.0


def canonical_params(params: ExtensionParams) -> ExtensionParams:
    """Fix the (eta, a, b) <-> (eta + pi, -a, -b) redundancy.

    Canonical representatives have Re(a) > 0, falling back to Im(a) > 0,
    then to the same test on b when a = 0.
    """
    if _is_canonical(params.a, params.b):
        return params
    return ExtensionParams(params.eta + math.pi, -params.a, -params.b)


def u_matrix_params(u: UMatrix) -> ExtensionParams:
    """Recover canonical (eta, a, b) from a matrix of the stated form."""
    m = u.entries
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(abs(det) - 1.0) > 1e-9:
        raise ValueError(f"matrix is not unitary: |det| = {abs(det):.6g}")
    eta = cmath.phase(det) / 2.0
    phase = cmath.exp(-1j * eta)
    a = m[0, 0] * phase
    b = m[1, 0] * phase
    resid = max(
        abs(m[0, 1] * phase + b.conjugate()),
        abs(m[1, 1] * phase - a.conjugate()),
    )
    if resid > 1e-9:
        raise ValueError(
            f"matrix does not have the channel-map form (residual {resid:.3g})"
        )
    return canonical_params(ExtensionParams(eta, a, b))


def s_channel_norm(alpha) -> float:
    """N = sqrt(2 cos(pi alpha/2))/pi."""
    alpha = as_alpha(alpha)
    return math.sqrt(2.0 * math.cos(math.pi * alpha / 2.0)) / math.pi


def p_channel_norm(alpha) -> float:
    """M = sqrt(2 sin(pi alpha/2))/pi."""
    alpha = as_alpha(alpha)
    return math.sqrt(2.0 * math.sin(math.pi * alpha / 2.0)) / math.pi


@dataclass(frozen=True)
class DeficiencyElement:
    """Label of one radial deficiency element: channel in {0, -1} and the
    sign of the defect eigenvalue (+1 for +i, -1 for -i)."""

    channel: int
    sign: int

    def __post_init__(self):
        if self.channel not in (0, -1):
            raise ValueError(f"channel must be 0 or -1, got {self.channel}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


def _channel_order_norm(channel: int, alpha: float) -> tuple[float, float]:
    if channel == 0:
        return alpha, s_channel_norm(alpha)
    return 1.0 - alpha, p_channel_norm(alpha)


def deficiency_radial(element: DeficiencyElement, alpha, r: float) -> complex:
    """Radial deficiency element xi(r), including its normalization
    constant and, on the minus element, the phase e^{i pi nu / 2}.

    The plus element solves  -xi'' + (nu^2 - 1/4) r^{-2} xi = +i xi  and
    the minus element the -i counterpart, both square-integrable with
    small-r behavior proportional to r^{1/2 - nu}.
    """
    alpha = as_alpha(alpha)
    r = float(r)
    if not math.isfinite(r) or r <= 0.0:
        raise ValueError(f"deficiency_radial requires r > 0, got {r}")
    nu, norm = _channel_order_norm(element.channel, alpha)
    if element.sign > 0:
        ray = cmath.exp(-1j * math.pi / 4)
        phase = 1.0 + 0j
    else:
        ray = cmath.exp(1j * math.pi / 4)
        phase = cmath.exp(1j * math.pi * nu / 2.0)
    return norm * phase * math.sqrt(r) * bessel_k(nu, ray * r)


def classify(params: ExtensionParams) -> "ExtensionClass":
    """Partition parameter space by the structure of the channel map.

    Classification happens on the matrix itself, so the redundant
    representation (eta + pi, -a, -b) of a point classifies identically.
    """
    u = build_u_matrix(params).entries
    off = max(abs(u[0, 1]), abs(u[1, 0]))
    if off > _CLASS_TOL:
        return ExtensionClass(ExtensionKind.MIXING, None)
    if abs(u[0, 0] + 1.0) <= _CLASS_TOL and abs(u[1, 1] + 1.0) <= _CLASS_TOL:
        return ExtensionClass(ExtensionKind.AB, None)
    return ExtensionClass(ExtensionKind.ROTATIONALLY_INVARIANT, cmath.phase(params.a))


class ExtensionKind(enum.Enum):
    AB = "AB"
    ROTATIONALLY_INVARIANT = "rotationally_invariant"
    MIXING = "mixing"


@dataclass(frozen=True)
class ExtensionClass:
    kind: ExtensionKind
    tau: float | None = None


# Radius beyond which |K_nu(e^{+-i pi/4} r)|^2 ~ exp(-sqrt(2) r) is below
# double-precision resolution of the norm integral.
_NORM_CUTOFF_R = 60.0


def l2_norm_deficiency(element: DeficiencyElement, alpha) -> float:
    """sqrt(int_0^inf |xi(r)|^2 dr) by adaptive quadrature.

    The integrand has an integrable r^{1 - 2 nu} singularity at the
    origin and decays like exp(-sqrt(2) r); the integral is cut at a
    radius where the tail is below 1e-16.  Quadrature failure or an
    error estimate above 1e-8 raises ConvergenceError.
    """
    alpha = as_alpha(alpha)
    nu, norm = _channel_order_norm(element.channel, alpha)
    ray = cmath.exp(-1j * math.pi / 4) if element.sign > 0 else cmath.exp(1j * math.pi / 4)

    def integrand(r: float) -> float:
        return norm * norm * r * abs(bessel_k(nu, ray * r)) ** 2

    val, abserr = _integrate.quad(
        integrand, 0.0, _NORM_CUTOFF_R, epsabs=1e-11, epsrel=1e-11, limit=300
    )
    if not math.isfinite(val) or abserr > 1e-8:
        raise ConvergenceError(
            f"deficiency norm quadrature did not converge (error estimate {abserr:.3g})"
        )
    return math.sqrt(val)
