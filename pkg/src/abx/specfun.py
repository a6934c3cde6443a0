"""Special functions on the domains the channel formulas consume.

Fractional-order Bessel functions J_nu, Y_nu and Hankel functions H1_nu on
the positive real axis, the McDonald function K_nu on the rays
arg z = +-pi/4 (where the deficiency elements live) and on the positive
real axis, and the branch-consistent complex power (-k^2)^s that appears
in every channel coefficient.

Numerical evaluation is delegated to the AMOS routines behind
``scipy.special``; this module owns input validation, the ray and branch
conventions, and the underflow policy.  An independent extended-precision
series oracle used to vet these surfaces lives in the test tree.

Branch convention
-----------------
``branch_power(k, s)`` is exp(s * Log(-k^2)) with the principal logarithm.
For Im k > 0 the image -k^2 never touches the cut, so the power is
analytic on the open upper half-plane and real positive on the ray
k = i*kappa.  On the positive real axis the value is the continuous limit
from Im k -> 0+, i.e. exp(-i*pi*s) * k**(2s); every module evaluates
boundary quantities with this limit.

All functions are pure and reentrant; there is no mutable module state.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special as _sp

__all__ = [
    "Order",
    "UpperHalfK",
    "as_order",
    "as_wavenumber",
    "gamma_fn",
    "bessel_j",
    "bessel_y",
    "hankel1",
    "bessel_k",
    "KValue",
    "branch_power",
    "bessel_j_orders",
    "hankel1_orders",
]

_RAY_ANGLE_TOL = 1e-12
# Re z beyond which exp(-Re z) underflows double precision.
_K_DECAY_RE = 700.0


@dataclass(frozen=True)
class Order:
    """Bessel order restricted to the range the typed surface supports.

    The channel formulas only ever evaluate fractional orders alpha,
    1 - alpha and |m + alpha| with |m| <= 1 here, all inside [0, 2).
    Larger orders occur only inside partial-wave sums, which use the
    unvalidated vector helpers below.
    """

    nu: float

    def __post_init__(self):
        if not math.isfinite(self.nu):
            raise ValueError(f"order must be finite, got {self.nu}")
        if not 0.0 <= self.nu < 2.0:
            raise ValueError(f"order must lie in [0, 2), got {self.nu}")


@dataclass(frozen=True)
class UpperHalfK:
    """Wavenumber in the closed upper half-plane, k != 0.

    ``on_real_axis`` marks a boundary value understood as the limit from
    Im k -> 0+; it requires Re k > 0 and Im k == 0.  Interior points
    require Im k > 0 strictly.
    """

    k: complex
    on_real_axis: bool = False

    def __post_init__(self):
        kc = complex(self.k)
        object.__setattr__(self, "k", kc)
        if kc == 0 or not (math.isfinite(kc.real) and math.isfinite(kc.imag)):
            raise ValueError(f"wavenumber must be finite and nonzero, got {kc}")
        if self.on_real_axis:
            if kc.imag != 0.0 or kc.real <= 0.0:
                raise ValueError(
                    f"on_real_axis requires real k > 0, got {kc}"
                )
        elif kc.imag <= 0.0:
            raise ValueError(f"interior wavenumber needs Im k > 0, got {kc}")


def as_order(nu) -> float:
    """Coerce an Order or bare number to a validated order value."""
    if isinstance(nu, Order):
        return nu.nu
    return Order(float(nu)).nu


def as_wavenumber(k) -> UpperHalfK:
    """Coerce a complex number to UpperHalfK.

    Positive reals become boundary values (limits from above); numbers
    with Im > 0 become interior points; anything else is rejected.
    """
    if isinstance(k, UpperHalfK):
        return k
    kc = complex(k)
    if kc.imag == 0.0:
        return UpperHalfK(kc, on_real_axis=True)
    return UpperHalfK(kc)


def gamma_fn(x: float) -> float:
    """Gamma function for x > 0."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    return float(_sp.gamma(x))


def bessel_j(nu, x: float) -> float:
    """Bessel function of the first kind, fractional order, x >= 0."""
    nu = as_order(nu)
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise ValueError(f"bessel_j requires x >= 0, got {x}")
    val = float(_sp.jv(nu, x))
    if not math.isfinite(val):
        raise ArithmeticError(f"bessel_j({nu}, {x}) did not evaluate finitely")
    return val


def bessel_y(nu, x: float) -> float:
    """Bessel function of the second kind; x = 0 is singular and rejected."""
    nu = as_order(nu)
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"bessel_y requires x > 0, got {x}")
    val = float(_sp.yv(nu, x))
    if not math.isfinite(val):
        raise ArithmeticError(f"bessel_y({nu}, {x}) did not evaluate finitely")
    return val


def hankel1(nu, x: float) -> complex:
    """Hankel function of the first kind, built literally as J + i*Y.

    The components are the module's own bessel_j/bessel_y evaluations, so
    the defining combination holds bit for bit.
    """
    return complex(bessel_j(nu, x), bessel_y(nu, x))


class KValue(NamedTuple):
    value: complex
    decayed: bool


def bessel_k(nu, z: complex, *, with_flag: bool = False):
    """McDonald function K_nu on the rays arg z in {-pi/4, 0, +pi/4}.

    For |z| large enough that the exponential decay underflows double
    precision the value 0 is returned and the ``decayed`` flag is set
    (pass ``with_flag=True`` to receive it); subnormal noise is never
    returned.  Other rays are rejected.
    """
    nu = as_order(nu)
    z = complex(z)
    az = abs(z)
    if az == 0.0 or not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"bessel_k requires finite z != 0, got {z}")
    ang = cmath.phase(z)
    if min(abs(ang), abs(ang - math.pi / 4), abs(ang + math.pi / 4)) > _RAY_ANGLE_TOL:
        raise ValueError(
            f"bessel_k supports arg z in {{-pi/4, 0, +pi/4}}, got arg z = {ang:.6f}"
        )
    decayed = z.real > _K_DECAY_RE
    if decayed:
        val = 0j
    else:
        val = complex(_sp.kv(nu, z))
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise ArithmeticError(f"bessel_k({nu}, {z}) did not evaluate finitely")
        if val == 0:
            decayed = True
    if with_flag:
        return KValue(val, decayed)
    return val


def branch_power(k, s: float) -> complex:
    """(-k^2)**s on the upper half-plane, principal branch.

    Interior points use the principal logarithm of -k^2 directly (the
    image stays off the cut).  Boundary points return the continuous
    limit from Im k -> 0+, which is exp(-i*pi*s) * k**(2s).
    """
    k = as_wavenumber(k)
    s = float(s)
    if k.on_real_axis:
        k0 = k.k.real
        return cmath.exp(complex(2.0 * s * math.log(k0), -math.pi * s))
    return cmath.exp(s * cmath.log(-(k.k * k.k)))


def bessel_j_orders(nus: np.ndarray, z) -> np.ndarray:
    """Vectorized J over an array of orders at one (possibly complex)
    argument.  Unvalidated plumbing for partial-wave sums, where orders
    exceed the typed surface's range by design."""
    return _sp.jv(nus, z)


def hankel1_orders(nus: np.ndarray, z) -> np.ndarray:
    """Vectorized H1 over an array of orders; see bessel_j_orders."""
    return _sp.hankel1(nus, z)
