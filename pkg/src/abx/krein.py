"""Resolvent machinery for the extension family.

The resolvent of any member of the family is the resolvent of the
regular (pure-flux) Hamiltonian plus a rank-two correction built from
channel wave elements:

    R^U(k; x, y) = R^AB(k; x, y)
                   + sum_{j,l} p(k)_{jl} conj(psi_k-row^{(j)}(y)) psi_k^{(l)}(x)

with k in the upper half-plane (boundary values on the positive real
axis are limits from above).  The pieces are:

* ``ab_resolvent_kernel`` -- the reference kernel, a partial-wave sum
  (i/4) sum_m e^{i m (phi - zeta)} J_{|m+alpha|}(k r_min) H1_{|m+alpha|}(k r_max).

* ``analytic_basis`` -- the channel elements psi_k, analytic in k,

      psi_k^{(0)}(r)        = N (i pi/2) e^{i pi alpha/4} k^alpha H1_alpha(k r)
      psi_k^{(-1)}(r, phi)  = M (i pi/2) e^{i pi (1-alpha)/4} k^{1-alpha}
                              H1_{1-alpha}(k r) e^{-i phi}

  normalized so the elements at the reference point k0 = e^{i pi/4}
  coincide with the (unit-L2-norm) deficiency elements r^{-1/2} xi(r)
  e^{i m phi}.  The closed form is fixed by the requirement that the
  r^{-nu} singular coefficient be independent of k; it is gated by the
  quadrature check of the overlap matrix below.

* ``a_matrix`` -- overlaps A(k1,k2)_{jl} = (psi-row_{k1}^{(j)}, psi_{k2}^{(l)}),
  diagonal with difference quotients of (-k^2)^alpha and (-k^2)^{1-alpha}.

* ``p_at_i`` / ``p_of_k`` -- the 2x2 coupling matrix at the reference
  point and its k-dependent continuation; ``p_of_k`` evaluates both the
  defining 2x2 inversion and the closed entry formulas and insists they
  agree to 1e-10 before returning the closed form.

* ``d_coeffs`` / ``d_of_k`` -- the channel determinant
  D(k) = c1 (-k^2) + c_alpha (-k^2)^alpha + c_{1-alpha} (-k^2)^{1-alpha} + c0
  whose roots on the ray k = i kappa are the bound states.  The four
  bracketed coefficients are real; the common factor e^{-i eta}/sin(pi
  alpha) is kept separate.  ``d_of_k`` cross-checks the coefficient
  expansion against the determinant on every call.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConsistencyError, NearEigenvalueError
from .extension import ExtensionParams, as_alpha, p_channel_norm, s_channel_norm
from .specfun import (
    UpperHalfK,
    as_wavenumber,
    bessel_j_orders,
    branch_power,
    hankel1_orders,
)

__all__ = [
    "REFERENCE_K",
    "AMatrix",
    "PMatrix",
    "CCoeffs",
    "AnalyticBasisElement",
    "ab_resolvent_kernel",
    "analytic_basis",
    "a_matrix",
    "p_at_i",
    "p_of_k",
    "d_coeffs",
    "d_of_k",
    "full_resolvent_kernel",
    "truncation_order",
]

REFERENCE_K = UpperHalfK(cmath.exp(1j * math.pi / 4))

_DUAL_PATH_TOL = 1e-10
_COINCIDENCE_TOL = 1e-12


def truncation_order(k_abs: float, r_outer: float) -> int:
    """Partial-wave cutoff: covers the classically allowed orders plus a
    turning-point margin scaling like (k r)^{1/3}."""
    z = k_abs * r_outer
    return int(math.ceil(z) + math.ceil(8.0 * z ** (1.0 / 3.0)) + 20)


def ab_resolvent_kernel(alpha, k, x, y, extra_terms: int = 0) -> complex:
    """Reference resolvent kernel at observation x = (r, phi), source
    y = (rho, zeta).

    The m-sum is truncated at ``truncation_order``; ``extra_terms`` pads
    the cutoff (used by convergence tests).  Coincident points are
    rejected (logarithmic singularity).
    """
    alpha = as_alpha(alpha)
    k = as_wavenumber(k)
    r, phi = float(x[0]), float(x[1])
    rho, zeta = float(y[0]), float(y[1])
    if r <= 0.0 or rho <= 0.0:
        raise ValueError("kernel arguments need positive radii")
    dang = (phi - zeta) % (2.0 * math.pi)
    dang = min(dang, 2.0 * math.pi - dang)
    if abs(r - rho) <= _COINCIDENCE_TOL * max(r, rho) and dang <= _COINCIDENCE_TOL:
        raise ValueError("kernel is singular at coincident points x = y")
    r_in, r_out = min(r, rho), max(r, rho)
    mmax = truncation_order(abs(k.k), r_out) + int(extra_terms)
    m = np.arange(-mmax - 1, mmax + 1)
    nu = np.abs(m + alpha)
    j_in = bessel_j_orders(nu, k.k * r_in)
    # Orders far above |k| r_in underflow to exactly 0; skip their H1
    # factors, which may be astronomically large.
    mask = j_in != 0
    terms = np.zeros(m.shape, dtype=complex)
    terms[mask] = j_in[mask] * hankel1_orders(nu[mask], k.k * r_out)
    return 0.25j * complex(np.sum(np.exp(1j * m * (phi - zeta)) * terms))


def _basis_order_coef(channel: int, alpha: float) -> tuple[float, complex]:
    """Order nu and the k-independent prefactor of the channel element."""
    if channel == 0:
        nu = alpha
        norm = s_channel_norm(alpha)
    else:
        nu = 1.0 - alpha
        norm = p_channel_norm(alpha)
    return nu, norm * (0.5j * math.pi) * cmath.exp(1j * math.pi * nu / 4.0)


def _k_power(k: UpperHalfK, s: float) -> complex:
    """k**s, principal branch; continuous down to the positive real axis."""
    return cmath.exp(s * cmath.log(k.k))


@dataclass(frozen=True)
class AnalyticBasisElement:
    """One channel element psi_k as an immutable (r, phi) -> complex
    evaluator; safe to share across threads."""

    channel: int
    k: UpperHalfK
    nu: float
    prefactor: complex

    def __call__(self, r, phi):
        rad = self.prefactor * hankel1_orders(self.nu, self.k.k * np.asarray(r))
        if self.channel == 0:
            return rad if np.ndim(r) else complex(rad)
        out = rad * np.exp(-1j * np.asarray(phi))
        return out if (np.ndim(r) or np.ndim(phi)) else complex(out)


def analytic_basis(channel: int, alpha, k) -> AnalyticBasisElement:
    """The channel-(0 or -1) element of the analytic family psi_k."""
    if channel not in (0, -1):
        raise ValueError(f"channel must be 0 or -1, got {channel}")
    alpha = as_alpha(alpha)
    k = as_wavenumber(k)
    nu, coef = _basis_order_coef(channel, alpha)
    return AnalyticBasisElement(channel, k, nu, coef * _k_power(k, nu))


def _psi_bar(channel: int, alpha: float, k: UpperHalfK) -> Callable:
    """Evaluator y -> conj(psi_{-conj(k)}^{(channel)}(y)), the row element
    of the rank-two correction.

    For interior k this is the literal conjugate of the basis element at
    -conj(k).  On the real axis it is the continuous limit, which is
    again outgoing:  conj-row^{(0)} = N (i pi/2) e^{-i pi alpha/4}
    k^alpha H1_alpha(k rho), and the channel -1 analogue with e^{+i zeta}.
    """
    nu, coef = _basis_order_coef(channel, alpha)
    if k.on_real_axis:
        k0 = k.k.real
        pref = coef * cmath.exp(-1j * math.pi * nu / 2.0) * k0 ** nu

        def row(rho, zeta):
            val = pref * hankel1_orders(nu, k0 * np.asarray(rho))
            if channel != 0:
                val = val * np.exp(1j * np.asarray(zeta))
            return val

        return row

    elem = analytic_basis(channel, alpha, UpperHalfK(-k.k.conjugate()))

    def row(rho, zeta):
        return np.conj(elem(rho, zeta))

    return row


@dataclass(frozen=True)
class AMatrix:
    """Overlap matrix of the analytic family; diagonal by channel
    orthogonality (the Kronecker deltas are exact zeros)."""

    entries: np.ndarray
    k1: UpperHalfK
    k2: UpperHalfK


def a_matrix(alpha, k1, k2) -> AMatrix:
    """Overlaps A(k1, k2); the coincidence k1^2 = k2^2 is routed to the
    derivative (l'Hopital) limit of the difference quotients."""
    alpha = as_alpha(alpha)
    k1 = as_wavenumber(k1)
    k2 = as_wavenumber(k2)
    s = math.sin(math.pi * alpha / 2.0)
    c = math.cos(math.pi * alpha / 2.0)
    k1sq = k1.k * k1.k
    k2sq = k2.k * k2.k
    denom = k2sq - k1sq
    if abs(denom) <= 1e-12 * (abs(k1sq) + abs(k2sq)):
        a00 = alpha * branch_power(k1, alpha - 1.0) / s
        a11 = (1.0 - alpha) * branch_power(k1, -alpha) / c
    else:
        a00 = (branch_power(k1, alpha) - branch_power(k2, alpha)) / (s * denom)
        a11 = (branch_power(k1, 1.0 - alpha) - branch_power(k2, 1.0 - alpha)) / (c * denom)
    return AMatrix(np.array([[a00, 0j], [0j, a11]]), k1, k2)


@dataclass(frozen=True)
class PMatrix:
    """Channel coupling matrix, ordered channels (0, -1)."""

    entries: np.ndarray
    at_k: complex


def p_at_i(params: ExtensionParams, alpha) -> PMatrix:
    """Coupling matrix at the reference point k0 = e^{i pi/4}:
    -(i/2) (I + conj(U)) written out in (eta, a, b)."""
    as_alpha(alpha)
    e = cmath.exp(-1j * params.eta)
    a, b = params.a, params.b
    m = -0.5j * np.array(
        [[1.0 + e * a.conjugate(), -e * b], [e * b.conjugate(), 1.0 + e * a]]
    )
    return PMatrix(m, REFERENCE_K.k)


@dataclass(frozen=True)
class CCoeffs:
    """Real bracketed coefficients of the channel determinant, with the
    common factor e^{-i eta}/sin(pi alpha) kept separate."""

    c1: float
    c_alpha: float
    c_1malpha: float
    c0: float
    common_factor: complex


def d_coeffs(params: ExtensionParams, alpha) -> CCoeffs:
    """Determinant coefficients in the variable E = -k^2.

    All four brackets are real; the cross-check against determinant
    values happens in d_of_k on every evaluation.
    """
    alpha = as_alpha(alpha)
    eta = params.eta
    ap, app = params.a.real, params.a.imag
    s = math.sin(math.pi * alpha / 2.0)
    c = math.cos(math.pi * alpha / 2.0)
    c1 = -(ap + math.cos(eta))
    c_alpha = ap * s + math.sin(math.pi * alpha / 2.0 - eta) + app * c
    c_1malpha = ap * c + math.cos(math.pi * alpha / 2.0 + eta) - app * s
    c0 = math.sin(eta) - app * math.cos(math.pi * alpha) - ap * math.sin(math.pi * alpha)
    common = cmath.exp(-1j * eta) / math.sin(math.pi * alpha)
    return CCoeffs(c1, c_alpha, c_1malpha, c0, common)


def _d_determinant_path(params: ExtensionParams, alpha: float, k: UpperHalfK) -> complex:
    pref = p_at_i(params, alpha).entries
    amat = a_matrix(alpha, k, REFERENCE_K).entries
    m = np.eye(2) + (k.k * k.k - 1j) * (pref @ amat)
    return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def d_of_k(params: ExtensionParams, alpha, k) -> complex:
    """Channel determinant D(k), coefficient expansion cross-checked
    against the literal 2x2 determinant."""
    alpha = as_alpha(alpha)
    k = as_wavenumber(k)
    cf = d_coeffs(params, alpha)
    val = cf.common_factor * (
        cf.c1 * branch_power(k, 1.0)
        + cf.c_alpha * branch_power(k, alpha)
        + cf.c_1malpha * branch_power(k, 1.0 - alpha)
        + cf.c0
    )
    det = _d_determinant_path(params, alpha, k)
    scale = max(abs(val), abs(det), 1e-300)
    if abs(val - det) > _DUAL_PATH_TOL * max(scale, 1.0):
        raise ConsistencyError(
            f"determinant paths disagree at k={k.k}: {val} vs {det}"
        )
    return complex(val)


def p_of_k(params: ExtensionParams, alpha, k) -> PMatrix:
    """Coupling matrix p(k), computed both by inverting
    1 + (k^2 - i) p(k0) A(k, k0) and by the closed entry formulas; the
    two must agree to 1e-10 relative and the closed form is returned.

    Raises NearEigenvalueError when |D(k)| < 1e-12 (1 + |k|^2).
    """
    alpha = as_alpha(alpha)
    k = as_wavenumber(k)
    dval = d_of_k(params, alpha, k)
    if abs(dval) < 1e-12 * (1.0 + abs(k.k) ** 2):
        raise NearEigenvalueError(k.k, dval)

    eta = params.eta
    a, b = params.a, params.b
    e = cmath.exp(-1j * eta)
    s = math.sin(math.pi * alpha / 2.0)
    c = math.cos(math.pi * alpha / 2.0)
    ref_pow_a = cmath.exp(-1j * math.pi * alpha / 2.0)          # (-i)^alpha
    ref_pow_1a = cmath.exp(-1j * math.pi * (1.0 - alpha) / 2.0)  # (-i)^{1-alpha}
    drive = a.real + math.cos(eta)
    p00 = e / (2.0 * dval) * (
        drive / c * (branch_power(k, 1.0 - alpha) - ref_pow_1a)
        - 1j * (cmath.exp(1j * eta) + a.conjugate())
    )
    p0m1 = 1j * e / (2.0 * dval) * b
    pm10 = -1j * e / (2.0 * dval) * b.conjugate()
    pm1m1 = e / (2.0 * dval) * (
        drive / s * (branch_power(k, alpha) - ref_pow_a)
        - 1j * (cmath.exp(1j * eta) + a)
    )
    closed = np.array([[p00, p0m1], [pm10, pm1m1]])

    pref = p_at_i(params, alpha).entries
    amat = a_matrix(alpha, k, REFERENCE_K).entries
    system = np.eye(2) + (k.k * k.k - 1j) * (pref @ amat)
    inverted = np.linalg.solve(system, pref)

    scale = max(np.linalg.norm(closed), np.linalg.norm(inverted), 1e-300)
    if np.linalg.norm(closed - inverted) > _DUAL_PATH_TOL * max(scale, 1e-30):
        raise ConsistencyError(
            f"coupling-matrix paths disagree at k={k.k}: "
            f"closed={closed.tolist()} inverted={inverted.tolist()}"
        )
    return PMatrix(closed, k.k)


def full_resolvent_kernel(params: ExtensionParams, alpha, k, x, y) -> complex:
    """Kernel of the resolvent of the selected extension: reference
    kernel plus the rank-two channel correction.  Near-eigenvalue k is
    rejected (via p_of_k)."""
    alpha = as_alpha(alpha)
    k = as_wavenumber(k)
    out = ab_resolvent_kernel(alpha, k, x, y)
    pk = p_of_k(params, alpha, k).entries
    channels = (0, -1)
    cols = [analytic_basis(ch, alpha, k) for ch in channels]
    for i, ch_row in enumerate(channels):
        if not np.any(pk[i, :]):
            continue
        row_val = complex(_psi_bar(ch_row, alpha, k)(y[0], y[1]))
        for l, _ in enumerate(channels):
            if pk[i, l] != 0:
                out += complex(pk[i, l]) * row_val * complex(cols[l](x[0], x[1]))
    return out
