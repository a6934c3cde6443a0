"""Typed special-function surface: frozen oracle values, classical
identities, ray/branch conventions."""

import cmath
import math

import numpy as np
import pytest

from abx.specfun import (
    Order,
    UpperHalfK,
    bessel_j,
    bessel_k,
    bessel_y,
    branch_power,
    gamma_fn,
    hankel1,
)

from _oracles import mp_complex, series_besselk

PI = math.pi


class TestGamma:
    def test_half_integer_values(self):
        assert gamma_fn(0.5) == pytest.approx(math.sqrt(PI), rel=1e-12)
        assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-12)
        assert gamma_fn(1.5) == pytest.approx(math.sqrt(PI) / 2, rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            gamma_fn(0.0)
        with pytest.raises(ValueError):
            gamma_fn(-1.3)


class TestBesselJ:
    def test_half_order_closed_form(self):
        # J_{1/2}(x) = sqrt(2/(pi x)) sin x
        assert bessel_j(0.5, PI / 2) == pytest.approx(2.0 / PI, rel=1e-12)

    def test_zero_argument(self):
        assert bessel_j(0.3, 0.0) == 0.0

    def test_frozen_series_oracle_value(self):
        # extended-precision ascending series, frozen
        assert bessel_j(0.3, 5.0) == pytest.approx(-0.29682911012576076084, rel=1e-12)

    def test_rejects_negative_argument(self):
        with pytest.raises(ValueError):
            bessel_j(0.3, -1.0)

    def test_order_range(self):
        with pytest.raises(ValueError):
            Order(2.0)
        with pytest.raises(ValueError):
            Order(-0.1)
        with pytest.raises(ValueError):
            bessel_j(2.5, 1.0)


class TestBesselY:
    def test_half_order_zero(self):
        # Y_{1/2}(x) = -sqrt(2/(pi x)) cos x vanishes at x = pi/2
        assert bessel_y(0.5, PI / 2) == pytest.approx(0.0, abs=1e-12)

    def test_half_order_at_pi(self):
        assert bessel_y(0.5, PI) == pytest.approx(math.sqrt(2.0 / PI**2), rel=1e-12)

    def test_frozen_reflection_oracle_value(self):
        assert bessel_y(0.25, 2.0) == pytest.approx(0.39273839961538505532, rel=1e-12)

    def test_rejects_origin(self):
        with pytest.raises(ValueError):
            bessel_y(0.3, 0.0)


class TestHankel1:
    def test_half_order_closed_form(self):
        # H1_{1/2}(x) = -i sqrt(2/(pi x)) e^{ix}
        want = -1j * math.sqrt(2.0 / PI) * cmath.exp(1j)
        got = hankel1(0.5, 1.0)
        assert got == pytest.approx(want, rel=1e-12)

    def test_bitwise_composition(self):
        for nu, x in [(0.3, 0.7), (1.7, 12.0), (0.99, 3.3)]:
            assert hankel1(nu, x) == complex(bessel_j(nu, x), bessel_y(nu, x))

    def test_large_argument_asymptotics(self):
        nu, x = 0.3, 50.0
        asym = math.sqrt(2.0 / (PI * x)) * cmath.exp(1j * (x - nu * PI / 2 - PI / 4))
        # leading-order deviation is (4 nu^2 - 1)/(8x) = 1.6e-3 here
        assert abs(hankel1(nu, x) - asym) / abs(asym) < 2e-3
        corrected = asym * (1.0 + 1j * (4.0 * nu * nu - 1.0) / (8.0 * x))
        assert abs(hankel1(nu, x) - corrected) / abs(corrected) < 1e-4


class TestBesselK:
    def test_half_order_real_axis(self):
        # K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}
        assert bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(PI / 2) / math.e, rel=1e-12)

    def test_order_symmetry_against_oracle(self):
        # K_nu = K_{-nu}; the negative order goes through the oracle
        for alpha in (0.1, 0.5, 0.9):
            for r in (0.5, 2.0, 10.0):
                z = cmath.exp(-1j * PI / 4) * r
                neg = mp_complex(series_besselk(-alpha, z))
                assert bessel_k(alpha, z) == pytest.approx(neg, rel=1e-9)

    def test_connection_to_hankel_on_both_rays(self):
        # K_nu(z) = (i pi/2) e^{i nu pi/2} H1_nu(iz), checked on both rays
        from scipy.special import hankel1 as sp_h1

        for alpha in (0.1, 0.5, 0.9):
            for nu in (alpha, 1.0 - alpha):
                for r in (0.1, 1.0, 10.0):
                    for sgn in (-1.0, 1.0):
                        z = cmath.exp(sgn * 1j * PI / 4) * r
                        want = 0.5j * PI * cmath.exp(1j * nu * PI / 2) * complex(sp_h1(nu, 1j * z))
                        got = bessel_k(nu, z)
                        assert abs(got - want) <= 1e-9 * abs(want)

    def test_extended_precision_oracle_on_rays(self):
        for nu in (0.25, 0.8, 1.3):
            for r in (0.3, 3.0, 20.0):
                z = cmath.exp(1j * PI / 4) * r
                want = mp_complex(series_besselk(nu, z))
                assert bessel_k(nu, z) == pytest.approx(want, rel=1e-9)

    def test_unsupported_ray_rejected(self):
        with pytest.raises(ValueError):
            bessel_k(0.3, cmath.exp(1j * PI / 3))
        with pytest.raises(ValueError):
            bessel_k(0.3, -2.0 + 0j)

    def test_underflow_returns_zero_with_flag(self):
        val, decayed = bessel_k(0.5, cmath.exp(1j * PI / 4) * 1200.0, with_flag=True)
        assert val == 0j
        assert decayed
        val, decayed = bessel_k(0.5, cmath.exp(1j * PI / 4) * 2.0, with_flag=True)
        assert not decayed and val != 0


class TestBranchPower:
    def test_at_upper_imaginary_unit(self):
        # k = i: -k^2 = 1
        for s in (0.2, 0.5, 0.8):
            assert branch_power(1j, s) == pytest.approx(1.0, rel=1e-14)

    def test_at_reference_point(self):
        alpha = 0.37
        want = cmath.exp(-1j * PI * alpha / 2)
        assert branch_power(cmath.exp(1j * PI / 4), alpha) == pytest.approx(want, rel=1e-14)

    def test_real_axis_boundary_is_limit_from_above(self):
        # continuous limit of the principal branch from Im k -> 0+
        k0, s = 2.0, 0.3
        boundary = branch_power(UpperHalfK(k0, on_real_axis=True), s)
        assert boundary == pytest.approx(4.0**0.3 * cmath.exp(-0.3j * PI), rel=1e-14)
        for eps in (1e-4, 1e-6, 1e-8):
            interior = branch_power(complex(k0, eps), s)
            assert abs(interior - boundary) < 5.0 * eps

    def test_continuity_along_upper_half_path(self):
        s = 0.41
        thetas = np.linspace(0.02, PI - 0.02, 400)
        vals = [branch_power(2.0 * cmath.exp(1j * t), s) for t in thetas]
        steps = np.abs(np.diff(vals))
        assert steps.max() < 0.05  # no branch jumps along the arc

    def test_real_on_bound_state_ray(self):
        for kappa in (1e-3, 1.0, 1e3):
            for s in (0.3, 0.62):
                val = branch_power(complex(0.0, kappa), s)
                assert abs(val.imag) <= 1e-12 * abs(val)

    def test_rejects_zero_and_lower_half(self):
        with pytest.raises(ValueError):
            branch_power(0.0, 0.3)
        with pytest.raises(ValueError):
            branch_power(1.0 - 1j, 0.3)
        with pytest.raises(ValueError):
            UpperHalfK(-2.0, on_real_axis=True)


class TestWronskian:
    def test_wronskian_identity_random_sweep(self):
        # J_nu Y'_nu - J'_nu Y_nu = 2/(pi x); derivatives from the
        # standard recurrence Z'_nu = Z_{nu-1} - (nu/x) Z_nu
        from scipy.special import jv, yv

        rng = np.random.default_rng(42)
        for _ in range(100):
            nu = float(rng.uniform(0.02, 0.98))
            x = float(rng.uniform(0.1, 100.0))
            j, y = bessel_j(nu, x), bessel_y(nu, x)
            jp = jv(nu - 1.0, x) - (nu / x) * j
            yp = yv(nu - 1.0, x) - (nu / x) * y
            want = 2.0 / (PI * x)
            assert (j * yp - jp * y) == pytest.approx(want, rel=1e-9)
