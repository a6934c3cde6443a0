"""Extension family: unitary map round trips, deficiency elements, norms,
classification."""

import cmath
import math

import numpy as np
import pytest

from abx.extension import (
    DeficiencyElement,
    ExtensionKind,
    ExtensionParams,
    FluxAlpha,
    build_u_matrix,
    canonical_params,
    classify,
    deficiency_radial,
    l2_norm_deficiency,
    u_matrix_params,
)

from _oracles import mp_complex, observed_orders, random_params, series_besselk

PI = math.pi


class TestParams:
    def test_alpha_bounds(self):
        FluxAlpha(1e-6)
        FluxAlpha(1.0 - 1e-6)
        with pytest.raises(ValueError):
            FluxAlpha(0.0)
        with pytest.raises(ValueError):
            FluxAlpha(1.0)
        with pytest.raises(ValueError):
            FluxAlpha(-0.3)

    def test_norm_constraint(self):
        with pytest.raises(ValueError, match=r"\|a\|\^2 \+ \|b\|\^2"):
            ExtensionParams(0.0, 0.9, 0.1)

    def test_eta_normalized(self):
        p = ExtensionParams(3.0 * PI, -1.0, 0.0)
        assert -PI < p.eta <= PI
        assert p.eta == pytest.approx(PI)


class TestUMatrix:
    def test_ab_point_is_minus_identity(self):
        u = build_u_matrix(ExtensionParams.ab_point()).entries
        assert np.allclose(u, -np.eye(2), atol=0)

    def test_pure_coupling_point(self):
        u = build_u_matrix(ExtensionParams(0.0, 0.0, 1.0)).entries
        assert np.allclose(u, np.array([[0.0, -1.0], [1.0, 0.0]]), atol=0)

    def test_unitarity_random(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            eta, a, b = random_params(rng)
            u = build_u_matrix(ExtensionParams(eta, a, b))
            assert u.unitarity_residual() <= 1e-12

    def test_round_trip_bijection(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            eta, a, b = random_params(rng)
            p = canonical_params(ExtensionParams(eta, a, b))
            q = u_matrix_params(build_u_matrix(p))
            assert q.eta == pytest.approx(p.eta, abs=1e-12)
            assert q.a == pytest.approx(p.a, abs=1e-12)
            assert q.b == pytest.approx(p.b, abs=1e-12)

    def test_redundant_representation_same_matrix(self):
        p = ExtensionParams(0.3, 0.6 + 0.2j, math.sqrt(1 - abs(0.6 + 0.2j) ** 2))
        q = ExtensionParams(p.eta + PI, -p.a, -p.b)
        assert np.allclose(build_u_matrix(p).entries, build_u_matrix(q).entries, atol=1e-15)


class TestClassify:
    def test_ab(self):
        assert classify(ExtensionParams(0.0, -1.0, 0.0)).kind is ExtensionKind.AB
        # the redundant representation of the same matrix
        assert classify(ExtensionParams(PI, 1.0, 0.0)).kind is ExtensionKind.AB

    def test_rotationally_invariant(self):
        tau = 0.9
        cls = classify(ExtensionParams(0.4, cmath.exp(1j * tau), 0.0))
        assert cls.kind is ExtensionKind.ROTATIONALLY_INVARIANT
        assert cls.tau == pytest.approx(tau)

    def test_mixing(self):
        cls = classify(ExtensionParams(0.0, 0.0, cmath.exp(0.5j)))
        assert cls.kind is ExtensionKind.MIXING
        assert cls.tau is None

    def test_partition_of_random_parameter_space(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            eta, a, b = random_params(rng)
            kind = classify(ExtensionParams(eta, a, b)).kind
            assert kind in (ExtensionKind.AB, ExtensionKind.ROTATIONALLY_INVARIANT,
                            ExtensionKind.MIXING)
            if abs(b) > 1e-10:
                assert kind is ExtensionKind.MIXING


class TestDeficiencyElements:
    def test_frozen_value_s_channel(self):
        # alpha = 1/2, r = 1; extended-precision oracle value
        got = deficiency_radial(DeficiencyElement(0, +1), 0.5, 1.0)
        assert got == pytest.approx(0.10614754112015806212 + 0.20845428803369253944j,
                                    rel=1e-11)

    def test_matches_oracle_both_channels(self):
        for alpha in (0.2, 0.55):
            for r in (0.4, 2.5):
                got = deficiency_radial(DeficiencyElement(-1, +1), alpha, r)
                norm = math.sqrt(2.0 * math.sin(PI * alpha / 2)) / PI
                want = norm * math.sqrt(r) * mp_complex(
                    series_besselk(1.0 - alpha, cmath.exp(-1j * PI / 4) * r))
                assert got == pytest.approx(want, rel=1e-10)

    def test_minus_to_plus_conjugate_ratio(self):
        # xi_-(r) / conj(xi_+(r)) = e^{i pi nu / 2} for every r
        for alpha, channel in ((0.3, 0), (0.3, -1), (0.8, 0)):
            nu = alpha if channel == 0 else 1.0 - alpha
            want = cmath.exp(1j * PI * nu / 2)
            for r in (0.2, 1.0, 5.0):
                plus = deficiency_radial(DeficiencyElement(channel, +1), alpha, r)
                minus = deficiency_radial(DeficiencyElement(channel, -1), alpha, r)
                assert minus / plus.conjugate() == pytest.approx(want, rel=1e-12)

    def test_small_r_power_law(self):
        # xi ~ r^{1/2 - nu} near the origin
        for alpha, channel in ((0.3, 0), (0.7, -1)):
            nu = alpha if channel == 0 else 1.0 - alpha
            e = DeficiencyElement(channel, +1)
            # subleading K term enters at relative O(r^{2 nu})
            r1, r2 = 1e-6, 2e-6
            ratio = abs(deficiency_radial(e, alpha, r2) / deficiency_radial(e, alpha, r1))
            assert ratio == pytest.approx(2.0 ** (0.5 - nu), rel=1e-3)

    def test_defect_ode_residual_second_order(self):
        # (-d^2/dr^2 + (nu^2 - 1/4)/r^2) xi = (sign) i xi, residual O(h^2)
        for alpha in (0.1, 0.5, 0.9):
            for channel in (0, -1):
                nu = alpha if channel == 0 else 1.0 - alpha
                for sign in (+1, -1):
                    e = DeficiencyElement(channel, sign)

                    def xi(r):
                        return deficiency_radial(e, alpha, r)

                    resid = []
                    for h in (0.02, 0.01, 0.005):
                        worst = 0.0
                        for r in (0.7, 1.6, 3.1):
                            d2 = (xi(r + h) - 2.0 * xi(r) + xi(r - h)) / h**2
                            lhs = -d2 + (nu * nu - 0.25) / r**2 * xi(r)
                            worst = max(worst, abs(lhs - sign * 1j * xi(r)))
                        resid.append(worst)
                    orders = observed_orders(resid)
                    assert min(orders) >= 1.8, (alpha, channel, sign, resid)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(ValueError):
            deficiency_radial(DeficiencyElement(0, 1), 0.5, 0.0)


class TestDeficiencyNorms:
    def test_norms_equal_across_channels(self):
        for alpha in (0.1, 0.5, 0.9):
            n0 = l2_norm_deficiency(DeficiencyElement(0, +1), alpha)
            n1 = l2_norm_deficiency(DeficiencyElement(-1, +1), alpha)
            assert abs(n0 - n1) <= 1e-8

    def test_radial_norm_value(self):
        # common value 1/sqrt(2 pi); recorded, and the corresponding
        # two-dimensional elements r^{-1/2} xi e^{i m phi} have unit norm
        want = 1.0 / math.sqrt(2.0 * PI)
        got = l2_norm_deficiency(DeficiencyElement(0, +1), 0.5)
        assert got == pytest.approx(want, abs=1e-8)
        assert 2.0 * PI * got**2 == pytest.approx(1.0, abs=1e-7)

    def test_norm_independent_of_sign(self):
        for alpha in (0.25, 0.75):
            np_ = l2_norm_deficiency(DeficiencyElement(0, +1), alpha)
            nm = l2_norm_deficiency(DeficiencyElement(0, -1), alpha)
            assert abs(np_ - nm) <= 1e-10
