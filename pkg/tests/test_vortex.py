"""Vortex profiles: trial family, numeric solution, effective potentials."""

import math

import numpy as np
import pytest

from vortexbound import model, vortex
from vortexbound.errors import ValidationError

ALPHA = model.DEFAULT_ALPHA


@pytest.fixture(scope="module")
def ode_profile():
    return vortex.solve_vortex_ode()


class TestVariational:
    def test_zero_at_origin(self):
        assert vortex.variational_profile(ALPHA)(0.0) == 0.0

    def test_continuity_at_crossover(self):
        var = vortex.variational_profile(ALPHA)
        ra = var.r_alpha
        core = 0.5 * ALPHA * ra
        tail = math.sqrt(1.0 - 1.0 / (ALPHA * ra) ** 2)
        assert core == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)
        assert tail == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)

    def test_first_derivative_continuous(self):
        var = vortex.variational_profile(ALPHA)
        ra = var.r_alpha
        h = 1e-7
        left = (var(ra) - var(ra - h)) / h
        right = (var(ra + h) - var(ra)) / h
        assert left == pytest.approx(right, rel=1e-5)
        # closed forms: core slope alpha/2, tail slope 1/(alpha^2 ra^3 phi)
        assert 0.5 * ALPHA == pytest.approx(
            1.0 / (ALPHA ** 2 * ra ** 3 * var(ra)), rel=1e-14)

    def test_far_field_template(self):
        var = vortex.variational_profile(ALPHA)
        for r in (30.0, 100.0, 400.0):
            assert var(r) == pytest.approx(1.0 - 0.5 / (ALPHA * r) ** 2, rel=1e-6)

    def test_monotone(self):
        r = np.linspace(1e-4, 50.0, 5000)
        phi = vortex.variational_profile(ALPHA)(r)
        assert np.all(np.diff(phi) > 0)

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValidationError):
            vortex.variational_profile(-1.0)


class TestVortexOde:
    def test_residual_below_threshold(self, ode_profile):
        # construction enforces max residual < 1e-8 on interior nodes
        assert ode_profile.max_residual < 1e-8

    def test_tail_matches_expansion_at_ten(self, ode_profile):
        assert abs(ode_profile(10.0) - (1.0 - 0.5 / 100.0)) < 1e-3

    def test_core_slope(self, ode_profile):
        # frozen from bisection shooting refined on [0, 40]
        assert ode_profile.slope0 == pytest.approx(0.58319, abs=1e-3)

    def test_monotone(self, ode_profile):
        phi = ode_profile(np.linspace(1e-3, 39.0, 4000))
        assert np.all(np.diff(phi) > 0)

    def test_bounded_below_one(self, ode_profile):
        phi = ode_profile(np.linspace(1e-3, 39.0, 4000))
        assert np.all(phi < 1.0) and np.all(phi >= 0.0)

    def test_linear_core(self, ode_profile):
        r = np.array([1e-3, 2e-3, 4e-3])
        phi = ode_profile(r)
        assert phi == pytest.approx(ode_profile.slope0 * r, rel=1e-4)

    def test_trivial_charge_is_homogeneous(self):
        # n = 0: phi == 1 solves phi'' + phi'/r - 0 + (1 - phi^2) phi = 0
        r = np.linspace(0.5, 20.0, 50)
        residual = 0.0 + 0.0 / r - 0.0 + (1.0 - 1.0 ** 2) * 1.0
        assert np.all(residual == 0.0)

    def test_precondition_validation(self):
        with pytest.raises(ValidationError):
            vortex.solve_vortex_ode(r_max=10.0)
        with pytest.raises(ValidationError):
            vortex.solve_vortex_ode(grid_n=100)


class TestEffectivePotential:
    def test_asymptotic_depth(self):
        var = vortex.variational_profile(ALPHA)
        assert vortex.effective_potential(var, 6.0, 0, 1e4) == pytest.approx(6.0, rel=1e-6)

    @pytest.mark.parametrize("ell", [1, 2])
    def test_maximum_depth_formula(self, ell):
        # depth below the continuum equals alpha gamma (gamma_alpha - ell)
        gamma2 = 6.0
        gamma = math.sqrt(gamma2)
        ga = gamma / ALPHA
        var = vortex.variational_profile(ALPHA)
        r = np.linspace(1e-3, 60.0, 400000)
        vmin = np.min(vortex.effective_potential(var, gamma2, ell, r))
        assert gamma2 - vmin == pytest.approx(ALPHA * gamma * (ga - ell), rel=1e-6)

    def test_no_well_for_blocked_channel(self):
        # gamma^2 = 6, l = 3: potential entirely above the continuum
        var = vortex.variational_profile(ALPHA)
        r = np.linspace(1e-3, 200.0, 200000)
        assert np.min(vortex.effective_potential(var, 6.0, 3, r)) >= 6.0

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(ValidationError):
            vortex.effective_potential(vortex.variational_profile(), 6.0, 0, 0.0)


class TestProfileCompare:
    def test_self_comparison_vanishes(self, ode_profile):
        gap, _ = vortex.profile_compare(ALPHA, ode_profile)
        var_as_ode = vortex.RadialProfile(
            r=np.linspace(1e-6, 40.0, 4000),
            phi=vortex.variational_profile(ALPHA)(np.linspace(1e-6, 40.0, 4000)),
            kind=vortex.VARIATIONAL, slope0=0.5 * ALPHA, alpha=ALPHA)
        self_gap, _ = vortex.profile_compare(ALPHA, var_as_ode)
        assert self_gap < 1e-6 < gap

    def test_default_alpha_beats_two(self, ode_profile):
        gap_default, _ = vortex.profile_compare(ALPHA, ode_profile)
        gap_two, _ = vortex.profile_compare(2.0, ode_profile)
        assert gap_default < gap_two

    def test_reports_finite_gap(self, ode_profile):
        gap, r_at = vortex.profile_compare(ALPHA, ode_profile)
        assert 0.0 < gap < 0.2 and 0.0 < r_at < 10.0
