"""Closed-form warped curvature, the power substitution, and the Laplacian."""

import math

import numpy as np
import pytest

from curvlab.errors import DomainError
from curvlab.geometry import BaseGeometry, DimensionConstants
from curvlab.warp import (cone_log_curvature, default_probe_grid, ode_residual,
                          parse_field, parse_profile, power_law_curvature,
                          substitute_u, warped_laplacian,
                          warped_scalar_curvature)


class TestDimensionConstants:
    def test_n3_values(self):
        c = DimensionConstants(3)
        assert c.c_n == pytest.approx(1.0 / 8.0)
        assert c.c_np1 == pytest.approx(1.0 / 6.0)
        assert c.subst_exp == 2.0
        assert c.conf_exp == 2.0
        assert c.nonlin_exp == 0.0

    def test_rejects_n1(self):
        with pytest.raises(DomainError):
            DimensionConstants(1)


class TestWarpedScalarCurvature:
    def test_cone_over_unit_sphere_is_flat(self):
        f = parse_profile("t", domain_min=0.5)
        base = BaseGeometry.sphere(3, radius=1.0)  # R(g) = 6
        t = default_probe_grid(1.0, 100.0)
        R = warped_scalar_curvature(f, base, t)
        assert np.max(np.abs(R)) < 1e-12

    def test_exponential_warp_hyperbolic(self):
        f = parse_profile("exp(t)", domain_min=0.1)
        base = BaseGeometry.constant(3, 0.0)
        t = default_probe_grid(0.5, 20.0)
        R = warped_scalar_curvature(f, base, t)
        assert np.allclose(R, -12.0, rtol=1e-12)

    def test_constant_warp_rescales_base(self):
        lam = 2.5
        f = parse_profile(f"{lam}", domain_min=0.5)
        base = BaseGeometry.constant(4, 7.0)
        R = warped_scalar_curvature(f, base, 3.0)
        assert R == pytest.approx(7.0 / lam**2, rel=1e-14)

    def test_positivity_enforced(self):
        f = parse_profile("ln(t)", domain_min=0.5)  # negative on (0.5, 1)
        base = BaseGeometry.constant(3, 0.0)
        with pytest.raises(DomainError):
            warped_scalar_curvature(f, base, 0.7)

    def test_domain_min_enforced(self):
        f = parse_profile("t")
        with pytest.raises(DomainError):
            f.eval(1.0)


class TestSubstitution:
    def test_u_is_f_to_the_m(self):
        f = parse_profile("t*ln(t)", domain_min=2.0)
        u = substitute_u(f, 3)
        t = np.linspace(2.5, 20.0, 11)
        assert np.allclose(u.eval(t), (t*np.log(t))**2, rtol=1e-13)
        assert np.allclose(u.inverse(u.eval(t)), t*np.log(t), rtol=1e-13)

    def test_chain_rule_derivatives(self):
        f = parse_profile("t^2 + 1", domain_min=0.1)
        u = substitute_u(f, 5)  # m = 3
        t = 1.7
        h = 1e-5
        d1_fd = (u.eval(t + h) - u.eval(t - h)) / (2*h)
        d2_fd = (u.eval(t + h) - 2*u.eval(t) + u.eval(t - h)) / h**2
        assert u.d1(t) == pytest.approx(d1_fd, rel=1e-8)
        assert u.d2(t) == pytest.approx(d2_fd, rel=1e-5)


RANDOM_ATOMS = ["ln(t)", "sin(t/50)", "cos(t/90)", "sqrt(t)/40", "1/t"]


def random_profile(rng):
    """A random smooth profile kept positive on [2.5, 1e3] by construction:
    exp of a small random combination, times a power of t."""
    k = rng.integers(1, 4)
    picks = rng.choice(len(RANDOM_ATOMS), size=k, replace=False)
    coeffs = rng.uniform(-0.3, 0.3, size=k)
    inner = " + ".join(f"{c:.6f}*{RANDOM_ATOMS[i]}"
                       for c, i in zip(coeffs, picks))
    p = rng.uniform(0.2, 1.5)
    return f"t^{p:.6f} * exp({inner})"


class TestCurvatureOdeAlgebra:
    def test_residual_vanishes_for_random_profiles(self):
        # warped_scalar_curvature and the substituted second-order form are
        # algebraically equivalent: feeding the one into the other must
        # produce a zero residual for arbitrary smooth positive profiles.
        rng = np.random.default_rng(20240817)
        t = default_probe_grid(2.0, 1.0e3, 64)
        for trial in range(100):
            n = int(rng.integers(3, 9))
            src = random_profile(rng)
            f = parse_profile(src, domain_min=2.0)
            base = BaseGeometry.constant(n, float(rng.uniform(-20.0, 20.0)))
            u = substitute_u(f, n)
            R = warped_scalar_curvature(f, base, t)
            res = ode_residual(u, lambda s, R=R: R, base, t)
            scale = np.max(np.abs(R) * u.eval(t)) + 1.0
            assert np.max(np.abs(res)) / scale < 1e-8, (trial, src, n)


class TestPowerLawCurvature:
    def test_matches_substituted_residual(self):
        # u = t^alpha over a scalar-flat base realizes exactly this curvature
        n, alpha = 4, 0.3
        base = BaseGeometry.constant(n, 0.0)
        f = parse_profile(f"t^{2*alpha/(n + 1)}", domain_min=0.5)
        t = default_probe_grid(1.0, 50.0)
        R = power_law_curvature(alpha, n, t)
        res = ode_residual(substitute_u(f, n), lambda s: np.interp(s, t, R),
                           base, t)
        assert np.max(np.abs(res)) < 1e-10

    def test_maximal_at_half(self):
        alphas = np.linspace(0.0, 1.0, 101)
        vals = [power_law_curvature(a, 3, 10.0) for a in alphas]
        assert np.argmax(vals) == 50


class TestWarpedLaplacian:
    def test_against_finite_differences(self):
        f = parse_profile("t^1.5", domain_min=0.5)
        u = parse_field("sin(t)/t")
        base = BaseGeometry.constant(3, -6.0)
        t, h = 4.0, 1e-5
        lap = warped_laplacian(f, u, base, t)
        utt = (u.eval(t + h) - 2*u.eval(t) + u.eval(t - h)) / h**2
        ut = (u.eval(t + h) - u.eval(t - h)) / (2*h)
        expect = utt + 3 * f.d1(t) / f.eval(t) * ut
        assert lap == pytest.approx(expect, rel=1e-5)

    def test_rejects_x_dependent_field_on_abstract_base(self):
        f = parse_profile("t", domain_min=0.5)
        u = parse_field("t*x1", allowed_vars=("t", "x1"))
        base = BaseGeometry.constant(3, 0.0)
        with pytest.raises(DomainError):
            warped_laplacian(f, u, base, 2.0)


class TestConeLogCurvature:
    def test_approaches_barrier_from_below(self):
        # t^2 R -> -n(n-1) from below as t grows
        n = 3
        t = np.geomspace(10.0, 1e150, 32)
        vals = cone_log_curvature(n, t) * t**2
        assert np.all(vals < -n*(n - 1))
        assert np.all(np.diff(vals) > 0)  # monotone approach (1/ln t rate)
        assert vals[-1] == pytest.approx(-n*(n - 1), rel=1e-2)

    def test_agrees_with_generic_path(self):
        f = parse_profile("t*ln(t)", domain_min=1.5)
        base = BaseGeometry.constant(3, -6.0)
        t = np.geomspace(2.0, 100.0, 16)
        assert np.allclose(cone_log_curvature(3, t),
                           warped_scalar_curvature(f, base, t), rtol=1e-13)
