"""Shooting, oscillation classification, monotone iteration, base averaging,
and the comparison certificates."""

import math

import numpy as np
import pytest

from curvlab.errors import BracketError, DomainError, WindowTooSmall
from curvlab.geometry import BaseGeometry
from curvlab.ode import (ComparisonTransform, OdeSpec, SubSuperPair,
                         _discrete_residual, average_over_base,
                         barrier_certificate_33, comparison_certificate,
                         monotone_solve, oscillation_certificate, shoot)
from curvlab.polar import BaseGrid, PolarWarpField
from curvlab.warp import parse_field, parse_profile


class TestOdeSpec:
    def test_eq31_requires_normalized_base(self):
        with pytest.raises(DomainError):
            OdeSpec(n=3, R=-1.0, R_g=-5.0, t0=3.0, T=10.0, form="eq31")

    def test_bad_window(self):
        with pytest.raises(DomainError):
            OdeSpec(n=3, R=0.0, R_g=0.0, t0=5.0, T=2.0)


class TestShoot:
    def test_constant_solution(self):
        spec = OdeSpec(n=3, R=0.0, R_g=0.0, t0=1.0, T=50.0)
        tr = shoot(spec, 1.0, 0.0)
        assert np.max(np.abs(tr.u - 1.0)) < 1e-12
        assert tr.crossings == []

    def test_eq31_constant_six(self):
        spec = OdeSpec(n=3, R=-1.0, R_g=-6.0, t0=3.0, T=100.0, form="eq31")
        tr = shoot(spec, 6.0, 0.0)
        assert np.max(np.abs(tr.u - 6.0)) < 1e-6

    def test_crossing_detection(self):
        # (4n/(n+1)) u'' + R u = 0 with R_g = 0 and R = 3 (n=3 gives u'' = -u):
        # cosine from u(0+)=1 crosses at odd multiples of pi/2
        spec = OdeSpec(n=3, R=3.0, R_g=0.0, t0=0.1, T=10.0)
        tr = shoot(spec, math.cos(0.1), -math.sin(0.1))
        assert tr.crossings[0] == pytest.approx(math.pi/2, rel=1e-8)

    def test_stop_at_crossing(self):
        spec = OdeSpec(n=3, R=3.0, R_g=0.0, t0=0.1, T=10.0)
        tr = shoot(spec, math.cos(0.1), -math.sin(0.1), stop_at_crossing=True)
        assert tr.terminated_at_crossing
        assert tr.t[-1] == pytest.approx(math.pi/2, rel=1e-8)


class TestOscillation:
    def test_euler_closed_form_crossing(self):
        # t^2 u'' + (c/4) u = 0 with c = 2, u(1) = 1, u'(1) = 1/2 is
        # sqrt(t) cos(ln t / 2): first zero at e^pi
        v = oscillation_certificate(2.0, 2.5)
        # crossing ratio check stands in for the closed form; verify the
        # predicted spacing against e^(2 pi / sqrt(c-1))
        assert v.witnesses["predicted_ratio"] == pytest.approx(
            math.exp(2*math.pi), rel=1e-12)

    @pytest.mark.parametrize("c", [1.2, 3.0])
    def test_crossing_ratio_law(self, c):
        v = oscillation_certificate(c, 3.0)
        pred = math.exp(2*math.pi/math.sqrt(c - 1.0))
        for ratio in v.witnesses["crossing_ratios"]:
            assert ratio == pytest.approx(pred, rel=1e-2)

    def test_subcritical_witness(self):
        v = oscillation_certificate(0.8, 3.0)
        assert v.kind == "inconclusive"
        alpha = v.witnesses["positive_witness_exponent"]
        assert alpha*(1 - alpha) == pytest.approx(0.2, rel=1e-12)
        assert len(v.witnesses["crossings"]) <= 1

    def test_critical_half(self):
        v = oscillation_certificate(1.0, 3.0)
        assert v.witnesses["positive_witness_exponent"] == pytest.approx(0.5)

    def test_window_too_small(self):
        with pytest.raises(WindowTooSmall) as err:
            oscillation_certificate(1.2, 3.0, T=100.0)
        assert err.value.required_T > 100.0

    def test_crossing_time_stability(self):
        # re-integration at tighter tolerance moves crossings by < 0.1%
        v1 = oscillation_certificate(2.0, 3.0)
        c1 = v1.witnesses["crossings"]
        from curvlab.ode import _integrate_linear_log
        sol = _integrate_linear_log(-1.0, lambda s: 0.5, math.log(3.0),
                                    math.log(c1[-1]*1.01), 1.0, 0.5,
                                    rtol=1e-12)
        c2 = [math.exp(s) for s in sol.t_events[0]]
        for a, b in zip(c1, c2):
            assert abs(a/b - 1.0) < 1e-3


class TestMonotoneSolve:
    def spec_const(self):
        return OdeSpec(n=3, R=-1.0, R_g=-6.0, t0=3.0, T=100.0, form="eq31")

    def test_constant_solution(self):
        sol = monotone_solve(self.spec_const(), SubSuperPair(1.0, 10.0),
                             bc=(6.0, 6.0))
        assert np.max(np.abs(sol.u - 6.0)) < 1e-8
        assert sol.residual_norm < 1e-10
        assert sol.monotone and sol.bracketed

    def test_ordering_rejected(self):
        with pytest.raises(BracketError):
            monotone_solve(self.spec_const(), SubSuperPair(2.0, 1.0),
                           bc=(1.5, 1.5))

    def test_bc_outside_bracket_rejected(self):
        with pytest.raises(DomainError):
            monotone_solve(self.spec_const(), SubSuperPair(1.0, 10.0),
                           bc=(20.0, 6.0))

    def spec_alpha2(self, T=30.0):
        return OdeSpec(n=3, R=lambda t: -7.0/np.asarray(t, dtype=float)**2,
                       R_g=-6.0, t0=3.0, T=T, form="eq31")

    def pair_alpha2(self):
        return SubSuperPair(
            lambda t: np.full_like(np.asarray(t, dtype=float), 0.5),
            lambda t: 6.0*np.asarray(t, dtype=float)**2)

    def test_alpha2_case_positive_solution(self):
        sol = monotone_solve(self.spec_alpha2(100.0), self.pair_alpha2(),
                             bc=(2.0, 2.0), num_points=1601)
        assert np.min(sol.u) > 0
        assert sol.residual_norm < 1e-6
        assert sol.monotone and sol.bracketed

    def test_iterates_monotone_from_above(self):
        sol = monotone_solve(self.spec_const(), SubSuperPair(1.0, 10.0),
                             bc=(6.0, 6.0), start="upper")
        assert sol.monotone
        assert np.max(np.abs(sol.u - 6.0)) < 1e-8

    def test_grid_refinement_second_order(self):
        spec, pair = self.spec_alpha2(), self.pair_alpha2()
        ref = monotone_solve(spec, pair, bc=(2.0, 2.0), num_points=6401)
        errs = []
        for num in (401, 801):
            sol = monotone_solve(spec, pair, bc=(2.0, 2.0), num_points=num)
            step = 6400 // (num - 1)
            errs.append(float(np.max(np.abs(sol.u - ref.u[::step]))))
        assert errs[0]/errs[1] > 3.5  # ~4x per halving

    def test_supersolution_residual_signs(self):
        # u+ = 7 t^2 is a strict supersolution: residual 6 - 7 = -1 < 0
        spec = self.spec_alpha2()
        pair = SubSuperPair(
            lambda t: np.full_like(np.asarray(t, dtype=float), 0.5),
            lambda t: 7.0*np.asarray(t, dtype=float)**2)
        signs = pair.residual_signs(spec, np.linspace(spec.t0, spec.T, 401))
        assert np.all(signs["super"] <= 1e-10)  # supersolution
        assert np.all(signs["sub"] >= -1e-10)   # subsolution


class TestAveraging:
    def test_torus_constant(self):
        grid = BaseGrid(3, 16)
        u = PolarWarpField("1 + 0*t", grid, domain_min=0.5)
        ap = average_over_base(u, None, grid, weight="1",
                               t_grid=np.array([2.0, 3.0]))
        assert np.allclose(ap.values, (2*math.pi)**3, rtol=1e-14)
        assert ap.tag == "U"

    def test_separable(self):
        grid = BaseGrid(2, 32)
        u = PolarWarpField("(1/t)*(2 + sin(x1))", grid, domain_min=0.5)
        t = np.array([2.0, 5.0])
        ap = average_over_base(u, None, grid, weight="1", t_grid=t)
        assert np.allclose(ap.values, (1.0/t)*2.0*(2*math.pi)**2, rtol=1e-12)

    def test_fn_weight_closed_form(self):
        grid = BaseGrid(3, 16)
        u = PolarWarpField("1/t", grid, domain_min=0.5)
        f = PolarWarpField("t", grid, domain_min=0.5)
        t = np.geomspace(2.0, 10.0, 5)
        ap = average_over_base(u, f, grid, weight="fn", t_grid=t)
        assert np.allclose(ap.values, (2*math.pi)**3 * t**2, rtol=1e-12)
        assert ap.tag == "calF"

    def test_abstract_base(self):
        base = BaseGeometry.constant(3, -6.0, volume=2.0)
        ap = average_over_base(parse_field("1/t"), parse_profile("t"),
                               base, weight="f2",
                               t_grid=np.array([2.5, 4.0]))
        assert np.allclose(ap.values, 2.0*np.array([2.5, 4.0]), rtol=1e-14)


class TestComparisonTransforms:
    def test_defining_relations(self):
        ComparisonTransform(name="euler-shift", alpha=1.0, beta=2.0,
                            delta=0.5, c=2.0)
        ComparisonTransform(name="warp-power", alpha=-1.0, c=3.0)
        ComparisonTransform(name="indicial", epsilon=2.0, c=2.0)

    def test_violations_rejected(self):
        with pytest.raises(DomainError):
            ComparisonTransform(name="euler-shift", alpha=1.0, beta=2.0,
                                delta=0.9, c=2.0)
        with pytest.raises(DomainError):
            ComparisonTransform(name="indicial", epsilon=2.0, c=3.0)


class TestCertificates:
    def test_thm48_crossing(self):
        v = comparison_certificate("thm48", {"b": 0.5, "t0": 3.0})
        assert v.kind == "nonexistence"
        assert v.witnesses["crossings"][0] == pytest.approx(
            3.0 + math.pi/(2*0.5), rel=1e-6)

    def test_thm413(self):
        v = comparison_certificate("thm413", {"n": 3, "c": 5.0, "b": 1.0})
        assert v.kind == "nonexistence"
        eps = v.witnesses["indicial_exponent"]
        assert eps*(eps - 1) == pytest.approx(5.0/3.0, rel=1e-12)
        assert v.witnesses["measured_growth_exponent"] == pytest.approx(
            eps, abs=1e-2)
        assert v.witnesses["crossings"]

    def test_thm413_hypothesis_violation(self):
        v = comparison_certificate("thm413", {"n": 3, "c": 7.0, "b": 1.0})
        assert v.kind == "inconclusive"
        assert "c < 2n" in v.reason

    def test_thm418(self):
        params = {"n": 3, "C1": 1.0, "C2": 1.0, "C": 1.0, "b": 1.0}
        v = comparison_certificate("thm418", params)
        assert v.kind == "nonexistence"
        t_bar = v.witnesses["coefficient_negative_from"]
        c2 = v.witnesses["c_squared"]
        # at t_bar the bracket coefficient equals -c^2/2 by construction
        k = 6.0/t_bar**2 + 3.0/t_bar**2 + 3.0/t_bar - c2
        assert k == pytest.approx(-c2/2.0, rel=1e-10)
        assert v.witnesses["crossings"][0] > t_bar

    def test_thm112(self):
        v = comparison_certificate("thm112", {"n": 3, "eps": 1.0, "t0": 3.0})
        assert v.kind == "nonexistence"
        assert v.witnesses["crossings"]
        assert v.witnesses["transform_alpha"] == -1.0

    def test_thm38_log_case(self):
        f = parse_profile("t*ln(t)", domain_min=2.0)
        v = comparison_certificate(
            "thm38", {"n": 3, "kappa_sq": 6.0, "delta": 1.0, "t0": 3.0,
                      "f": f})
        assert v.kind == "incompleteness"
        assert v.witnesses["growth_case"] == "log"
        assert v.witnesses["decay_bound_holds"]
        assert v.witnesses["ray_verdict"] == "finite"
        assert v.witnesses["ray_total"] < np.inf

    def test_thm38_power_case(self):
        f = parse_profile("t^2", domain_min=2.0)
        v = comparison_certificate(
            "thm38", {"n": 3, "kappa_sq": 6.0, "delta": 1.0, "t0": 3.0,
                      "f": f})
        assert v.kind == "incompleteness"
        assert v.witnesses["growth_case"] == "power"

    def test_thm38_delta_hypothesis(self):
        f = parse_profile("t*ln(t)", domain_min=2.0)
        v = comparison_certificate(
            "thm38", {"n": 3, "kappa_sq": 6.0, "delta": 7.0, "t0": 3.0,
                      "f": f})
        assert v.kind == "inconclusive"
        assert "delta" in v.reason

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            comparison_certificate("thm999", {})


class TestBarrier:
    def test_nonexistence_with_growth_cap(self):
        v = barrier_certificate_33(6.0, 3, (3.0, 1e4))
        assert v.kind == "nonexistence"
        assert v.witnesses["measured_growth_exponent"] == pytest.approx(
            2.0, abs=1e-3)
        assert v.witnesses["crossings"]

    def test_log_profile_fails_hypothesis(self):
        v = barrier_certificate_33(6.0, 3, (3.0, 1e4),
                                   profile=parse_profile("t*ln(t)"),
                                   base_scalar=-6.0)
        assert v.kind == "inconclusive"
        assert v.witnesses["min_margin_t2R_plus_nn1"] < 0

    def test_n2_rejected(self):
        with pytest.raises(DomainError):
            barrier_certificate_33(6.0, 2, (3.0, 100.0))


class TestVerdictSerialization:
    def test_json_round_trip(self):
        import json
        v = comparison_certificate("thm48", {"b": 1.0, "t0": 3.0})
        rec = json.loads(v.to_json())
        assert rec["kind"] == "nonexistence"
        assert rec["witnesses"]["crossings"]

    def test_nonexistence_requires_witness(self):
        from curvlab.ode import Verdict
        with pytest.raises(DomainError):
            Verdict("nonexistence", reason="no witness")
