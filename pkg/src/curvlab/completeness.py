"""Ray-length integrals deciding completeness of conformally deformed end
metrics, and the sign test for the end's contribution to the total-curvature
quadratic form."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass
class RayLengthReport:
    x0: object
    n: int
    t0: float
    T: float
    integral: float          # quadrature over [t0, T]
    tail_exponent: float     # fitted log-log slope of the integrand's last decade
    tail_estimate: float     # analytic power-law completion beyond T (finite case)
    total: float             # integral + tail_estimate when finite
    verdict: str             # finite | divergent | undetermined

    def to_json(self):
        return json.dumps({
            "x0": list(np.atleast_1d(np.asarray(self.x0, dtype=float)))
            if self.x0 is not None else None,
            "n": self.n, "t0": self.t0, "T": self.T,
            "integral": self.integral, "tail_exponent": self.tail_exponent,
            "tail_estimate": self.tail_estimate, "total": self.total,
            "verdict": self.verdict}, sort_keys=True)

    def to_text(self):
        pairs = [("verdict", self.verdict), ("integral", self.integral),
                 ("tail_exponent", self.tail_exponent),
                 ("tail_estimate", self.tail_estimate), ("total", self.total),
                 ("t0", self.t0), ("T", self.T), ("n", self.n)]
        return "\n".join(f"{k}: {v}" for k, v in pairs) + "\n"


TAIL_MARGIN = 0.05


def _sample_ray(u, x0, t):
    if callable(u) and not hasattr(u, "eval_point") and not hasattr(u, "eval"):
        return np.asarray(u(t), dtype=float)
    if hasattr(u, "eval_point"):
        return np.array([u.eval_point(tt, x0) for tt in np.atleast_1d(t)])
    return np.asarray(u.eval(t), dtype=float)


def ray_length(u, x0, n, t0, T, num=4096) -> RayLengthReport:
    """Length of the radial curve t -> (t, x0) in the deformed metric:
    quadrature of u^(2/(n-1)) on [t0, T] plus a fitted power-law tail.

    The verdict follows the fitted tail exponent p of the integrand:
    p < -1 - margin -> finite (with analytic tail completion),
    p > -1 + margin -> divergent, otherwise undetermined.
    """
    if n < 3:
        raise DomainError("need n >= 3")
    if not (0 < t0 < T):
        raise DomainError("need 0 < t0 < T")
    t = np.geomspace(t0, T, num)
    uval = _sample_ray(u, x0, t)
    if np.any(uval <= 0):
        raise DomainError("u must be positive along the ray")
    integrand = uval ** (2.0 / (n - 1))
    integral = float(np.trapezoid(integrand, t))

    # fitted exponent over the last decade in log-log
    last = t >= T / 10.0
    lt = np.log(t[last])
    lv = np.log(integrand[last])
    A = np.vstack([lt, np.ones_like(lt)]).T
    p, _ = np.linalg.lstsq(A, lv, rcond=None)[0]
    p = float(p)

    if p < -1.0 - TAIL_MARGIN:
        # integrand ~ c t^p beyond T: tail = c T^(p+1)/(-(p+1))
        tail = float(integrand[-1] * T / (-(p + 1.0)))
        verdict = "finite"
        total = integral + tail
    elif p > -1.0 + TAIL_MARGIN:
        tail = math.inf
        verdict = "divergent"
        total = math.inf
    else:
        tail = math.nan
        verdict = "undetermined"
        total = math.nan
    return RayLengthReport(x0=x0, n=n, t0=t0, T=T, integral=integral,
                           tail_exponent=p, tail_estimate=tail, total=total,
                           verdict=verdict)


def yamabe_test_integral(R_end, n, b, cutoff_gradient_bound, vol_N):
    """End contribution of the radial cutoff profile (u = 1 on (2, b),
    linear ramp to 0 on (b, b+1)) to int (4n/(n-1)) |grad u|^2 + R u^2:

        vol_N * [ (4n/(n-1)) C_o^2 + R_end (b - 2) + R_end * int ramp u^2 ]

    Returns (value, threshold): the value turns negative once b exceeds
    threshold = 2 + (4n/(n-1)) C_o^2 / (-R_end).
    """
    if R_end >= 0:
        raise DomainError("end curvature constant must be negative")
    if n < 3:
        raise DomainError("need n >= 3")
    if b <= 2:
        raise DomainError("need b > 2")
    if cutoff_gradient_bound < 0:
        raise DomainError("gradient bound must be nonnegative")
    if vol_N <= 0:
        raise DomainError("base volume must be positive")
    grad_term = (4.0 * n / (n - 1.0)) * cutoff_gradient_bound ** 2
    ramp_sq = 1.0 / 3.0  # int_0^1 (1 - s)^2 ds
    value = vol_N * (grad_term + R_end * (b - 2.0) + R_end * ramp_sq)
    threshold = 2.0 + grad_term / (-R_end)
    return value, threshold
