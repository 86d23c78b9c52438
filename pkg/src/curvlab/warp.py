"""Closed-form scalar curvature and Laplacian of g' = dt^2 + f^2(t) g.

All quantities come from the warp profile f and its exact symbolic
derivatives; nothing here touches finite differences (the oracle module is
the independent cross-check).
"""

from __future__ import annotations

import numpy as np

from . import expr
from .errors import DomainError, ExpressionError
from .geometry import BaseGeometry, DimensionConstants


def default_probe_grid(t_min=2.0, t_max=1.0e3, num=64):
    """Log-spaced probe points on [t_min + 0.5, t_max]."""
    return np.geomspace(t_min + 0.5, t_max, num)


class Field:
    """A scalar field given by an expression, with exact t-derivatives.

    No positivity requirement; use WarpProfile when f > 0 is part of the
    contract.
    """

    def __init__(self, source, allowed_vars=("t",)):
        self.source = source
        self.ast = expr.parse(source)
        unknown = self.ast.free_vars() - set(allowed_vars)
        if unknown:
            raise ExpressionError(
                f"unknown identifier(s) {sorted(unknown)} (allowed: {list(allowed_vars)})")
        self._d1 = self.ast.diff("t")
        self._d2 = self._d1.diff("t")

    @property
    def x_vars(self):
        return sorted(v for v in self.ast.free_vars() if v != "t")

    def eval(self, t, **xs):
        return self.ast.eval({"t": t, **xs})

    def d1(self, t, **xs):
        return self._d1.eval({"t": t, **xs})

    def d2(self, t, **xs):
        return self._d2.eval({"t": t, **xs})

    def unparse(self):
        return self.ast.unparse()


class WarpProfile(Field):
    """Warp function f(t) > 0 with exact first/second derivative oracle.

    Positivity is enforced lazily: each evaluation checks f(t) > 0.
    """

    def __init__(self, source, domain_min=2.0):
        super().__init__(source, allowed_vars=("t",))
        if domain_min <= 0:
            raise DomainError("domain_min must be positive")
        self.domain_min = domain_min

    def _check_domain(self, t):
        if np.any(np.asarray(t) <= self.domain_min):
            raise DomainError(
                f"t must exceed domain_min = {self.domain_min}")

    def eval(self, t, check=True):
        if check:
            self._check_domain(t)
        val = self.ast.eval({"t": t})
        if check and np.any(np.asarray(val) <= 0):
            raise DomainError(f"warp profile '{self.source}' is nonpositive at t = {t}")
        return val

    def d1(self, t):
        return self._d1.eval({"t": t})

    def d2(self, t):
        return self._d2.eval({"t": t})


def parse_profile(source, domain_min=2.0):
    """Parse an expression string in t into a WarpProfile."""
    return WarpProfile(source, domain_min=domain_min)


def parse_field(source, allowed_vars=("t",)):
    return Field(source, allowed_vars=allowed_vars)


class SubstitutedProfile:
    """u(t) = f(t)^((n+1)/2) with chain-rule derivatives and inverse map."""

    def __init__(self, f: WarpProfile, n: int):
        if n < 2:
            raise DomainError(f"need n >= 2, got {n}")
        self.f = f
        self.n = n
        self.m = (n + 1) / 2.0

    def _powf(self, t, k):
        # f^k via exp/ln; f must be positive
        fval = self.f.eval(t)
        return np.exp(k * np.log(fval))

    def eval(self, t):
        return self._powf(t, self.m)

    def d1(self, t):
        return self.m * self._powf(t, self.m - 1.0) * self.f.d1(t)

    def d2(self, t):
        fp = self.f.d1(t)
        fpp = self.f.d2(t)
        return (self.m * (self.m - 1.0) * self._powf(t, self.m - 2.0) * fp ** 2
                + self.m * self._powf(t, self.m - 1.0) * fpp)

    def inverse(self, u_value):
        """Recover f from a value of u."""
        u_value = np.asarray(u_value, dtype=float)
        if np.any(u_value <= 0):
            raise DomainError("u must be positive to invert the substitution")
        return np.exp(np.log(u_value) / self.m)


def substitute_u(f: WarpProfile, n: int) -> SubstitutedProfile:
    return SubstitutedProfile(f, n)


def warped_scalar_curvature(f: WarpProfile, base: BaseGeometry, t):
    """Scalar curvature of dt^2 + f^2(t) g at radius t.

    R(t) = (1/f^2) [R(g) - 2 n f f'' - n (n-1) f'^2].
    """
    if base.kind == "torus-grid" and base.grid is not None:
        raise DomainError("x-resolved base requires the polar curvature path")
    n = base.n
    fval = f.eval(t)
    fp = f.d1(t)
    fpp = f.d2(t)
    return (base.scalar_curvature - 2.0 * n * fval * fpp
            - n * (n - 1) * fp ** 2) / fval ** 2


def ode_residual(u: SubstitutedProfile, R, base: BaseGeometry, t):
    """Left-hand side of (4n/(n+1)) u'' + R u - R(g) u^((n-3)/(n+1)).

    Zero iff (u, R) solve the substituted curvature equation at t.
    """
    n = u.n
    uval = u.eval(t)
    if np.any(np.asarray(uval) <= 0):
        raise DomainError("u must be positive")
    p = DimensionConstants(n).nonlin_exp
    u_pow = np.exp(p * np.log(uval))
    Rval = R(t) if callable(R) else R
    return (4.0 * n / (n + 1)) * u.d2(t) + Rval * uval - base.scalar_curvature * u_pow


def power_law_curvature(alpha, n, t):
    """Curvature profile produced by u(t) = t^alpha over a scalar-flat base:
    R = (4n/(n+1)) alpha (1 - alpha) / t^2.  Maximal over alpha at 1/2."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("t must be positive")
    out = (4.0 * n / (n + 1)) * alpha * (1.0 - alpha) / t ** 2
    return out if out.shape else float(out)


def warped_laplacian(f: WarpProfile, u: Field, base: BaseGeometry, t, base_laplacian=0.0):
    """Laplacian of u in the warped metric:
    u_tt + (n f'/f) u_t + (1/f^2) * Delta_g u.

    base_laplacian supplies Delta_g u at the point; it must stay 0 when the
    base is abstract (no grid to differentiate on).
    """
    if u.x_vars:
        raise DomainError(
            "x-dependent field over an analytic base: use the polar Laplacian")
    fval = f.eval(t)
    term = u.d2(t) + base.n * f.d1(t) / fval * u.d1(t)
    if base_laplacian:
        if base.kind == "abstract-constant" and base.grid is None:
            raise DomainError("abstract base carries no Laplacian for x-dependent data")
        term = term + base_laplacian / fval ** 2
    return term


def cone_log_curvature(n, t):
    """Hard-coded curvature of dt^2 + (t ln t)^2 g with R(g) = -n(n-1):

    R(t) = -(1/t^2) [n(n-1)(ln t + 1)^2/(ln t)^2 + 2n/ln t + n(n-1)/(ln t)^2]
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 1.0):
        raise DomainError("t must exceed 1 so that ln t > 0")
    L = np.log(t)
    out = -(n * (n - 1) * (L + 1.0) ** 2 / L ** 2
            + 2.0 * n / L
            + n * (n - 1) / L ** 2) / t ** 2
    return out if out.shape else float(out)
