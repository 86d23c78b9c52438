"""Shooting, monotone sub/supersolution iteration, and comparison-ODE
certificates for the prescribed-curvature equation

    (4n/(n+1)) u'' + R(t) u - R(g) u^((n-3)/(n+1)) = 0.

Certificates integrate the EQUALITY case of a proof's differential
inequality from positive initial data; by the comparison principle the true
averaged profile lies below that trajectory, so a zero crossing of the
trajectory is a numerical witness of the contradiction the proof forces.
Inconclusive is a valid answer and is returned whenever hypotheses fail.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import solve_banded

from .errors import BracketError, DomainError, StiffFailure, WindowTooSmall
from .geometry import DimensionConstants
from .polar import BaseGrid

DEFAULT_T_MAX = 1.0e4
RTOL = 1.0e-10
ATOL = 1.0e-12


# ---------------------------------------------------------------------------
# problem description and results


@dataclass(frozen=True)
class OdeSpec:
    """The second-order equation to integrate or solve.

    form 'eq13' is the general prescribed-curvature equation; 'eq31' pins
    the base curvature to -n(n-1) (class-C normalization); 'averaged' marks
    comparison equations for base-averaged profiles.
    """

    n: int
    R: object            # callable R(t) or constant
    R_g: float
    t0: float
    T: float
    form: str = "eq13"

    def __post_init__(self):
        if self.t0 <= 0 or self.T <= self.t0:
            raise DomainError("need 0 < t0 < T")
        if self.form not in ("eq13", "eq31", "averaged"):
            raise DomainError(f"unknown form '{self.form}'")
        if self.form == "eq31":
            expected = -self.n * (self.n - 1)
            if abs(self.R_g - expected) > 1e-12 * abs(expected):
                raise DomainError(
                    f"form eq31 requires R(g) = {expected}, got {self.R_g}")

    def R_at(self, t):
        return self.R(t) if callable(self.R) else self.R


@dataclass
class Trajectory:
    t: np.ndarray
    u: np.ndarray
    du: np.ndarray
    crossings: list
    terminated_at_crossing: bool = False

    def write_csv_rows(self):
        return zip(self.t, self.u, self.du)


@dataclass
class Verdict:
    """Existence / nonexistence / incompleteness / inconclusive certificate
    with numeric witnesses."""

    kind: str
    reason: str = ""
    witnesses: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("existence", "nonexistence", "incompleteness",
                             "inconclusive"):
            raise DomainError(f"unknown verdict kind '{self.kind}'")
        if self.kind == "nonexistence":
            w = self.witnesses
            if not w.get("crossings") and "sign_change_at" not in w:
                raise DomainError(
                    "nonexistence verdict needs a crossing or sign-change witness")

    def to_json(self):
        def clean(v):
            if isinstance(v, (np.floating, np.integer)):
                return float(v)
            if isinstance(v, np.ndarray):
                return [float(x) for x in v]
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            return v
        return json.dumps({"kind": self.kind, "reason": self.reason,
                           "witnesses": clean(self.witnesses),
                           "params": clean(self.params)}, sort_keys=True)

    def to_text(self):
        lines = [f"kind: {self.kind}"]
        if self.reason:
            lines.append(f"reason: {self.reason}")
        for key in sorted(self.params):
            lines.append(f"param {key}: {self.params[key]}")
        for key in sorted(self.witnesses):
            lines.append(f"witness {key}: {self.witnesses[key]}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# shooting


def _signed_pow(u, p):
    if p == 0:
        return np.ones_like(np.asarray(u, dtype=float))
    return np.sign(u) * np.abs(u) ** p


def shoot(spec: OdeSpec, u0, du0, stop_at_crossing=False, rtol=RTOL,
          max_step=np.inf):
    """Integrate the equation as a first-order system with adaptive RK45,
    recording every sign change of u."""
    if u0 <= 0:
        raise DomainError("initial value u0 must be positive")
    n = spec.n
    p = DimensionConstants(n).nonlin_exp
    coeff = (n + 1) / (4.0 * n)

    def rhs(t, y):
        u, du = y
        return [du, coeff * (spec.R_g * _signed_pow(u, p) - spec.R_at(t) * u)]

    def crossing(t, y):
        return y[0]
    crossing.terminal = bool(stop_at_crossing)
    crossing.direction = 0

    sol = solve_ivp(rhs, (spec.t0, spec.T), [u0, du0], method="RK45",
                    rtol=rtol, atol=ATOL, events=crossing, dense_output=True,
                    max_step=max_step)
    if sol.status == -1:
        raise StiffFailure(f"integrator failed: {sol.message}")
    crossings = list(sol.t_events[0])
    return Trajectory(t=sol.t, u=sol.y[0], du=sol.y[1], crossings=crossings,
                      terminated_at_crossing=(sol.status == 1 and bool(crossings)))


def _integrate_linear_log(a1, a0_fn, s0, s1, w0, dw0, rtol=RTOL):
    """Integrate w'' + a1 w' + a0(s) w = 0 on [s0, s1] in the log-time
    variable s = ln t, recording zero crossings of w."""
    def rhs(s, y):
        return [y[1], -a1 * y[1] - a0_fn(s) * y[0]]

    def crossing(s, y):
        return y[0]
    crossing.terminal = False
    crossing.direction = 0

    sol = solve_ivp(rhs, (s0, s1), [w0, dw0], method="RK45", rtol=rtol,
                    atol=ATOL, events=crossing)
    if sol.status == -1:
        raise StiffFailure(f"integrator failed: {sol.message}")
    return sol


def oscillation_certificate(c, t0, T=None) -> Verdict:
    """Classify the comparison equation t^2 u'' + (c/4) u = 0 on [t0, T].

    c > 1: oscillatory; nonexistence with crossing witnesses whose
    consecutive ratios are e^(2 pi / sqrt(c-1)).  c <= 1: inconclusive, with
    the positive power-law witness u = t^alpha, alpha(1-alpha) = c/4.
    """
    if c <= 0:
        raise DomainError("need c > 0")
    if t0 <= 2:
        raise DomainError("need t0 > 2")
    params = {"c": c, "t0": t0}
    if c <= 1:
        alpha = 0.5 * (1.0 - math.sqrt(1.0 - c))
        T = T if T is not None else DEFAULT_T_MAX
        sol = _integrate_linear_log(-1.0, lambda s: c / 4.0,
                                    math.log(t0), math.log(T), 1.0, 0.5)
        crossings = [math.exp(s) for s in sol.t_events[0]]
        return Verdict(
            kind="inconclusive",
            reason="c <= 1: comparison solution does not oscillate",
            params=params,
            witnesses={"positive_witness_exponent": alpha,
                       "witness_check": alpha * (1 - alpha) - c / 4.0,
                       "crossings": crossings})

    delta = math.sqrt(c - 1.0) / 2.0
    ratio = math.exp(math.pi / delta)
    # three crossings fit within a factor ratio^3 of t0 regardless of phase
    required_T = t0 * ratio ** 3
    if T is not None and T < required_T:
        raise WindowTooSmall(
            "window cannot contain two predicted crossings", required_T)
    horizon = required_T if T is None else min(T, required_T)
    # log-time form: w'' - w' + (c/4) w = 0
    sol = _integrate_linear_log(-1.0, lambda s: c / 4.0,
                                math.log(t0), math.log(horizon), 1.0, 0.5)
    crossings = [math.exp(s) for s in sol.t_events[0]]
    if len(crossings) < 2:
        raise WindowTooSmall("fewer than two crossings found", required_T)
    ratios = [b / a for a, b in zip(crossings, crossings[1:])]
    return Verdict(
        kind="nonexistence",
        reason="comparison solution of t^2 u'' + (c/4) u = 0 oscillates",
        params=params,
        witnesses={"crossings": crossings,
                   "crossing_count": len(crossings),
                   "crossing_ratios": ratios,
                   "predicted_ratio": ratio,
                   "delta": delta})


# ---------------------------------------------------------------------------
# monotone sub/supersolution iteration


class SubSuperPair:
    """Ordered bracket (u_minus, u_plus) of sub/supersolutions."""

    def __init__(self, u_minus, u_plus):
        self.u_minus = u_minus if callable(u_minus) else (lambda t, v=u_minus: np.full_like(np.asarray(t, dtype=float), v))
        self.u_plus = u_plus if callable(u_plus) else (lambda t, v=u_plus: np.full_like(np.asarray(t, dtype=float), v))

    def check_ordering(self, t_grid):
        lo = np.asarray(self.u_minus(t_grid), dtype=float)
        hi = np.asarray(self.u_plus(t_grid), dtype=float)
        if np.any(lo <= 0):
            raise DomainError("subsolution must be positive")
        if np.any(lo > hi):
            raise BracketError("ordering violated: u_minus > u_plus somewhere")
        return lo, hi

    def residual_signs(self, spec: OdeSpec, t_grid):
        """FD residuals of both barrier functions (sub >= 0, super <= 0 up
        to discretization error); informational."""
        h = t_grid[1] - t_grid[0]
        out = {}
        for name, fn in (("sub", self.u_minus), ("super", self.u_plus)):
            vals = np.asarray(fn(t_grid), dtype=float)
            d2 = (vals[2:] - 2 * vals[1:-1] + vals[:-2]) / h ** 2
            res = _discrete_residual(spec, t_grid[1:-1], vals[1:-1], d2)
            out[name] = res
        return out


def _discrete_residual(spec, t, u, d2u):
    n = spec.n
    p = DimensionConstants(n).nonlin_exp
    return (4.0 * n / (n + 1)) * d2u + spec.R_at(t) * u - spec.R_g * _signed_pow(u, p)


@dataclass
class MonotoneSolution:
    t: np.ndarray
    u: np.ndarray
    residual_norm: float
    iterations: int
    monotone: bool
    bracketed: bool
    history_extrema: list


def monotone_solve(spec: OdeSpec, pair: SubSuperPair, bc, num_points=801,
                   tol=1.0e-12, max_iter=20000, start="lower") -> MonotoneSolution:
    """Monotone iteration on the centered-difference discretization.

    The nonlinearity is shifted by a constant M exceeding its Lipschitz
    bound on the bracket, so iterates march monotonically from one end of
    the bracket to the true solution.  bc = (left, right) Dirichlet values.
    """
    if spec.form != "eq31":
        raise DomainError("monotone_solve expects the eq31 normalization")
    n = spec.n
    p = DimensionConstants(n).nonlin_exp
    a = 4.0 * n / (n + 1)
    t = np.linspace(spec.t0, spec.T, num_points)
    h = t[1] - t[0]
    lo, hi = pair.check_ordering(t)

    bc_l, bc_r = bc
    if not (lo[0] - 1e-12 <= bc_l <= hi[0] + 1e-12
            and lo[-1] - 1e-12 <= bc_r <= hi[-1] + 1e-12):
        raise DomainError("boundary values must lie inside the bracket")

    R_vals = np.asarray(spec.R_at(t), dtype=float)
    if R_vals.ndim == 0:
        R_vals = np.full_like(t, float(R_vals))

    R_int = R_vals[1:-1]

    def nonlin(u):
        # n(n-1) u^p + R u, the non-second-derivative part of eq31
        return -spec.R_g * _signed_pow(u, p) + R_int * u

    # smallest shift that keeps Phi(u) + M u nondecreasing on the bracket:
    # M >= sup(-Phi'), Phi' = n(n-1) p u^(p-1) + R (first term >= 0 for u > 0)
    umin, umax = float(lo.min()), float(hi.max())
    probes = np.geomspace(umin, umax, 64)
    dphi = -spec.R_g * p * _signed_pow(probes, p - 1)
    neg_part = -(dphi[None, :] + R_vals[:, None])
    M = max(0.0, float(neg_part.max())) + 1e-6

    # banded matrix for a*D2 - M*I with Dirichlet rows folded in
    N = num_points - 2
    ab = np.zeros((3, N))
    ab[0, 1:] = a / h ** 2            # super-diagonal
    ab[1, :] = -2.0 * a / h ** 2 - M  # diagonal
    ab[2, :-1] = a / h ** 2           # sub-diagonal

    u = np.array(lo if start == "lower" else hi, dtype=float)
    u[0], u[-1] = bc_l, bc_r
    prev_interior = u[1:-1].copy()
    monotone = True
    bracketed = True
    extrema = []
    iterations = 0
    for iterations in range(1, max_iter + 1):
        rhs = -M * u[1:-1] - nonlin(u[1:-1])
        rhs[0] -= a / h ** 2 * bc_l
        rhs[-1] -= a / h ** 2 * bc_r
        new_interior = solve_banded((1, 1), ab, rhs)
        step = new_interior - prev_interior
        if iterations > 1:
            direction = 1.0 if start == "lower" else -1.0
            if np.any(direction * step < -1e-9 * max(1.0, np.abs(new_interior).max())):
                monotone = False
        if (np.any(new_interior < lo[1:-1] - 1e-8 * max(1.0, umax))
                or np.any(new_interior > hi[1:-1] + 1e-8 * max(1.0, umax))):
            raise BracketError(
                f"iterate {iterations} left the bracket")
        u[1:-1] = new_interior
        extrema.append((float(new_interior.min()), float(new_interior.max())))
        delta = float(np.abs(step).max())
        prev_interior = new_interior.copy()
        if delta < tol:
            break

    d2 = (u[2:] - 2 * u[1:-1] + u[:-2]) / h ** 2
    res = _discrete_residual(spec, t[1:-1], u[1:-1], d2)
    return MonotoneSolution(t=t, u=u, residual_norm=float(np.abs(res).max()),
                            iterations=iterations, monotone=monotone,
                            bracketed=bracketed, history_extrema=extrema)


# ---------------------------------------------------------------------------
# base averaging


@dataclass
class AveragedProfile:
    t_grid: np.ndarray
    values: np.ndarray
    tag: str  # 'U', 'F', or 'calF'


_WEIGHT_TAG = {"1": "U", "f2": "F", "fn": "calF"}


def average_over_base(u, f, base, weight="1", t_grid=None) -> AveragedProfile:
    """Integrate u over the base with weight 1, f^2, or f^n.

    Grid path: u and f are PolarWarpField-like over the same BaseGrid.
    Analytic path (BaseGeometry, x-independent integrand): Vol * value.
    """
    if weight not in _WEIGHT_TAG:
        raise DomainError(f"unknown weight '{weight}'")
    if t_grid is None:
        raise DomainError("t_grid required")
    t_grid = np.asarray(t_grid, dtype=float)

    if isinstance(base, BaseGrid):
        if f is not None and f.grid is not base:
            raise DomainError("incompatible grids between u and f")
        vals = []
        for t in t_grid:
            uval = u.sample(t) if hasattr(u, "sample") else u(t)
            if weight == "1":
                w = 1.0
            else:
                if f is None:
                    raise DomainError(f"weight {weight} needs the warp field")
                fval = f.sample(t)
                w = fval ** 2 if weight == "f2" else fval ** base.n
            vals.append(base.integrate(np.broadcast_to(uval * w, (base.m,) * base.n)))
        return AveragedProfile(t_grid=t_grid, values=np.array(vals),
                               tag=_WEIGHT_TAG[weight])

    # analytic constant-base path
    vol = base.volume
    vals = []
    for t in t_grid:
        uval = u.eval(t) if hasattr(u, "eval") else u(t)
        if weight == "1":
            w = 1.0
        else:
            fval = f.eval(t)
            w = fval ** 2 if weight == "f2" else fval ** base.n
        vals.append(vol * uval * w)
    return AveragedProfile(t_grid=t_grid, values=np.array(vals),
                           tag=_WEIGHT_TAG[weight])


# ---------------------------------------------------------------------------
# comparison transforms (the substitutions used by the nonexistence proofs)


@dataclass(frozen=True)
class ComparisonTransform:
    """Records a proof substitution and verifies its defining relation."""

    name: str
    alpha: float = 0.0
    beta: float = 0.0
    delta: float = 0.0
    epsilon: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        if self.name == "euler-shift":      # delta^2 = (c - 1)/4, beta = 2 alpha
            if abs(self.delta ** 2 - (self.c - 1.0) / 4.0) > 1e-12:
                raise DomainError("euler-shift: delta^2 != (c-1)/4")
            if abs(self.beta - 2.0 * self.alpha) > 1e-12:
                raise DomainError("euler-shift: beta != 2 alpha")
        elif self.name == "warp-power":     # n + 2 alpha = 1 (n stored in c)
            if abs(self.c + 2.0 * self.alpha - 1.0) > 1e-12:
                raise DomainError("warp-power: n + 2 alpha != 1")
        elif self.name == "indicial":       # epsilon(epsilon - 1) = c
            if abs(self.epsilon * (self.epsilon - 1.0) - self.c) > 1e-12:
                raise DomainError("indicial: epsilon(epsilon-1) != c")
        else:
            raise DomainError(f"unknown transform '{self.name}'")


# ---------------------------------------------------------------------------
# comparison certificates


def _first_crossing(rhs, t0, y0, T, rtol=RTOL):
    """Integrate y'' = rhs(t, y, y') and return (crossing_t, sol)."""
    def sys(t, y):
        return [y[1], rhs(t, y[0], y[1])]

    def crossing(t, y):
        return y[0]
    crossing.terminal = True
    crossing.direction = -1

    sol = solve_ivp(sys, (t0, T), y0, method="RK45", rtol=rtol, atol=ATOL,
                    events=crossing)
    if sol.status == -1:
        raise StiffFailure(f"integrator failed: {sol.message}")
    if len(sol.t_events[0]) == 0:
        return None, sol
    return float(sol.t_events[0][0]), sol


def _fit_loglog_slope(t, v):
    """Least-squares slope of ln v against ln t (v > 0)."""
    t = np.asarray(t, dtype=float)
    v = np.asarray(v, dtype=float)
    keep = v > 0
    lt, lv = np.log(t[keep]), np.log(v[keep])
    A = np.vstack([lt, np.ones_like(lt)]).T
    slope, _ = np.linalg.lstsq(A, lv, rcond=None)[0]
    return float(slope)


def _growth_exponent(coeff_fn, t0, T, y0=1.0, dy0=None):
    """Measured power-law growth of the extremal solution of
    v'' = coeff(t) v over the last decade of [t0, T]."""
    if dy0 is None:
        dy0 = y0 / t0
    def sys(t, y):
        return [y[1], coeff_fn(t) * y[0]]
    t_eval = np.geomspace(T / 10.0, T, 40)
    sol = solve_ivp(sys, (t0, T), [y0, dy0], method="RK45", rtol=RTOL,
                    atol=ATOL, t_eval=t_eval)
    if sol.status != 0:
        raise StiffFailure(f"integrator failed: {sol.message}")
    return _fit_loglog_slope(sol.t, sol.y[0]), sol


def certificate_thm48(params) -> Verdict:
    """F'' <= -b^2 F forces F to vanish: integrate the equality and report
    the crossing (cosine solution: t0 + pi/(2b) from flat initial data)."""
    n = int(params.get("n", 3))
    b = float(params["b"])
    t0 = float(params.get("t0", 3.0))
    F0 = float(params.get("F0", 1.0))
    dF0 = float(params.get("dF0", 0.0))
    if n < 3:
        return Verdict("inconclusive", reason="hypothesis n >= 3 violated",
                       params=dict(params))
    if b <= 0:
        return Verdict("inconclusive", reason="hypothesis b > 0 violated",
                       params=dict(params))
    T = t0 + 4.0 * math.pi / b
    cross, _ = _first_crossing(lambda t, F, dF: -b * b * F, t0, [F0, dF0], T)
    if cross is None:
        raise StiffFailure("no crossing found for F'' = -b^2 F")
    return Verdict("nonexistence",
                   reason="averaged square-warp profile is forced to vanish",
                   params=dict(params),
                   witnesses={"crossings": [cross],
                              "predicted_crossing": t0 + math.pi / (2.0 * b)
                              if dF0 == 0.0 else None})


def certificate_thm413(params) -> Verdict:
    """F'' <= -b^2/n + (c'/t^2) F with c' = c/n < 2: growth-capped profile
    is forced to vanish."""
    n = int(params.get("n", 3))
    c = float(params["c"])
    b = float(params["b"])
    t0 = float(params.get("t0", 3.0))
    F0 = float(params.get("F0", 1.0))
    dF0 = float(params.get("dF0", 0.0))
    if n < 3:
        return Verdict("inconclusive", reason="hypothesis n >= 3 violated",
                       params=dict(params))
    if c >= 2 * n:
        return Verdict("inconclusive", reason="hypothesis c < 2n violated",
                       params=dict(params))
    cp = c / n
    witnesses = {}
    if cp > 0:
        # sub-check: extremal growth of F'' = (c'/t^2) F has the indicial
        # exponent eps with eps(eps - 1) = c'
        eps = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * cp))
        ComparisonTransform(name="indicial", epsilon=eps, c=cp)
        measured, _ = _growth_exponent(lambda t: cp / t ** 2, t0, 1.0e4 * t0)
        witnesses["indicial_exponent"] = eps
        witnesses["measured_growth_exponent"] = measured
    T = t0
    cross = None
    rhs = (lambda t, F, dF: -b * b / n + (cp / t ** 2) * F)
    for _ in range(12):
        T = max(2.0 * T, t0 + 10.0)
        cross, _ = _first_crossing(rhs, t0, [F0, dF0], T)
        if cross is not None:
            break
    if cross is None:
        raise StiffFailure("no crossing found for the thm413 comparison ODE")
    witnesses["crossings"] = [cross]
    return Verdict("nonexistence",
                   reason="averaged square-warp profile is forced to vanish",
                   params=dict(params), witnesses=witnesses)


def certificate_thm418(params) -> Verdict:
    """With derivative bounds |f_t| <= C1 f/t, |f_tt| <= C2 f/t^2,
    |u_t| <= C u, the weighted average calF = int f^n u obeys
    calF'' <= k(t) calF with k(t) -> -c^2 < 0; integrate past the point
    where k <= -c^2/2 and report the forced crossing."""
    n = int(params.get("n", 3))
    C1 = float(params["C1"])
    C2 = float(params["C2"])
    C = float(params["C"])
    b = float(params["b"])
    t0 = float(params.get("t0", 3.0))
    if n < 3:
        return Verdict("inconclusive", reason="hypothesis n >= 3 violated",
                       params=dict(params))
    if min(C1, C2, C, b) <= 0:
        return Verdict("inconclusive",
                       reason="hypothesis positive constants violated",
                       params=dict(params))
    c2 = DimensionConstants(n).c_np1 * b * b
    A = n * (n - 1) * C1 ** 2 + n * C2
    B = n * C * C1
    # A/t^2 + B/t <= c^2/2  <=>  (c^2/2) t^2 - B t - A >= 0
    t_bar = (B + math.sqrt(B * B + 2.0 * A * c2)) / c2
    t_start = max(t_bar, t0)
    cp = math.sqrt(c2 / 2.0)

    def k(t):
        return A / t ** 2 + B / t - c2

    T = t_start + 4.0 * math.pi / cp
    cross, _ = _first_crossing(lambda t, F, dF: k(t) * F, t_start, [1.0, 0.0], T)
    if cross is None:
        raise StiffFailure("no crossing found for the thm418 comparison ODE")
    return Verdict("nonexistence",
                   reason="averaged f^n-weighted conformal factor is forced to vanish",
                   params=dict(params),
                   witnesses={"crossings": [cross],
                              "coefficient_negative_from": t_bar,
                              "c_squared": c2,
                              "c_prime": cp})


def certificate_thm112(params) -> Verdict:
    """Deforming dt^2 + t^(2/(n+1)) g to uniformly positive curvature forces
    the base-averaged conformal factor to vanish: integrate

        U'' + (n/(n+1)) U'/t - ((n-1)/(4(n+1))) U/t^2 = -eps^2 U^((n+3)/(n-1))
    """
    n = int(params.get("n", 3))
    eps = float(params.get("eps", 1.0))
    t0 = float(params.get("t0", 3.0))
    U0 = float(params.get("U0", 1.0))
    dU0 = float(params.get("dU0", 0.0))
    if n < 3:
        return Verdict("inconclusive", reason="hypothesis n >= 3 violated",
                       params=dict(params))
    if eps <= 0:
        return Verdict("inconclusive", reason="hypothesis eps > 0 violated",
                       params=dict(params))
    q = (n + 3.0) / (n - 1.0)
    a1 = n / (n + 1.0)
    a0 = (n - 1.0) / (4.0 * (n + 1.0))

    def rhs(t, U, dU):
        return -a1 * dU / t + a0 * U / t ** 2 - eps * eps * _signed_pow(U, q)

    T = t0
    cross = None
    for _ in range(16):
        T = 2.0 * T + 10.0
        cross, _ = _first_crossing(rhs, t0, [U0, dU0], T)
        if cross is not None:
            break
    if cross is None:
        raise StiffFailure("no crossing found for the thm112 comparison ODE")
    alpha = -(n - 1.0) / 2.0
    return Verdict("nonexistence",
                   reason="base-averaged conformal factor is forced to vanish",
                   params=dict(params),
                   witnesses={"crossings": [cross],
                              "transform_alpha": alpha})


def certificate_thm38(params) -> Verdict:
    """Class-C end with warp f: conformal deformation to nonnegative
    curvature leaves radial rays of finite length.

    Follows the proof chain: substitute U = f^(-(n-1)/2) v, integrate the
    extremal (f v')' = -delta v / f alongside the stretched time
    tau = int dt/f, confirm the decay bound

        v(t) <= exp(-(delta / (2 C^2)) (ln ln t - ln ln t0)^2)

    on the positive arc of the trajectory (case f <= C t ln t; the
    power-growth case yields a bounded v instead), then certify a finite
    ray length of the bounding profile via completeness.ray_length.
    """
    n = int(params.get("n", 3))
    kappa_sq = float(params["kappa_sq"])
    delta = float(params["delta"])
    t0 = float(params.get("t0", 3.0))
    T = float(params.get("T", DEFAULT_T_MAX))
    f = params["f"]  # WarpProfile
    pp = {k: v for k, v in params.items() if k != "f"}
    pp["f"] = getattr(f, "source", str(f))
    if n < 3:
        return Verdict("inconclusive", reason="hypothesis n >= 3 violated",
                       params=pp)
    if not (0 < delta < kappa_sq):
        return Verdict("inconclusive",
                       reason="hypothesis 0 < delta < kappa^2 violated",
                       params=pp)

    # stated vs proof-form bound constants for f f''
    c_sq_statement = 2.0 * (kappa_sq - delta) / (3.0 * n + 1.0)
    ff_bound = 2.0 * (-kappa_sq + delta) / (3.0 * n + 1.0)
    grid = np.geomspace(t0, T, 256)
    fvals = np.asarray(f.eval(grid), dtype=float)
    ffpp = fvals * np.asarray(f.d2(grid), dtype=float)
    if float(np.min(ffpp - ff_bound)) < -1e-12:
        return Verdict("inconclusive",
                       reason="hypothesis f f'' >= 2(-kappa^2+delta)/(3n+1) violated",
                       params=pp,
                       witnesses={"min_f_fpp": float(np.min(ffpp)),
                                  "required_bound": ff_bound})

    # growth class: (i) f <= C t ln t (the ratio f/(t ln t) stays bounded on
    # the window), else (ii) f >= C t^alpha with alpha > 1
    slope_tail = _fit_loglog_slope(grid[-64:], fvals[-64:])
    ratio = fvals / (grid * np.log(grid))
    if float(ratio.max()) <= 2.0 * float(np.median(ratio)):
        case = "log"
    elif slope_tail > 1.05:
        case = "power"
    else:
        return Verdict("inconclusive",
                       reason="f matches neither growth hypothesis (i) nor (ii)",
                       params=pp,
                       witnesses={"f_tail_log_slope": slope_tail})

    alpha = -(n - 1.0) / 2.0
    ComparisonTransform(name="warp-power", alpha=alpha, c=float(n))

    # extremal trajectory of (f v')' = -delta v / f with stretched time tau
    def sys(t, y):
        fv = float(f.eval(t))
        return [y[1] / fv, -delta * y[0] / fv, 1.0 / fv]

    t_eval = np.geomspace(t0, T, 1024)
    sol = solve_ivp(sys, (t0, T), [1.0, 0.0, 0.0], method="RK45", rtol=RTOL,
                    atol=ATOL, t_eval=t_eval)
    if sol.status == -1:
        raise StiffFailure(f"integrator failed: {sol.message}")
    tt, v, tau = sol.t, sol.y[0], sol.y[2]
    pos = v > 1e-12
    witnesses = {"growth_case": case,
                 "f_tail_log_slope": slope_tail,
                 "c_squared_statement": c_sq_statement,
                 "ff_second_derivative_bound": ff_bound,
                 "transform_alpha": alpha}

    beta = (n - 1.0) / 2.0
    if case == "log":
        # decay bound on the positive arc, with C = sup f/(t ln t)
        C_f = float(np.max(fvals / (grid * np.log(grid))))
        decay_rate = delta / (2.0 * C_f ** 2)
        lnln = np.log(np.log(tt[pos])) - math.log(math.log(t0))
        bound = np.exp(-decay_rate * lnln ** 2)
        decay_ok = bool(np.all(v[pos] <= bound * (1.0 + 1e-8)))
        witnesses["decay_rate"] = decay_rate
        witnesses["decay_bound_holds"] = decay_ok
        witnesses["decay_margin"] = float(np.min(bound - v[pos]))
        if not decay_ok:
            return Verdict("inconclusive",
                           reason="decay bound not confirmed on trajectory",
                           params=pp, witnesses=witnesses)
        # weaken to v <= C'/(ln t)^beta and bound U = f^alpha v
        C_prime = float(np.max(v[pos] * np.log(tt[pos]) ** beta))
        witnesses["beta"] = beta
        witnesses["C_prime"] = C_prime

        def u_bound(t):
            t = np.asarray(t, dtype=float)
            return C_prime * np.asarray(f.eval(t), dtype=float) ** alpha \
                / np.log(t) ** beta
    else:
        # power growth: f v' stays bounded, so v is bounded
        v_cap = float(np.max(np.abs(v)))
        witnesses["v_bound"] = v_cap

        def u_bound(t):
            t = np.asarray(t, dtype=float)
            return v_cap * np.asarray(f.eval(t), dtype=float) ** alpha

    from .completeness import ray_length
    report = ray_length(u_bound, None, n, t0, T)
    witnesses["ray_integral"] = report.integral
    witnesses["ray_tail_exponent"] = report.tail_exponent
    witnesses["ray_total"] = report.total
    witnesses["ray_verdict"] = report.verdict
    if report.verdict != "finite":
        return Verdict("inconclusive",
                       reason="ray-length integral of the bounding profile "
                              "not certified finite",
                       params=pp, witnesses=witnesses)
    return Verdict("incompleteness",
                   reason="radial rays have finite length in the deformed metric",
                   params=pp, witnesses=witnesses)


_CERTIFICATES = {
    "thm48": certificate_thm48,
    "thm413": certificate_thm413,
    "thm418": certificate_thm418,
    "thm112": certificate_thm112,
    "thm38": certificate_thm38,
}


def comparison_certificate(kind, params) -> Verdict:
    """Dispatch to one of the averaged comparison-ODE certificates."""
    try:
        fn = _CERTIFICATES[kind]
    except KeyError:
        raise DomainError(f"unknown certificate kind '{kind}'")
    return fn(params)


# ---------------------------------------------------------------------------
# the -n(n-1)/t^2 barrier


def barrier_certificate_33(g_curvature_min, n, t_range, profile=None,
                           base_scalar=None) -> Verdict:
    """No warped end can keep its curvature above -n(n-1)/t^2 when the base
    curvature dips to -kappa^2 < 0 somewhere.

    Follows the proof chain numerically: growth cap t^((n+1)/2) for the
    extremal of u''/u = (n+1)(n-1)/(4 t^2), the improved linear cap, and
    the forced sign change of u.  When a profile is supplied, its curvature
    is first checked against the barrier hypothesis; a profile that stays
    below -n(n-1)/t^2 yields an inconclusive verdict (hypotheses unmet).
    """
    kappa_sq = float(g_curvature_min)
    if n < 3:
        raise DomainError("barrier certificate requires n >= 3")
    if kappa_sq <= 0:
        raise DomainError("need kappa^2 > 0")
    t0, T = t_range
    params = {"kappa_sq": kappa_sq, "n": n, "t0": t0, "T": T}

    if profile is not None:
        # hypothesis check: R(t) >= -n(n-1)/t^2 on the window
        from .warp import warped_scalar_curvature
        from .geometry import BaseGeometry
        base = BaseGeometry.constant(n, base_scalar if base_scalar is not None
                                     else -kappa_sq)
        grid = np.geomspace(t0, T, 256)
        Rvals = np.asarray(warped_scalar_curvature(profile, base, grid), dtype=float)
        margin = Rvals * grid ** 2 + n * (n - 1)
        params["profile"] = profile.source
        if float(margin.min()) < 0:
            return Verdict("inconclusive",
                           reason="profile curvature dips below -n(n-1)/t^2; "
                                  "barrier hypothesis unmet",
                           params=params,
                           witnesses={"min_margin_t2R_plus_nn1": float(margin.min())})

    C0 = (n + 1.0) * (n - 1.0) / 4.0
    eps_ind = (n + 1.0) / 2.0
    ComparisonTransform(name="indicial", epsilon=eps_ind, c=C0)
    measured, sol = _growth_exponent(lambda t: C0 / t ** 2, t0, 100.0 * t0,
                                     y0=1.0, dy0=eps_ind / t0)
    cap_c = float(np.max(sol.y[0] / sol.t ** eps_ind)) * 1.05

    # improved bound: kappa^2/u^(4/(n+1)) >= c'/t^2 with the measured cap
    c_prime = kappa_sq / cap_c ** (4.0 / (n + 1.0))
    C_lin = cap_c  # after u'' <= 0 kicks in: u <= C t

    # final stage: u''/u <= ((n+1)/(4n)) [ n(n-1)/t^2 - kappa^2/(C t)^(4/(n+1)) ]
    coeff = (n + 1.0) / (4.0 * n)
    expo = 4.0 / (n + 1.0)

    def k(t):
        return coeff * (n * (n - 1.0) / t ** 2
                        - kappa_sq / (C_lin * t) ** expo)

    # start where the coefficient is safely negative
    t_neg = t0
    while k(t_neg) >= 0 and t_neg < 1e12:
        t_neg *= 2.0
    if k(t_neg) >= 0:
        raise StiffFailure("coefficient never turns negative")

    Tc = t_neg
    cross = None
    for _ in range(16):
        Tc = 2.0 * Tc + 10.0
        cross, _ = _first_crossing(lambda t, u, du: k(t) * u, t_neg,
                                   [C_lin * t_neg, C_lin], Tc)
        if cross is not None:
            break
    if cross is None:
        raise StiffFailure("no crossing found in the barrier chain")
    return Verdict("nonexistence",
                   reason="substituted warp forced through zero under the barrier",
                   params=params,
                   witnesses={"crossings": [cross],
                              "growth_exponent_cap": eps_ind,
                              "measured_growth_exponent": measured,
                              "improved_constant": c_prime,
                              "linear_cap_constant": C_lin,
                              "coefficient_negative_from": t_neg})
