"""Scalar curvature and Laplacian of polar-type metrics dt^2 + f^2(t,x) g(x)
over a discretized flat torus base.

t-derivatives of fields are exact (symbolic on the expression tree);
x-derivatives use the periodic grid operators.  Slice computations are pure
functions of the sampled arrays.
"""

from __future__ import annotations

import math

import numpy as np

from . import expr
from .errors import DomainError, ExpressionError
from .geometry import BaseGeometry, DimensionConstants
from .warp import WarpProfile, warped_scalar_curvature


class BaseGrid:
    """Flat unit torus [0, 2pi)^n sampled with m points per axis.

    stencil: 'fd2' (centered periodic second differences) or 'spectral'
    (FFT; spectrally accurate for smooth fields).  Both annihilate
    constants and satisfy the discrete Green's identity exactly.
    """

    def __init__(self, n, m, stencil="fd2"):
        if n < 2:
            raise DomainError(f"need n >= 2, got {n}")
        if m < 8:
            raise DomainError(f"need at least 8 points per axis, got {m}")
        if stencil not in ("fd2", "spectral"):
            raise DomainError(f"unknown stencil '{stencil}'")
        self.n = n
        self.m = m
        self.stencil = stencil
        self.spacing = 2.0 * math.pi / m
        self.axis_points = np.arange(m) * self.spacing
        self.volume = (2.0 * math.pi) ** n
        self._k = np.fft.fftfreq(m, d=1.0 / m)  # integer wavenumbers

    # -- sampling -----------------------------------------------------------

    def mesh(self):
        """Meshgrid of coordinates, a tuple of n arrays of shape (m,)*n."""
        return np.meshgrid(*([self.axis_points] * self.n), indexing="ij")

    def env(self, t):
        """Evaluation environment at a t-slice: t plus x1..xn mesh arrays."""
        coords = self.mesh()
        env = {f"x{i + 1}": coords[i] for i in range(self.n)}
        env["t"] = t
        return env

    # -- operators ----------------------------------------------------------

    def laplacian(self, arr):
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (self.m,) * self.n:
            raise DomainError("grid function has wrong shape")
        if self.stencil == "spectral":
            spec = np.fft.fftn(arr)
            ksq = np.zeros((self.m,) * self.n)
            for ax in range(self.n):
                shape = [1] * self.n
                shape[ax] = self.m
                ksq = ksq + self._k.reshape(shape) ** 2
            return np.real(np.fft.ifftn(spec * (-ksq)))
        out = np.zeros_like(arr)
        h2 = self.spacing ** 2
        for ax in range(self.n):
            out += (np.roll(arr, 1, axis=ax) + np.roll(arr, -1, axis=ax) - 2.0 * arr) / h2
        return out

    def gradient(self, arr):
        """Tuple of centered (or spectral) first differences along each axis."""
        arr = np.asarray(arr, dtype=float)
        if self.stencil == "spectral":
            spec = np.fft.fftn(arr)
            grads = []
            for ax in range(self.n):
                shape = [1] * self.n
                shape[ax] = self.m
                grads.append(np.real(np.fft.ifftn(spec * (1j * self._k.reshape(shape)))))
            return tuple(grads)
        return tuple(
            (np.roll(arr, -1, axis=ax) - np.roll(arr, 1, axis=ax)) / (2.0 * self.spacing)
            for ax in range(self.n))

    def grad_inner(self, a, b):
        """<grad a, grad b> in the flat base metric."""
        ga = self.gradient(a)
        gb = self.gradient(b)
        return sum(x * y for x, y in zip(ga, gb))

    def integrate(self, arr):
        """Trapezoid quadrature on the periodic grid (plain weighted sum)."""
        return float(np.sum(arr) * self.spacing ** self.n)

    def as_geometry(self):
        return BaseGeometry.torus(self.n, grid=self)


class PolarWarpField:
    """Positive warp f(t, x) given by an expression in t and x1..xn."""

    def __init__(self, source, grid: BaseGrid, domain_min=2.0):
        self.source = source
        self.grid = grid
        self.domain_min = domain_min
        self.ast = expr.parse(source)
        allowed = {"t"} | {f"x{i + 1}" for i in range(grid.n)}
        unknown = self.ast.free_vars() - allowed
        if unknown:
            raise ExpressionError(f"unknown identifier(s) {sorted(unknown)}")
        self._dt = self.ast.diff("t")
        self._dtt = self._dt.diff("t")

    def _sample(self, node, t, check=False):
        val = node.eval(self.grid.env(t))
        val = np.broadcast_to(np.asarray(val, dtype=float),
                              (self.grid.m,) * self.grid.n).copy()
        if check and np.any(val <= 0):
            raise DomainError(f"field '{self.source}' is nonpositive on the t = {t} slice")
        return val

    def sample(self, t):
        if t <= self.domain_min:
            raise DomainError(f"t must exceed domain_min = {self.domain_min}")
        return self._sample(self.ast, t, check=True)

    def sample_dt(self, t):
        return self._sample(self._dt, t)

    def sample_dtt(self, t):
        return self._sample(self._dtt, t)

    def eval_point(self, t, x):
        env = {f"x{i + 1}": x[i] for i in range(self.grid.n)}
        env["t"] = t
        return self.ast.eval(env)


class ConformalFactorField(PolarWarpField):
    """Positive conformal factor u(t, x) with exact t-derivative oracle."""


def mu_field(f: PolarWarpField, t):
    """mu = f^((n-2)/2) on the t-slice (n >= 3)."""
    n = f.grid.n
    if n < 3:
        raise DomainError("the conformal-on-base exponent needs n >= 3")
    return f.sample(t) ** ((n - 2) / 2.0)


def conformal_base_curvature(mu, base, base_scalar=0.0):
    """Scalar curvature of the base metric conformally scaled by f^2, from
    mu = f^((n-2)/2):

        R = c_n^{-1} mu^{-(n+2)/(n-2)} [c_n R(g) mu - Lap_g mu]

    `base` is a BaseGrid (grid path) or a BaseGeometry with constant data
    (analytic path; mu must then be a scalar).
    """
    if isinstance(base, BaseGrid):
        n = base.n
        if n < 3:
            raise DomainError("formula degenerates for n < 3")
        mu = np.asarray(mu, dtype=float)
        if np.any(mu <= 0):
            raise DomainError("mu must be positive")
        cn = DimensionConstants(n).c_n
        return (cn * base_scalar * mu - base.laplacian(mu)) / cn * mu ** (-(n + 2.0) / (n - 2.0))
    # analytic constant path: f = lambda, R = R(g)/lambda^2
    base.require_dimension(3)
    mu = float(mu)
    if mu <= 0:
        raise DomainError("mu must be positive")
    lam = mu ** (2.0 / (base.n - 2.0))
    return base.scalar_curvature / lam ** 2


def polar_scalar_curvature(f: PolarWarpField, t, base_scalar=0.0):
    """Scalar curvature slice of dt^2 + f^2(t,x) g(x):

        Rbar = R(f^2(t,.) g) - (1/f^2) [2n f f_tt + n(n-1) f_t^2]
    """
    grid = f.grid
    n = grid.n
    fval = f.sample(t)
    ft = f.sample_dt(t)
    ftt = f.sample_dtt(t)
    r_base = conformal_base_curvature(fval ** ((n - 2) / 2.0), grid, base_scalar)
    return r_base - (2.0 * n * fval * ftt + n * (n - 1) * ft ** 2) / fval ** 2


def polar_scalar_curvature_profile(f: WarpProfile, base: BaseGeometry, t):
    """x-independent reduction; coincides with the warped-product formula."""
    return warped_scalar_curvature(f, base, t)


def polar_laplacian(f: PolarWarpField, u: ConformalFactorField, t):
    """Laplacian slice of u in the polar metric:

        u_tt + (n f_t / f) u_t + ((n-2)/f^3) <grad f, grad u> + (1/f^2) Lap u
    """
    grid = f.grid
    n = grid.n
    fval = f.sample(t)
    uval = u._sample(u.ast, t)
    ut = u.sample_dt(t)
    utt = u.sample_dtt(t)
    cross = grid.grad_inner(fval, uval)
    return (utt + n * f.sample_dt(t) / fval * ut
            + (n - 2.0) / fval ** 3 * cross
            + grid.laplacian(uval) / fval ** 2)


def conformal_scalar_curvature(u: ConformalFactorField, f: PolarWarpField, t,
                               base_scalar=0.0):
    """Scalar curvature slice of u^(4/(n-1)) [dt^2 + f^2 g], solved from

        Lap u - c_{n+1} Rbar u + c_{n+1} R_c u^((n+3)/(n-1)) = 0
    """
    grid = f.grid
    n = grid.n
    uval = u._sample(u.ast, t, check=True)
    cnp1 = DimensionConstants(n).c_np1
    rbar = polar_scalar_curvature(f, t, base_scalar)
    lap = polar_laplacian(f, u, t)
    return (cnp1 * rbar * uval - lap) / (cnp1 * uval ** ((n + 3.0) / (n - 1.0)))
