"""Base manifolds reduced to what the curvature formulas need."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError


@dataclass(frozen=True)
class DimensionConstants:
    """Constants that are pure functions of the base dimension n."""

    n: int
    c_n: float = field(init=False)
    c_np1: float = field(init=False)
    subst_exp: float = field(init=False)
    conf_exp: float = field(init=False)
    nonlin_exp: float = field(init=False)

    def __post_init__(self):
        n = self.n
        if n < 2:
            raise DomainError(f"base dimension must be >= 2, got {n}")
        object.__setattr__(self, "c_n", (n - 2) / (4.0 * (n - 1)))
        object.__setattr__(self, "c_np1", (n - 1) / (4.0 * n))
        object.__setattr__(self, "subst_exp", (n + 1) / 2.0)
        object.__setattr__(self, "conf_exp", 4.0 / (n - 1))
        object.__setattr__(self, "nonlin_exp", (n - 3) / (n + 1))


def sphere_volume(n, radius):
    """Surface volume of the round n-sphere of the given radius."""
    return 2.0 * math.pi ** ((n + 1) / 2.0) / math.gamma((n + 1) / 2.0) * radius ** n


@dataclass(frozen=True)
class BaseGeometry:
    """The compact base (N, g): dimension, constant scalar curvature, volume.

    kind is one of 'abstract-constant', 'sphere-analytic', 'torus-grid'.
    In torus-grid mode `grid` carries the discretized base (see polar module).
    """

    n: int
    scalar_curvature: float
    volume: float
    kind: str = "abstract-constant"
    radius: float | None = None
    grid: object | None = None

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"base dimension must be >= 2, got {self.n}")
        if self.volume <= 0:
            raise DomainError("base volume must be positive")

    @staticmethod
    def constant(n, scalar_curvature, volume=1.0):
        return BaseGeometry(n=n, scalar_curvature=float(scalar_curvature),
                            volume=float(volume), kind="abstract-constant")

    @staticmethod
    def sphere(n, radius=1.0):
        if radius <= 0:
            raise DomainError("sphere radius must be positive")
        return BaseGeometry(n=n, scalar_curvature=n * (n - 1) / radius ** 2,
                            volume=sphere_volume(n, radius),
                            kind="sphere-analytic", radius=radius)

    @staticmethod
    def torus(n, grid=None):
        return BaseGeometry(n=n, scalar_curvature=0.0,
                            volume=(2.0 * math.pi) ** n,
                            kind="torus-grid", grid=grid)

    def require_dimension(self, minimum):
        if self.n < minimum:
            raise DomainError(
                f"result requires base dimension >= {minimum}, got n = {self.n}")

    @property
    def constants(self):
        return DimensionConstants(self.n)
