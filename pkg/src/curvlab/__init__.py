"""Scalar curvature of warped and polar-type end metrics: closed forms,
expression-based warp profiles, ODE solvers and comparison certificates,
finite-difference oracle, and completeness tests."""

from .errors import (BracketError, CurvlabError, DomainError, ExpressionError,
                     StiffFailure, WindowTooSmall)
from .expr import parse
from .geometry import BaseGeometry, DimensionConstants, sphere_volume
from .warp import (Field, SubstitutedProfile, WarpProfile, cone_log_curvature,
                   default_probe_grid, ode_residual, parse_field,
                   parse_profile, power_law_curvature, substitute_u,
                   warped_laplacian, warped_scalar_curvature)
from .polar import (BaseGrid, ConformalFactorField, PolarWarpField,
                    conformal_base_curvature, conformal_scalar_curvature,
                    mu_field, polar_laplacian, polar_scalar_curvature,
                    polar_scalar_curvature_profile)
from .ode import (AveragedProfile, ComparisonTransform, MonotoneSolution,
                  OdeSpec, SubSuperPair, Trajectory, Verdict,
                  average_over_base, barrier_certificate_33,
                  comparison_certificate, monotone_solve,
                  oscillation_certificate, shoot)
from .oracle import (BaseChart, ChristoffelTable, CurvatureTensorSample,
                     MetricGrid, assemble_metric, chart_for, fd_christoffel,
                     fd_scalar_curvature)
from .completeness import RayLengthReport, ray_length, yamabe_test_integral
from .serialize import fmt17, read_csv, write_csv, write_jsonl

__version__ = "0.1.0"

__all__ = [
    "BracketError", "CurvlabError", "DomainError", "ExpressionError",
    "StiffFailure", "WindowTooSmall", "parse", "BaseGeometry",
    "DimensionConstants", "sphere_volume", "Field", "SubstitutedProfile",
    "WarpProfile", "cone_log_curvature", "default_probe_grid", "ode_residual",
    "parse_field", "parse_profile", "power_law_curvature", "substitute_u",
    "warped_laplacian", "warped_scalar_curvature", "BaseGrid",
    "ConformalFactorField", "PolarWarpField", "conformal_base_curvature",
    "conformal_scalar_curvature", "mu_field", "polar_laplacian",
    "polar_scalar_curvature", "polar_scalar_curvature_profile",
    "AveragedProfile", "ComparisonTransform", "MonotoneSolution", "OdeSpec",
    "SubSuperPair", "Trajectory", "Verdict", "average_over_base",
    "barrier_certificate_33", "comparison_certificate", "monotone_solve",
    "oscillation_certificate", "shoot", "BaseChart", "ChristoffelTable",
    "CurvatureTensorSample", "MetricGrid", "assemble_metric", "chart_for",
    "fd_christoffel", "fd_scalar_curvature", "RayLengthReport", "ray_length",
    "yamabe_test_integral", "fmt17", "read_csv", "write_csv", "write_jsonl",
]
