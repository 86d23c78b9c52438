"""Command-line front end: parse configs and profile expressions, dispatch
computations, and emit deterministic CSV/JSON-lines artifacts."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .completeness import ray_length, yamabe_test_integral
from .errors import CurvlabError, DomainError
from .geometry import BaseGeometry
from .ode import (OdeSpec, SubSuperPair, barrier_certificate_33,
                  comparison_certificate, monotone_solve,
                  oscillation_certificate)
from .oracle import assemble_metric, fd_scalar_curvature
from .polar import BaseGrid, PolarWarpField, polar_scalar_curvature
from .serialize import atomic_write_text, csv_text, fmt17, jsonl_text
from .warp import parse_profile, warped_scalar_curvature


def parse_range(text):
    """'a:b:k' -> k log-spaced samples on [a, b]; a bare number -> [a]."""
    parts = text.split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) != 3:
        raise DomainError(f"bad range '{text}': expected a:b:k")
    a, b, k = float(parts[0]), float(parts[1]), int(parts[2])
    if not (0 < a < b) or k < 1:
        raise DomainError(f"bad range '{text}': need 0 < a < b and k >= 1")
    return np.geomspace(a, b, k)


def load_config(path):
    """Plain key=value lines; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"bad config line: '{raw.strip()}'")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _emit(args, text, meta=None):
    if getattr(args, "out", None):
        atomic_write_text(args.out, text)
        if meta is not None:
            meta = dict(meta)
            meta["written_at"] = time.strftime("%Y-%m-%dT%H:%M:%S")
            atomic_write_text(args.out + ".meta.json",
                              json.dumps(meta, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _make_base(args, n):
    kind = getattr(args, "base", "constant")
    if kind == "constant":
        return BaseGeometry.constant(n, args.base_R, volume=args.base_vol)
    if kind == "sphere":
        return BaseGeometry.sphere(n, radius=args.radius)
    if kind == "torus":
        return BaseGrid(n, args.m, stencil=args.stencil)
    raise DomainError(f"unknown base kind '{kind}'")


# ---------------------------------------------------------------------------
# subcommands


def cmd_curvature(args):
    t_vals = parse_range(args.t)
    base = _make_base(args, args.n)
    if isinstance(base, BaseGrid):
        f = PolarWarpField(args.profile, base, domain_min=args.domain_min)
        header = ["t"] + [f"x{i + 1}" for i in range(base.n)] + ["value"]
        rows = []
        mesh = base.mesh()
        for t in t_vals:
            R = polar_scalar_curvature(f, float(t), base_scalar=0.0)
            for idx in np.ndindex(R.shape):
                rows.append([t] + [mesh[i][idx] for i in range(base.n)] + [R[idx]])
        _emit(args, csv_text(header, rows), {"command": "curvature"})
        return 0
    f = parse_profile(args.profile, domain_min=args.domain_min)
    R = warped_scalar_curvature(f, base, t_vals)
    R = np.broadcast_to(np.asarray(R, dtype=float), t_vals.shape)
    _emit(args, csv_text(["t", "R"], zip(t_vals, R)), {"command": "curvature"})
    return 0


def cmd_solve(args):
    n = args.n
    spec = OdeSpec(n=n, R=_R_function(args), R_g=-n * (n - 1),
                   t0=args.t0, T=args.T, form="eq31")
    pair = SubSuperPair(args.u_minus_const,
                        (lambda t, C=args.u_plus_coeff, p=args.u_plus_power:
                         C * np.asarray(t, dtype=float) ** p))
    sol = monotone_solve(spec, pair, bc=(args.bc_left, args.bc_right),
                         num_points=args.points)
    du = np.gradient(sol.u, sol.t)
    text = csv_text(["t", "u", "du"], zip(sol.t, sol.u, du))
    _emit(args, text, {"command": "solve",
                       "residual_norm": sol.residual_norm,
                       "iterations": sol.iterations})
    return 0


def _R_function(args):
    if args.R_const is not None:
        return float(args.R_const)
    C, alpha = args.R_coeff, args.R_power
    return lambda t: -C / np.asarray(t, dtype=float) ** alpha


def cmd_certify(args):
    kind = args.kind
    if kind == "oscillation":
        verdict = oscillation_certificate(args.c, args.t0, args.T)
    elif kind == "barrier33":
        profile = (parse_profile(args.profile, domain_min=args.domain_min)
                   if args.profile else None)
        verdict = barrier_certificate_33(
            args.kappa_sq, args.n, (args.t0, args.T or 1.0e4),
            profile=profile, base_scalar=args.base_R)
    elif kind in ("thm48", "thm413", "thm418", "thm112", "thm38"):
        params = {"n": args.n, "t0": args.t0}
        if args.T:
            params["T"] = args.T
        for name in ("b", "c", "C1", "C2", "C", "eps", "kappa_sq", "delta"):
            val = getattr(args, name.replace("kappa_sq", "kappa_sq"), None)
            if val is not None:
                params[name] = val
        if kind == "thm38":
            if not args.profile:
                raise DomainError("thm38 requires --profile")
            params["f"] = parse_profile(args.profile, domain_min=args.domain_min)
        verdict = comparison_certificate(kind, params)
    else:
        raise DomainError(f"unknown certificate kind '{kind}'")
    if args.format == "text":
        _emit(args, verdict.to_text(), {"command": "certify"})
    else:
        _emit(args, verdict.to_json() + "\n", {"command": "certify"})
    return 0


def cmd_oracle(args):
    t_vals = parse_range(args.t)
    base = _make_base(args, args.n)
    if isinstance(base, BaseGrid):
        f = PolarWarpField(args.profile, base, domain_min=args.domain_min)
        x0 = np.full(base.n, args.x0)
        closed_at = (lambda t: float(
            polar_scalar_curvature(f, t)[tuple(
                int(round(args.x0 / base.spacing)) % base.m
                for _ in range(base.n))]))
    else:
        f = parse_profile(args.profile, domain_min=args.domain_min)
        x0 = np.full(base.n, 0.3)
        closed_at = lambda t: float(warped_scalar_curvature(f, base, t))
    metric = assemble_metric(f, base, h=args.h)
    rows = []
    for t in t_vals:
        point = np.concatenate([[t], x0])
        closed = closed_at(float(t))
        fd = fd_scalar_curvature(metric, point).scalar
        abs_err = abs(fd - closed)
        rel = abs_err / max(abs(closed), 1e-300)
        rows.append([t, closed, fd, abs_err, rel])
    _emit(args, csv_text(["point", "closed_form", "fd", "abs_err", "rel_err"],
                         rows), {"command": "oracle"})
    return 0


def cmd_raylength(args):
    from .warp import parse_field
    u = parse_field(args.u)
    report = ray_length(lambda t: np.asarray(u.eval(t), dtype=float),
                        None, args.n, args.t0, args.T)
    _emit(args, report.to_json() + "\n", {"command": "raylength"})
    return 0


def cmd_sweep(args):
    c_vals = parse_range(args.c)
    threads = int(os.environ.get("CURVLAB_THREADS", "4"))

    def one(c):
        return oscillation_certificate(float(c), args.t0, args.T).to_json()

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        records = list(pool.map(one, c_vals))
    _emit(args, jsonl_text(records), {"command": "sweep"})
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    parser = argparse.ArgumentParser(
        prog="curvlab",
        description="Curvature of warped ends: closed forms, solvers, "
                    "certificates, and finite-difference cross-checks.")
    parser.add_argument("--config", help="key=value config file; flags override")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--domain-min", dest="domain_min", type=float, default=2.0)

    p = sub.add_parser("curvature", help="scalar curvature along t")
    common(p)
    p.add_argument("--profile", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--base", default="constant",
                   choices=["constant", "sphere", "torus"])
    p.add_argument("--base-R", dest="base_R", type=float, default=0.0)
    p.add_argument("--base-vol", dest="base_vol", type=float, default=1.0)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--m", type=int, default=16)
    p.add_argument("--stencil", default="fd2", choices=["fd2", "spectral"])
    p.add_argument("--t", required=True, help="a:b:k log-spaced samples")

    p = sub.add_parser("solve", help="monotone sub/supersolution solve")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--t0", type=float, default=3.0)
    p.add_argument("--T", type=float, default=100.0)
    p.add_argument("--R-const", dest="R_const", type=float, default=None)
    p.add_argument("--R-coeff", dest="R_coeff", type=float, default=7.0)
    p.add_argument("--R-power", dest="R_power", type=float, default=2.0)
    p.add_argument("--u-minus-const", dest="u_minus_const", type=float, default=0.5)
    p.add_argument("--u-plus-coeff", dest="u_plus_coeff", type=float, default=6.0)
    p.add_argument("--u-plus-power", dest="u_plus_power", type=float, default=2.0)
    p.add_argument("--bc-left", dest="bc_left", type=float, default=2.0)
    p.add_argument("--bc-right", dest="bc_right", type=float, default=2.0)
    p.add_argument("--points", type=int, default=801)

    p = sub.add_parser("certify", help="nonexistence/incompleteness certificates")
    common(p)
    p.add_argument("--kind", required=True,
                   choices=["oscillation", "thm48", "thm413", "thm418",
                            "thm112", "thm38", "barrier33"])
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--t0", type=float, default=3.0)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--C1", type=float, default=None)
    p.add_argument("--C2", type=float, default=None)
    p.add_argument("--C", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--kappa-sq", dest="kappa_sq", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--profile", default=None)
    p.add_argument("--base-R", dest="base_R", type=float, default=None)
    p.add_argument("--format", default="jsonl", choices=["jsonl", "text"])

    p = sub.add_parser("oracle", help="closed form vs finite differences")
    common(p)
    p.add_argument("--profile", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--base", default="constant",
                   choices=["constant", "sphere", "torus"])
    p.add_argument("--base-R", dest="base_R", type=float, default=0.0)
    p.add_argument("--base-vol", dest="base_vol", type=float, default=1.0)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--m", type=int, default=16)
    p.add_argument("--stencil", default="fd2", choices=["fd2", "spectral"])
    p.add_argument("--t", required=True)
    p.add_argument("--h", type=float, default=1.0e-3)
    p.add_argument("--x0", type=float, default=0.3)

    p = sub.add_parser("raylength", help="radial ray length of a deformation")
    common(p)
    p.add_argument("--u", required=True, help="expression for u(t)")
    p.add_argument("--n", type=int)
    p.add_argument("--t0", type=float, default=3.0)
    p.add_argument("--T", type=float, default=1.0e4)

    p = sub.add_parser("sweep", help="oscillation certificates over a c-range")
    common(p)
    p.add_argument("--c", required=True, help="a:b:k range of c values")
    p.add_argument("--t0", type=float, default=3.0)
    p.add_argument("--T", type=float, default=None)
    return parser


_DISPATCH = {
    "curvature": cmd_curvature,
    "solve": cmd_solve,
    "certify": cmd_certify,
    "oracle": cmd_oracle,
    "raylength": cmd_raylength,
    "sweep": cmd_sweep,
}

_NEEDS_N = {"curvature", "solve", "oracle", "raylength"}


def main(argv=None):
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)

    # config file values become defaults; flags override
    if "--config" in argv:
        i = argv.index("--config")
        try:
            cfg = load_config(argv[i + 1])
        except (OSError, IndexError, CurvlabError) as e:
            print(f"config error: {e}", file=sys.stderr)
            return 2
        del argv[i:i + 2]
        # the subcommand must come first; the config may name it
        cmd = cfg.get("command")
        if cmd and (not argv or argv[0] not in _DISPATCH):
            argv.insert(0, cmd)
        injected = []
        for key, val in sorted(cfg.items()):
            if key == "command":
                continue
            flag = "--" + key.replace("_", "-")
            if flag not in argv:
                injected.extend([flag, val])
        argv = argv[:1] + injected + argv[1:]

    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    if args.command in _NEEDS_N and getattr(args, "n", None) is None:
        print(f"usage error: --n is required for '{args.command}'",
              file=sys.stderr)
        return 2
    try:
        return _DISPATCH[args.command](args)
    except CurvlabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
