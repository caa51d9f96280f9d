"""Command-line front end emitting plot-ready CSV data and check reports.

Subcommands
-----------
simulate   exact (RK4) and adiabatic trajectories plus a deviation report.
phases     per-branch cumulative dynamical/geometric phases and the tracked
           eigen-system.
fieldmap   curvature samples on an (x, y) grid, one file per branch window
           (or one file for an explicit grid).
loop       parameter-space paths over one common driving period and the
           loop/surface/time-domain geometric-phase cross-checks.
check      the invariant suite (Stokes, gauge, reparametrization,
           reciprocity-null, adiabatic-convergence, step-doubling).

Exit codes: 0 success, 2 configuration error, 3 numerical abort
(exceptional point, instability, gauge/grid failure), 4 failed check.
All CSV files carry a single header line and 12-significant-digit floats,
so identical scenarios produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .checks import run_checks
from .errors import (
    BerryheatError,
    ConfigError,
    ExceptionalPointError,
    GaugeError,
    GridTooCoarseError,
    InstabilityError,
    InvalidModelError,
    OpenPathError,
    ParametrizationError,
)
from .geometry import field_map, loop_integral, surface_integral
from .integrator import compare
from .phases import accumulate_phases
from .pipeline import adiabatic_pipeline, branch_paths, eigen_trajectory, exact_trajectory
from .scenario import Scenario, common_period, load_config, preset, preset_names

__all__ = ["main", "console_main"]

_NUMERICAL_ERRORS = (
    ExceptionalPointError,
    GridTooCoarseError,
    GaugeError,
    ParametrizationError,
    OpenPathError,
    InstabilityError,
)


def _fmt(value):
    return f"{value:.12g}"


def write_csv(path, header, columns):
    """Write columns (equal-length 1-d arrays) as deterministic CSV."""
    rows = zip(*[np.asarray(c).ravel() for c in columns])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, (float, np.floating)) else str(v)
                              for v in row) + "\n")


def write_json(path, payload):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _scenarios(args):
    if bool(args.config) == bool(args.preset):
        raise ConfigError("provide exactly one of --config or --preset")
    if args.config:
        scenarios = [load_config(args.config)]
    else:
        scenarios = preset(args.preset)
    if args.dt is not None:
        if args.dt <= 0:
            raise ConfigError(f"--dt must be positive, got {args.dt}")
        scenarios = [s.with_dt(args.dt) for s in scenarios]
    return scenarios


def _outdir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _branches(args, n):
    if args.branch == "all":
        return list(range(n))
    return [int(args.branch) - 1]


def _slug(name):
    return "".join(c if c.isalnum() or c in "-_" else "-" for c in name)


def cmd_simulate(args):
    out = _outdir(args)
    for scn in _scenarios(args):
        tag = _slug(scn.name)
        exact = exact_trajectory(scn)
        _, _, adiabatic = adiabatic_pipeline(scn)
        report = compare(adiabatic, exact)
        n = scn.network.n_bodies
        temp_header = [f"T_{i + 1}" for i in range(n)]
        for traj, kind in ((exact, "exact"), (adiabatic, "adiabatic")):
            write_csv(
                out / f"{tag}_{kind}.csv",
                ["t"] + temp_header + ["method"],
                [traj.times] + [traj.temperatures[:, i] for i in range(n)]
                + [np.array([traj.method] * traj.times.size, dtype=object)],
            )
        write_csv(
            out / f"{tag}_comparison.csv",
            ["t"] + [f"abs_dev_T_{i + 1}" for i in range(n)],
            [report.times] + [report.deviation[:, i] for i in range(n)],
        )
        write_json(out / f"{tag}_report.json", {
            "scenario": scn.name,
            "dt": scn.timestep,
            "max_abs_deviation_K": [float(v) for v in report.max_abs],
            "rms_deviation_K": [float(v) for v in report.rms],
        })
        print(f"{scn.name}: wrote exact/adiabatic trajectories, "
              f"max deviation {report.worst:.4g} K")
    return 0


def cmd_phases(args):
    out = _outdir(args)
    for scn in _scenarios(args):
        tag = _slug(scn.name)
        eigen, _ = eigen_trajectory(scn, gauge=args.gauge)
        ph = accumulate_phases(eigen)
        n = eigen.n_branches
        branches = _branches(args, n)
        K = eigen.times.size
        write_csv(
            out / f"{tag}_phases.csv",
            ["t", "branch", "gamma_d", "gamma_g"],
            [
                np.concatenate([eigen.times for _ in branches]),
                np.concatenate([np.full(K, i + 1) for i in branches]),
                np.concatenate([ph.dynamical[:, i] for i in branches]),
                np.concatenate([ph.geometric[:, i] for i in branches]),
            ],
        )
        eig_cols = [np.concatenate([eigen.times for _ in branches]),
                    np.concatenate([np.full(K, i + 1) for i in branches]),
                    np.concatenate([eigen.eigenvalues[:, i] for i in branches])]
        header = ["t", "i", "lambda_i"]
        nb = scn.network.n_bodies
        for comp in range(nb):
            eig_cols.append(np.concatenate([eigen.right[:, comp, i] for i in branches]))
            header.append(f"phi_i_{comp + 1}")
        for comp in range(nb):
            eig_cols.append(np.concatenate([eigen.left[:, comp, i] for i in branches]))
            header.append(f"psi_i_{comp + 1}")
        write_csv(out / f"{tag}_eigen.csv", header, eig_cols)
        print(f"{scn.name}: wrote phases for branches "
              f"{[b + 1 for b in branches]} ({K} grid points)")
    return 0


def cmd_fieldmap(args):
    out = _outdir(args)
    corners = (args.xmin, args.xmax, args.ymin, args.ymax)
    explicit = any(v is not None for v in corners)
    if explicit:
        if any(v is None for v in corners):
            raise ConfigError("an explicit grid needs all of --xmin/--xmax/--ymin/--ymax")
        if not (args.xmax > args.xmin and args.ymax > args.ymin):
            raise ConfigError("grid ranges must be non-empty")
        x = np.linspace(args.xmin, args.xmax, args.nx)
        y = np.linspace(args.ymin, args.ymax, args.ny)
        fm = field_map(x, y)
        _write_fieldmap(out / "fieldmap.csv", fm)
        print(f"wrote fieldmap.csv ({args.nx} x {args.ny} grid)")
        return 0
    for scn in _scenarios(args):
        tag = _slug(scn.name)
        _, paths = branch_paths(scn)
        for branch in _branches(args, len(paths)):
            path = paths[branch]
            pad_x = 0.05 * (path.x.max() - path.x.min() or 1.0)
            pad_y = 0.05 * (path.y.max() - path.y.min() or 1.0)
            x = np.linspace(path.x.min() - pad_x, path.x.max() + pad_x, args.nx)
            y = np.linspace(path.y.min() - pad_y, path.y.max() + pad_y, args.ny)
            name = f"{tag}_fieldmap_branch{branch + 1}.csv"
            _write_fieldmap(out / name, field_map(x, y))
            print(f"{scn.name}: wrote {name}")
    return 0


def _write_fieldmap(path, fm):
    X, Y = np.meshgrid(fm.x, fm.y)
    write_csv(path, ["x", "y", "B_z"],
              [X.ravel(), Y.ravel(), fm.curvature.ravel()])


def cmd_loop(args):
    out = _outdir(args)
    for scn in _scenarios(args):
        tag = _slug(scn.name)
        T = common_period(scn.network)
        times, paths = branch_paths(scn, period=T)
        eigen, _ = eigen_trajectory(scn, times=times)
        gg_time = accumulate_phases(eigen).geometric[-1]
        payload = {"scenario": scn.name, "period_s": T, "branches": {}}
        for branch in _branches(args, len(paths)):
            path = paths[branch]
            write_csv(out / f"{tag}_path_branch{branch + 1}.csv",
                      ["t", "x", "y"], [path.times, path.x, path.y])
            loop_a = loop_integral(path, potential="A")
            loop_b = loop_integral(path, potential="A_alt")
            surf = surface_integral(path, resolution=args.resolution)
            payload["branches"][str(branch + 1)] = {
                "loop_A": loop_a,
                "loop_A_alt": loop_b,
                "surface": surf,
                "time_domain": float(gg_time[branch]),
            }
        write_json(out / f"{tag}_loop_report.json", payload)
        print(f"{scn.name}: wrote loop paths and report (period {T:g} s)")
    return 0


def cmd_check(args):
    out = _outdir(args)
    failures = 0
    for scn in _scenarios(args):
        tag = _slug(scn.name)
        results = run_checks(scn)
        write_json(out / f"{tag}_checks.json",
                   {"scenario": scn.name,
                    "checks": [r.as_dict() for r in results]})
        for r in results:
            if r.skipped:
                status = "SKIP"
            else:
                status = "PASS" if r.passed else "FAIL"
            measured = "-" if r.measured is None else f"{r.measured:.3e}"
            tol = "-" if r.tolerance is None else f"{r.tolerance:.0e}"
            print(f"[{status}] {scn.name}/{r.name}: measured {measured} "
                  f"(tolerance {tol}) {r.detail}")
            failures += 0 if (r.passed or r.skipped) else 1
    return 4 if failures else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="berryheat",
        description="Relaxation and geometric-phase analysis of driven "
                    "non-reciprocal thermal networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_branch=False):
        p.add_argument("--config", metavar="PATH", help="scenario configuration file")
        p.add_argument("--preset", metavar="NAME", choices=preset_names(),
                       help="bundled scenario: " + ", ".join(preset_names()))
        p.add_argument("--out", metavar="DIR", default=".", help="output directory")
        p.add_argument("--dt", metavar="SECONDS", type=float, default=None,
                       help="override the grid step")
        if with_branch:
            p.add_argument("--branch", choices=["1", "2", "all"], default="all",
                           help="restrict output to one eigen-branch")

    p = sub.add_parser("simulate", help="exact vs adiabatic trajectories")
    add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("phases", help="cumulative dynamical and geometric phases")
    add_common(p, with_branch=True)
    p.add_argument("--gauge", choices=["norm", "chart"], default="norm",
                   help="eigenvector gauge for the phase accumulation")
    p.set_defaults(func=cmd_phases)

    p = sub.add_parser("fieldmap", help="curvature samples on an (x, y) grid")
    add_common(p, with_branch=True)
    p.add_argument("--xmin", type=float, default=None)
    p.add_argument("--xmax", type=float, default=None)
    p.add_argument("--ymin", type=float, default=None)
    p.add_argument("--ymax", type=float, default=None)
    p.add_argument("--nx", type=int, default=201)
    p.add_argument("--ny", type=int, default=201)
    p.set_defaults(func=cmd_fieldmap)

    p = sub.add_parser("loop", help="parameter-space loops and their integrals")
    add_common(p, with_branch=True)
    p.add_argument("--resolution", type=int, default=1024,
                   help="raster resolution of the surface integral")
    p.set_defaults(func=cmd_loop)

    p = sub.add_parser("check", help="run the invariant suite")
    add_common(p)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3
    except (InvalidModelError, BerryheatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main():
    sys.exit(main())
