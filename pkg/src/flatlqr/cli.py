"""``flatlqr`` command-line tool.

Exit codes: 0 success, 1 config/validation error, 2 singular horizon,
3 simulation divergence, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import demos
from .bvp import nominal_histories
from .closedloop import Homeostat, SimConfig, pole_place, simulate
from .config import ProblemConfig, load_config, parse_config
from .criterion import (eval_criterion, perturbation_check, sweep_horizon,
                        sweep_parameter, turnpike_diagnostic)
from .errors import (ConfigError, DegenerateLagrangianError, FlatLQRError,
                     InvalidArgumentError, NumericError, SimulationDivergedError,
                     SingularHorizonError, SweepFailedError, UncontrollableError)
from .lagrangian import euler_lagrange
from .output import write_csv, write_svg
from .system import CanonicalSystem, canonical_to_statespace

EXIT_OK, EXIT_CONFIG, EXIT_SINGULAR, EXIT_DIVERGED, EXIT_NUMERIC = 0, 1, 2, 3, 4


def _out_dir(arg) -> Path:
    out = Path(os.environ.get("FLATLQR_OUT") or arg or "flatlqr_out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def run_plan(cfg: ProblemConfig, out: Path, panels=None, seed=None, stem="trajectory"):
    if cfg.horizon.is_sweep:
        raise ConfigError("plan needs a fixed horizon T")
    problem = cfg.problem()
    traj = problem.solve(cfg.horizon.T)
    J = eval_criterion(problem.lagrangian, traj, panels)
    hist = nominal_histories(problem.system, traj, cfg.samples)
    report = None
    if seed is not None:
        report = perturbation_check(problem.lagrangian, traj, problem.boundary,
                                    trials=50, seed=seed, panels=panels)
    write_csv(out / f"{stem}.csv", hist.header, hist.rows())
    return J, hist, report


def run_sweep(cfg: ProblemConfig, out: Path, panels=None, stem="sweep"):
    if cfg.parameter is not None:
        if cfg.horizon.is_sweep:
            raise ConfigError("a parameter sweep needs a fixed horizon T")
        par = cfg.parameter
        result = sweep_parameter(cfg.family(), cfg.horizon.T, par.lo, par.hi, par.points,
                                 panels=panels)
        xlabel = par.name
    else:
        h = cfg.horizon
        if not h.is_sweep:
            raise ConfigError("sweep needs T_lo/T_hi/points or a parameter block")
        result = sweep_horizon(cfg.problem(), h.T_lo, h.T_hi, h.points, panels=panels)
        xlabel = "T"
    rows = [(p.x, p.J, p.status) for p in result.grid]
    write_csv(out / f"{stem}.csv", [xlabel, "J", "status"], rows)
    write_svg(out / f"{stem}.svg", [(result.abscissae, result.values, "J")],
              title=f"J vs {xlabel}", xlabel=xlabel, ylabel="J",
              marker=(result.argmin, result.Jmin))
    return result, xlabel


def _controller_setup(cfg: ProblemConfig, hist):
    ctrl = cfg.controller
    sys_nom = cfg.canonical_system()
    a = np.asarray(sys_nom.a)
    if ctrl.mismatch_a is not None:
        if len(ctrl.mismatch_a) != len(a):
            raise ConfigError("controller.mismatch_a must match the length of a")
        a = a * (1 + np.asarray(ctrl.mismatch_a, dtype=float) / 100.0)
    plant = canonical_to_statespace(CanonicalSystem(a, sys_nom.b * (1 + ctrl.mismatch_b / 100.0)))
    d0 = ctrl.disturbance
    if ctrl.disturbance_fraction is not None:
        d0 += ctrl.disturbance_fraction * float(np.max(np.abs(hist.u)))
    h = K = None
    kind = ctrl.type
    if kind in ("iP", "iPD", "riachy"):
        if ctrl.K_P is None:
            raise ConfigError(f"{kind} needs K_P")
        nu = 1 if kind == "iP" else 2
        h = Homeostat(nu, ctrl.alpha if ctrl.alpha is not None else sys_nom.b, ctrl.K_P,
                      ctrl.window if ctrl.window is not None else 30 * ctrl.dt, ctrl.K_D)
    elif kind == "pole-placement":
        if not ctrl.poles:
            raise ConfigError("pole-placement needs poles as [re, im] pairs")
        nominal = canonical_to_statespace(sys_nom)
        K = pole_place(nominal.F, nominal.G, [complex(re, im) for re, im in ctrl.poles])
    duration = ctrl.duration if ctrl.duration is not None else cfg.horizon.T
    sim = SimConfig(ctrl.dt, duration, plant, kind, lambda t: d0)
    return sim, h, K


def run_simulate(cfg: ProblemConfig, out: Path, stem="trace"):
    if cfg.controller is None:
        raise ConfigError("simulate needs a controller block")
    if cfg.horizon.is_sweep:
        raise ConfigError("simulate needs a fixed horizon T")
    problem = cfg.problem()
    traj = problem.solve(cfg.horizon.T)
    hist = nominal_histories(problem.system, traj, cfg.samples)
    try:
        sim, h, K = _controller_setup(cfg, hist)
    except InvalidArgumentError as exc:
        raise ConfigError(str(exc)) from exc
    trace = simulate(sim, hist, h, K)
    warmup = h.window if h is not None else 0.0
    rms = trace.rms_error(after=warmup)
    write_csv(out / f"{stem}.csv", trace.header, trace.rows())
    write_svg(out / f"{stem}.svg", [(trace.t, trace.y, "y"), (trace.t, trace.y_ref, "y*")],
              title=f"{sim.controller} tracking", xlabel="t", ylabel="y")
    return trace, rms


def run_demo(name: str, out: Path, panels=None):
    """Run a named worked example; returns the headline lines printed."""
    target = out / name
    target.mkdir(parents=True, exist_ok=True)
    lines = []
    if name == "integrator-rest":
        energy = parse_config(demos.config("integrator-min-energy"))
        J, hist, _ = run_plan(energy, target, panels, stem="min_energy_trajectory")
        lines.append(f"u_opt = {float(hist.u[0])!r} (2/T = {2 / energy.horizon.T!r}), J = {J!r}")
        rest = parse_config(demos.config("integrator-rest"))
        op = euler_lagrange(rest.lagrangian(rest.canonical_system()))
        result, _ = run_sweep(rest, target, panels)
        decreasing = bool(np.all(np.diff(result.values) < 0))
        lines.append(f"rest-to-rest Euler-Lagrange order = {op.order}, "
                     f"normalized e = {op.normalized().e.tolist()}")
        lines.append(f"J(T) strictly decreasing on [{rest.horizon.T_lo}, {rest.horizon.T_hi}]: "
                     f"{decreasing}")
    elif name == "horizon":
        cfg = parse_config(demos.config("horizon"))
        result, _ = run_sweep(cfg, target, panels)
        lines.append(f"optimal horizon T0 = {result.argmin:.4f}, J(T0) = {result.Jmin:.6g}")
    elif name == "parameter":
        base = demos.config("parameter")
        for T in demos.PARAMETER_SCAN_T:
            raw = dict(base, horizon={"T": T})
            result, _ = run_sweep(parse_config(raw), target, panels, stem=f"sweep_T{T:g}")
            lines.append(f"T = {T:g}: optimal b = {result.argmin:.4f}, J = {result.Jmin:.6g}")
    elif name == "turnpike":
        cfg = parse_config(demos.config("turnpike"))
        J, hist, _ = run_plan(cfg, target, panels)
        rep = turnpike_diagnostic(hist.trajectory, 1 / 6)
        lines.append(f"plateau = {rep.plateau_value:.6f} on [{rep.window[0]:g}, "
                     f"{rep.window[1]:g}], max deviation = {rep.max_deviation:.3e}")
    else:
        raise ConfigError(f"unknown demo {name!r}; choose from {demos.DEMOS}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flatlqr",
                                     description="Flatness-based linear quadratic trajectory design")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (FLATLQR_OUT overrides)")
    common.add_argument("--seed", type=int, help="seed for perturbation checks")
    common.add_argument("--panels", type=int, help="quadrature panel count override")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in ("plan", "sweep", "simulate"):
        p = sub.add_parser(cmd, parents=[common])
        p.add_argument("--config", required=True, help="JSON problem definition")
    p = sub.add_parser("demo", parents=[common])
    p.add_argument("name", choices=demos.DEMOS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = _out_dir(args.out)
        if args.command == "demo":
            for line in run_demo(args.name, out, args.panels):
                print(line)
            return EXIT_OK
        cfg = load_config(args.config)
        if args.command == "plan":
            J, _, report = run_plan(cfg, out, args.panels, args.seed)
            print(f"J = {J!r}")
            if report is not None:
                print(f"perturbation check: max relative directional derivative = "
                      f"{report.max_rel_directional:.3e}, min J gap = {report.min_gap:.6g}")
        elif args.command == "sweep":
            result, xlabel = run_sweep(cfg, out, args.panels)
            failed = sum(p.status != "ok" for p in result.grid)
            print(f"argmin {xlabel} = {result.argmin!r}, J = {result.Jmin!r}"
                  + (f" ({failed} grid points failed)" if failed else ""))
        else:
            _, rms = run_simulate(cfg, out)
            print(f"RMS tracking error = {rms!r}")
        return EXIT_OK
    except (ConfigError, InvalidArgumentError, DegenerateLagrangianError,
            UncontrollableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularHorizonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except SimulationDivergedError as exc:
        print(f"error: simulation diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (NumericError, SweepFailedError, FlatLQRError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
