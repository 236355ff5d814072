"""Cost evaluation, horizon and parameter sweeps, and the turnpike diagnostic."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .bvp import BoundarySpec, TrajectorySolution, solve_bvp
from .elode import GeneralSolution, general_solution
from .errors import (FlatLQRError, InvalidArgumentError, SingularHorizonError,
                     SweepFailedError)
from .lagrangian import QuadraticLagrangian, euler_lagrange
from .numerics import golden_section, integrate_converged
from .system import CanonicalSystem

QUAD_TOL = 1e-9
REFINE_TOL = 1e-4


def default_panels(T: float) -> int:
    return max(16, int(math.ceil(4 * T)))


@dataclass(frozen=True)
class Problem:
    """A plant, a cost in flat-output coordinates and the boundary data."""

    system: Optional[CanonicalSystem]
    lagrangian: QuadraticLagrangian
    boundary: BoundarySpec

    def general_solution(self) -> GeneralSolution:
        return general_solution(euler_lagrange(self.lagrangian))

    def solve(self, T: float, gs: Optional[GeneralSolution] = None) -> TrajectorySolution:
        return solve_bvp(gs or self.general_solution(), self.boundary, T)

    def cost(self, T: float, gs: Optional[GeneralSolution] = None,
             panels: Optional[int] = None) -> float:
        return eval_criterion(self.lagrangian, self.solve(T, gs), panels)


def eval_criterion(L: QuadraticLagrangian, traj: TrajectorySolution,
                   panels: Optional[int] = None, tol: float = QUAD_TOL) -> float:
    """``J = int_0^T L(y, y', ...) dt`` for a solved trajectory."""
    panels = panels or default_panels(traj.T)
    return integrate_converged(lambda t: L(traj.derivatives(t, L.mu)), traj.T, panels, tol)


@dataclass(frozen=True)
class SweepPoint:
    x: float
    J: float
    status: str  # "ok", "singular" or "failed"


@dataclass(frozen=True)
class SweepResult:
    grid: tuple
    argmin: float
    Jmin: float

    @property
    def abscissae(self) -> np.ndarray:
        return np.array([p.x for p in self.grid])

    @property
    def values(self) -> np.ndarray:
        return np.array([p.J for p in self.grid])


def _evaluate(fn, x):
    try:
        return SweepPoint(float(x), float(fn(x)), "ok")
    except SingularHorizonError:
        return SweepPoint(float(x), math.nan, "singular")
    except FlatLQRError:
        return SweepPoint(float(x), math.nan, "failed")


def _sweep(fn: Callable[[float], float], grid: np.ndarray, workers: int = 1,
           refine_tol: float = REFINE_TOL) -> SweepResult:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(lambda x: _evaluate(fn, x), grid))
    else:
        points = [_evaluate(fn, x) for x in grid]
    ok = [i for i, p in enumerate(points) if p.status == "ok"]
    if not ok:
        raise SweepFailedError("every grid point failed")
    best = min(ok, key=lambda i: points[i].J)
    argmin, Jmin = points[best].x, points[best].J
    lo, hi = points[max(best - 1, 0)].x, points[min(best + 1, len(points) - 1)].x
    if hi > lo:
        def safe(x):
            p = _evaluate(fn, x)
            return p.J if p.status == "ok" else math.inf
        x, fx = golden_section(safe, lo, hi, refine_tol)
        if fx <= Jmin:
            argmin, Jmin = x, fx
    return SweepResult(tuple(points), float(argmin), float(Jmin))


def sweep_horizon(problem: Problem, T_lo: float, T_hi: float, points: int,
                  workers: int = 1, panels: Optional[int] = None) -> SweepResult:
    """``J(T)`` on a uniform grid, minimum refined by golden-section search."""
    if not 0 < T_lo < T_hi:
        raise InvalidArgumentError("need 0 < T_lo < T_hi")
    if points < 3:
        raise InvalidArgumentError("need at least 3 grid points")
    gs = problem.general_solution()
    return _sweep(lambda T: problem.cost(T, gs, panels), np.linspace(T_lo, T_hi, points),
                  workers)


def sweep_parameter(family: Callable[[float], Problem], T: float, p_lo: float,
                    p_hi: float, points: int, workers: int = 1,
                    panels: Optional[int] = None) -> SweepResult:
    """``J`` at fixed horizon as a function of a scalar plant or cost parameter."""
    if not p_lo < p_hi:
        raise InvalidArgumentError("need p_lo < p_hi")
    if points < 1:
        raise InvalidArgumentError("need at least one grid point")
    return _sweep(lambda p: family(p).cost(T, panels=panels),
                  np.linspace(p_lo, p_hi, points), workers)


@dataclass(frozen=True)
class TurnpikeReport:
    plateau_value: float
    window: tuple
    max_deviation: float


def turnpike_diagnostic(traj: TrajectorySolution, margin_fraction: float,
                        samples: int = 1000) -> TurnpikeReport:
    if not 0 < margin_fraction < 0.5:
        raise InvalidArgumentError("margin_fraction must lie in (0, 0.5)")
    lo, hi = margin_fraction * traj.T, (1 - margin_fraction) * traj.T
    y = traj(np.linspace(lo, hi, samples))
    plateau = float(np.median(y))
    return TurnpikeReport(plateau, (lo, hi), float(np.max(np.abs(y - plateau))))


@dataclass(frozen=True)
class PerturbationReport:
    J: float
    max_rel_directional: float
    min_second_difference: float
    min_gap: float
    trials: int


def _bump(T: float, vanish: int, rng: np.random.Generator, upto: int):
    # (s(1-s))^vanish * q(s) with s = t/T: derivatives below `vanish` are 0 at both ends
    s_poly = npoly.polypow([0.0, 1.0, -1.0], vanish)
    p = npoly.polymul(s_poly, rng.standard_normal(4))
    grid = np.linspace(0, 1, 401)
    p = p / np.max(np.abs(npoly.polyval(grid, p)))
    derivs = [p] + [npoly.polyder(p, d) / T**d for d in range(1, upto + 1)]
    return lambda t: np.vstack([npoly.polyval(np.asarray(t) / T, q) for q in derivs])


def perturbation_check(L: QuadraticLagrangian, traj: TrajectorySolution,
                       spec: BoundarySpec, trials: int = 200, seed: int = 0,
                       eps: float = 1e-3, panels: Optional[int] = None) -> PerturbationReport:
    """Probe stationarity and minimality of a solved trajectory.

    Each trial adds a random polynomial bump that vanishes, with its
    derivatives below ``max(mu, highest imposed order + 1)``, at both ends.
    Bumps are normalised to ``max(1, max|y|)`` in sup norm. The directional
    derivative is a centred difference of the quadrature of ``J``.
    """
    T = traj.T
    panels = panels or 2 * default_panels(T)
    mu = L.mu
    vanish = max(mu, spec.max_order + 1)
    rng = np.random.default_rng(seed)
    ystar = lambda t: traj.derivatives(t, mu)
    scale = max(1.0, float(np.max(np.abs(traj(np.linspace(0, T, 401))))))
    J0 = integrate_converged(lambda t: L(ystar(t)), T, panels)

    def J_along(phi, e):
        return integrate_converged(lambda t: L(ystar(t) + e * scale * phi(t)), T, panels)

    worst_d, worst_dd, worst_gap = 0.0, math.inf, math.inf
    for _ in range(trials):
        phi = _bump(T, vanish, rng, mu)
        jp, jm = J_along(phi, eps), J_along(phi, -eps)
        worst_d = max(worst_d, abs(jp - jm) / (2 * eps) / max(abs(J0), 1e-300))
        worst_dd = min(worst_dd, jp + jm - 2 * J0)
        worst_gap = min(worst_gap, J_along(phi, 1.0) - J0)
    return PerturbationReport(J0, worst_d, worst_dd, worst_gap, trials)
