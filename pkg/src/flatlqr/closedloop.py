"""Feedback around a stationary trajectory.

Two families are provided: static state feedback placing the poles of the
variational system, and model-free intelligent controllers built on the
homeostat ``d^nu(dy)/dt^nu = F + alpha du``, where ``F`` is re-estimated
online from a short window of recent data.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson

from .bvp import NominalHistories
from .errors import (InvalidArgumentError, SimulationDivergedError,
                     UncontrollableError, WarmupError)
from .system import StateSpace, controllability_matrix, controllability_rank

CONTROLLERS = ("open-loop", "pole-placement", "iP", "iPD", "riachy")
DIVERGENCE_BOUND = 1e9


def pole_place(F, G, desired) -> np.ndarray:
    """Ackermann gain ``K`` (1 x n) with ``eig(F - G K) = desired``."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    G = np.asarray(G, dtype=float).reshape(-1, 1)
    n = F.shape[0]
    desired = np.asarray(desired, dtype=complex).ravel()
    if desired.size != n:
        raise InvalidArgumentError(f"need {n} desired poles, got {desired.size}")
    scale = 1.0 + np.max(np.abs(desired))
    a = np.sort_complex(desired)
    b = np.sort_complex(desired.conj())
    if np.max(np.abs(a - b)) > 1e-12 * scale:
        raise InvalidArgumentError("desired poles must be closed under conjugation")
    if not controllability_rank(F, G)[1]:
        raise UncontrollableError("(F, G) is not controllable")
    coeffs = np.real(np.poly(desired))  # descending, monic
    phi = np.zeros_like(F)
    for c in coeffs:
        phi = phi @ F + c * np.eye(n)
    C = controllability_matrix(F, G)
    en = np.zeros(n)
    en[-1] = 1.0
    z = np.linalg.solve(C.T, en)
    return (z @ phi).reshape(1, n)


@dataclass
class Homeostat:
    """Settings and data buffer for one intelligent controller.

    The buffer holds ``(t, dy, du)`` samples on a uniform grid; ``du`` is the
    input correction applied from ``t`` onward.
    """

    nu: int
    alpha: float
    K_P: float
    window: float
    K_D: float = 0.0
    rule: str = "simpson"
    buffer: deque = field(default_factory=deque, repr=False)

    def __post_init__(self):
        if self.nu not in (1, 2):
            raise InvalidArgumentError("nu must be 1 or 2")
        if self.alpha == 0:
            raise InvalidArgumentError("alpha must be nonzero")
        if not self.window > 0:
            raise InvalidArgumentError("estimation window must be positive")
        if self.rule not in ("simpson", "trapezoid"):
            raise InvalidArgumentError(f"unknown quadrature rule {self.rule!r}")
        if self.nu == 1 and not self.K_P > 0:
            raise InvalidArgumentError("iP needs K_P > 0")
        if self.nu == 2:
            roots = np.roots([1.0, self.K_D, self.K_P])
            if not np.all(roots.real < 0):
                raise InvalidArgumentError("s^2 + K_D s + K_P must be Hurwitz")

    def push(self, t: float, dy: float, du: float) -> None:
        if self.buffer and t <= self.buffer[-1][0]:
            raise InvalidArgumentError("buffer timestamps must increase")
        self.buffer.append((float(t), float(dy), float(du)))
        # keep a little more than one window
        while len(self.buffer) > 2 and self.buffer[1][0] <= t - self.window:
            self.buffer.popleft()

    def set_last_input(self, du: float) -> None:
        t, dy, _ = self.buffer[-1]
        self.buffer[-1] = (t, dy, float(du))

    def clear(self) -> None:
        self.buffer.clear()


def _window_samples(h: Homeostat, t: float):
    if not h.buffer:
        raise WarmupError("estimator buffer is empty")
    data = np.array(h.buffer)
    start = t - h.window
    tol = 1e-9 * max(h.window, abs(t))
    data = data[data[:, 0] <= t + tol]
    if data[0, 0] > start + tol:
        raise WarmupError(f"buffer starts at {data[0, 0]:.6g}, window needs {start:.6g}")
    i = int(np.searchsorted(data[:, 0], start + tol, side="right")) - 1
    window = data[i:].copy()
    if window[0, 0] < start - tol:
        # interpolate the left edge onto t - window
        t0, t1 = window[0, 0], window[1, 0]
        w = (start - t0) / (t1 - t0)
        window[0] = (1 - w) * window[0] + w * window[1]
        window[0, 0] = start
    return window[:, 0] - start, window[:, 1], window[:, 2]


def _quad(y, x, rule):
    if rule == "trapezoid":
        return float(np.trapezoid(y, x))
    return float(simpson(y, x=x))


def f_estimate(h: Homeostat, t: float) -> float:
    """Estimate of ``F`` from the window ``[t - window, t]`` of the buffer.

    Raises WarmupError while the buffer does not yet span the window.
    """
    s, dy, du = _window_samples(h, t)
    Tw = h.window
    if h.nu == 1:
        kernel = (Tw - 2 * s) * dy + h.alpha * s * (Tw - s) * du
        return -6.0 / Tw**3 * _quad(kernel, s, h.rule)
    r = Tw - s
    kernel = (r**2 - 4 * r * s + s**2) * dy - 0.5 * h.alpha * r**2 * s**2 * du
    return 60.0 / Tw**5 * _quad(kernel, s, h.rule)


def ip_control(h: Homeostat, dy: float, F_est: float) -> float:
    return -(F_est + h.K_P * dy) / h.alpha


def ipd_control(h: Homeostat, dy: float, ddy: float, F_est: float) -> float:
    return -(F_est + h.K_P * dy + h.K_D * ddy) / h.alpha


def riachy_control(h: Homeostat, dy: float, calF_est: float) -> float:
    """iPD without a derivative estimate.

    ``calF_est`` is the nu=2 estimate computed on the augmented signal
    ``dY = dy + K_D * int dy`` (see :func:`augmented_signal`).
    """
    return -(calF_est + h.K_P * dy) / h.alpha


def augmented_signal(t, dy, K_D: float) -> np.ndarray:
    """``dy + K_D * int_0^t dy`` by the cumulative trapezoid rule."""
    t = np.asarray(t, dtype=float)
    dy = np.asarray(dy, dtype=float)
    integral = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(t) * (dy[1:] + dy[:-1]))])
    return dy + K_D * integral


@dataclass
class SimConfig:
    dt: float
    duration: float
    plant: StateSpace
    controller: str = "open-loop"
    disturbance: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.controller not in CONTROLLERS:
            raise InvalidArgumentError(f"controller must be one of {CONTROLLERS}")
        if not (self.dt > 0 and self.duration > 0):
            raise InvalidArgumentError("dt and duration must be positive")


@dataclass
class SimTrace:
    t: np.ndarray
    x: np.ndarray  # (steps+1, n)
    u: np.ndarray
    y: np.ndarray
    y_ref: np.ndarray
    u_ref: np.ndarray
    dy: np.ndarray
    F_est: np.ndarray

    @property
    def header(self) -> list[str]:
        xs = [f"x{i}" for i in range(1, self.x.shape[1] + 1)]
        return ["t"] + xs + ["u", "y", "y_ref", "u_ref", "dy", "F_est"]

    def rows(self) -> np.ndarray:
        return np.column_stack([self.t, self.x, self.u, self.y, self.y_ref,
                                self.u_ref, self.dy, self.F_est])

    def rms_error(self, after: float = 0.0) -> float:
        mask = self.t >= after
        return float(np.sqrt(np.mean(self.dy[mask] ** 2)))


# causal 5-point backward difference, newest sample last
_BACKWARD5 = np.array([3.0, -16.0, 36.0, -48.0, 25.0]) / 12.0


def simulate(cfg: SimConfig, reference: NominalHistories, h: Optional[Homeostat] = None,
             K=None, f_oracle: Optional[Callable[[float, np.ndarray], float]] = None,
             x0=None) -> SimTrace:
    """Fixed-step RK4 run of ``x' = F x + G (u* + du + d(t))``.

    ``du`` is held constant over each step. ``f_oracle(t, x)``, when given,
    replaces the estimate of ``F`` (used to check the ideal error dynamics).
    """
    plant = cfg.plant
    n = plant.n
    steps = int(round(cfg.duration / cfg.dt))
    if abs(steps * cfg.dt - cfg.duration) > 1e-9 * cfg.duration:
        raise InvalidArgumentError("dt must divide the duration")
    if cfg.duration > reference.trajectory.T * (1 + 1e-12):
        raise InvalidArgumentError("reference does not span the simulation")
    kind = cfg.controller
    if kind in ("iP", "iPD", "riachy"):
        if h is None:
            raise InvalidArgumentError(f"{kind} needs a Homeostat")
        if cfg.dt > h.window / 10:
            raise InvalidArgumentError("dt must be at most window/10")
        need = {"iP": 1, "iPD": 2, "riachy": 2}[kind]
        if h.nu != need:
            raise InvalidArgumentError(f"{kind} needs nu={need}")
        h.clear()
    if kind == "pole-placement":
        if K is None:
            raise InvalidArgumentError("pole-placement needs a gain K")
        K = np.asarray(K, dtype=float).reshape(1, n)
    H = plant.H if plant.H is not None else np.eye(1, n)
    Fp, Gp = plant.F, plant.G[:, 0]
    dist = cfg.disturbance or (lambda t: 0.0)

    half = np.linspace(0.0, steps * cfg.dt, 2 * steps + 1)
    yder_ref, x_ref, u_ref_half = reference.at(half)
    y_ref = yder_ref[0, ::2]
    ydot_ref = yder_ref[1, ::2] if yder_ref.shape[0] > 1 else np.zeros(steps + 1)
    x_ref = x_ref[:, ::2]

    x = x_ref[:, 0].copy() if x0 is None else np.asarray(x0, dtype=float).copy()
    t_log = np.arange(steps + 1) * cfg.dt
    xs = np.zeros((steps + 1, n))
    us, ys, dys, fes = (np.zeros(steps + 1) for _ in range(4))
    du_prev = 0.0
    integral = 0.0
    y_hist: deque = deque(maxlen=5)

    def rhs(t, xv, u):
        return Fp @ xv + Gp * (u + dist(t))

    for k in range(steps + 1):
        t = t_log[k]
        y = float(H[0] @ x)
        dy = y - y_ref[k]
        y_hist.append(y)
        F_est = np.nan
        du = 0.0
        if kind == "pole-placement":
            du = float(-(K @ (x - x_ref[:, k]))[0])
        elif kind in ("iP", "iPD", "riachy"):
            if kind == "riachy":
                if k > 0:
                    integral += 0.5 * cfg.dt * (dy + dys[k - 1])
                signal = dy + h.K_D * integral
            else:
                signal = dy
            h.push(t, signal, du_prev)
            try:
                F_est = f_oracle(t, x) if f_oracle is not None else f_estimate(h, t)
                ready = True
            except WarmupError:
                ready = False
            if ready:
                if kind == "iP":
                    du = ip_control(h, dy, F_est)
                elif kind == "riachy":
                    du = riachy_control(h, dy, F_est)
                elif len(y_hist) == 5:
                    ddy = float(_BACKWARD5 @ np.array(y_hist)) / cfg.dt - ydot_ref[k]
                    du = ipd_control(h, dy, ddy, F_est)
            h.set_last_input(du)
        xs[k], ys[k], dys[k], fes[k] = x, y, dy, F_est
        us[k] = u_ref_half[2 * k] + du
        du_prev = du
        if k == steps:
            break
        u0, um, u1 = u_ref_half[2 * k: 2 * k + 3] + du
        dt = cfg.dt
        k1 = rhs(t, x, u0)
        k2 = rhs(t + dt / 2, x + dt / 2 * k1, um)
        k3 = rhs(t + dt / 2, x + dt / 2 * k2, um)
        k4 = rhs(t + dt, x + dt * k3, u1)
        x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        norm = float(np.linalg.norm(x))
        if not np.isfinite(norm) or norm > DIVERGENCE_BOUND:
            raise SimulationDivergedError(t + dt, norm)
    return SimTrace(t_log, xs, us, ys, y_ref, u_ref_half[::2], dys, fes)
