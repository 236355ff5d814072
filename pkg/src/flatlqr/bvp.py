"""Two-point boundary value problems for the Euler-Lagrange trajectory."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .elode import GeneralSolution, ModeBasis, basis_matrix, general_solution
from .errors import InvalidArgumentError, SingularHorizonError, SingularSystemError
from .lagrangian import EulerLagrangeOperator
from .numerics import RCOND_THRESHOLD, solve_linear
from .system import CanonicalSystem, flat_state_map


@dataclass(frozen=True)
class BoundarySpec:
    """Derivative values imposed at ``t = 0`` and ``t = T``, as ``(order, value)`` pairs."""

    initial: tuple
    final: tuple

    def __init__(self, initial: Sequence[Sequence[float]], final: Sequence[Sequence[float]]):
        ini = tuple(sorted(((int(d), float(v)) for d, v in initial), key=lambda p: p[0]))
        fin = tuple(sorted(((int(d), float(v)) for d, v in final), key=lambda p: p[0]))
        for side in (ini, fin):
            orders = [d for d, _ in side]
            if len(set(orders)) != len(orders):
                raise InvalidArgumentError("derivative orders must be distinct at each endpoint")
            if any(d < 0 for d in orders):
                raise InvalidArgumentError("derivative orders must be >= 0")
        object.__setattr__(self, "initial", ini)
        object.__setattr__(self, "final", fin)

    def __len__(self) -> int:
        return len(self.initial) + len(self.final)

    def conditions(self, T: float):
        """``(order, value, time)`` in row order."""
        return [(d, v, 0.0) for d, v in self.initial] + [(d, v, T) for d, v in self.final]

    @property
    def max_order(self) -> int:
        return max((d for d, _ in self.initial + self.final), default=0)


def _shifts(basis: ModeBasis, T: float, scaled: bool) -> np.ndarray:
    if not scaled:
        return np.zeros(len(basis))
    return np.array([max(0.0, m.growth) * T for m in basis])


def assemble_boundary_matrix(basis: ModeBasis, spec: BoundarySpec, T: float,
                             shifts=None) -> np.ndarray:
    if not T > 0:
        raise InvalidArgumentError("horizon T must be positive")
    if len(spec) != len(basis):
        raise InvalidArgumentError(
            f"{len(spec)} boundary conditions for an order-{len(basis)} equation")
    return np.vstack([basis_matrix(basis, d, t, shifts)[0] for d, _, t in spec.conditions(T)])


@dataclass(frozen=True)
class TrajectorySolution:
    """Solved flat-output trajectory ``y = sum_j c_j sigma_j + y_p`` on ``[0, T]``.

    Coefficients are held against the scaled basis ``sigma_j * exp(-shift_j)``;
    :attr:`c` reports them in the plain convention.
    """

    solution: GeneralSolution
    T: float
    rcond: float
    scaled_coeffs: np.ndarray
    shifts: np.ndarray = field(repr=False)

    @property
    def c(self) -> np.ndarray:
        return self.scaled_coeffs * np.exp(-self.shifts)

    @property
    def order(self) -> int:
        return self.solution.order

    def derivative(self, d: int, t):
        tt = np.atleast_1d(np.asarray(t, dtype=float))
        val = basis_matrix(self.solution.basis, d, tt, self.shifts) @ self.scaled_coeffs
        val = val + self.solution.particular_derivative(d, tt)
        return float(val[0]) if np.ndim(t) == 0 else val

    def __call__(self, t):
        return self.derivative(0, t)

    def derivatives(self, t, upto: int) -> np.ndarray:
        """Array ``(upto+1, len(t))`` of ``y, y', ..., y^(upto)``."""
        tt = np.atleast_1d(np.asarray(t, dtype=float))
        return np.vstack([self.derivative(d, tt) for d in range(upto + 1)])

    def boundary_residuals(self, spec: BoundarySpec) -> np.ndarray:
        return np.array([self.derivative(d, t) - v for d, v, t in spec.conditions(self.T)])


def solve_bvp(op: Union[EulerLagrangeOperator, GeneralSolution], spec: BoundarySpec,
              T: float, scaled: bool = True,
              threshold: float = RCOND_THRESHOLD) -> TrajectorySolution:
    """Solve ``W(T) c = boundary values - particular contributions``.

    Raises SingularHorizonError when ``W(T)`` is numerically singular, which
    can only happen at isolated horizons.
    """
    gs = op if isinstance(op, GeneralSolution) else general_solution(op)
    shifts = _shifts(gs.basis, T, scaled)
    W = assemble_boundary_matrix(gs.basis, spec, T, shifts)
    rhs = np.array([v - gs.particular_derivative(d, t) for d, v, t in spec.conditions(T)],
                   dtype=float)
    try:
        c, rcond = solve_linear(W, rhs, threshold)
    except SingularSystemError as exc:
        raise SingularHorizonError(T, exc.rcond) from exc
    return TrajectorySolution(gs, float(T), rcond, c, shifts)


@dataclass(frozen=True)
class NominalHistories:
    """Sampled reference: flat-output derivatives, states and input on a uniform grid."""

    system: CanonicalSystem
    trajectory: TrajectorySolution
    t: np.ndarray
    yder: np.ndarray
    x: np.ndarray
    u: np.ndarray

    @property
    def header(self) -> list[str]:
        n = self.system.n
        yd = ["y"] + [f"y_d{k}" for k in range(1, n + 1)]
        return ["t"] + yd + [f"x{i}" for i in range(1, n + 1)] + ["u"]

    def rows(self) -> np.ndarray:
        return np.column_stack([self.t, self.yder.T, self.x.T, self.u])

    def at(self, t):
        """Exact ``(yder, x, u)`` at arbitrary times."""
        yder = self.trajectory.derivatives(t, self.system.n)
        x, u = flat_state_map(self.system, yder)
        return yder, x, u


def nominal_histories(sys: CanonicalSystem, traj: TrajectorySolution,
                      samples: int = 201) -> NominalHistories:
    if samples < 2:
        raise InvalidArgumentError("need at least two samples")
    t = np.linspace(0.0, traj.T, samples)
    yder = traj.derivatives(t, sys.n)
    x, u = flat_state_map(sys, yder)
    return NominalHistories(sys, traj, t, yder, x, u)
