"""Quadratic cost functions in flat-output coordinates and their Euler-Lagrange operators.

A cost is written as ``L(v) = v^T Q v + l^T v + c0`` where
``v = (y, y', ..., y^(mu))``. For such a cost the Euler-Lagrange equation is
the linear constant-coefficient ODE

    sum_k e_k y^(k) = forcing,   e_k = 2 sum_{i+j=k} (-1)^i Q_ij,
                                 forcing = -sum_i (-1)^i d^i/dt^i l_i = -l_0

(the linear part is constant, so only ``l_0`` survives).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DegenerateLagrangianError, InvalidArgumentError
from .numerics import Polynomial
from .system import CanonicalSystem


@dataclass(frozen=True)
class QuadraticLagrangian:
    Q: np.ndarray
    l: np.ndarray
    c0: float = 0.0

    def __post_init__(self):
        Q = np.atleast_2d(np.asarray(self.Q, dtype=float))
        l = np.asarray(self.l, dtype=float).ravel()
        if Q.shape[0] != Q.shape[1] or l.shape[0] != Q.shape[0]:
            raise InvalidArgumentError("Q must be square and match the linear part")
        if not np.allclose(Q, Q.T, rtol=1e-12, atol=0.0):
            raise InvalidArgumentError("Q must be symmetric")
        object.__setattr__(self, "Q", 0.5 * (Q + Q.T))
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "c0", float(self.c0))

    @property
    def mu(self) -> int:
        """Highest derivative order the cost is written over."""
        return self.Q.shape[0] - 1

    def __call__(self, v):
        """Evaluate on a derivative vector, or on ``(mu+1, k)`` samples."""
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.mu + 1:
            raise InvalidArgumentError(f"expected {self.mu + 1} derivatives")
        quad = np.einsum("i...,ij,j...->...", v, self.Q, v)
        return quad + np.tensordot(self.l, v, axes=(0, 0)) + self.c0

    def scaled(self, c: float) -> "QuadraticLagrangian":
        return QuadraticLagrangian(c * self.Q, c * self.l, c * self.c0)

    def bilinear(self, v, w):
        """Directional derivative of the cost at ``v`` along ``w``."""
        v = np.asarray(v, dtype=float)
        w = np.asarray(w, dtype=float)
        return (2.0 * np.einsum("i...,ij,j...->...", w, self.Q, v)
                + np.tensordot(self.l, w, axes=(0, 0)))


def from_state_cost(sys: CanonicalSystem, Qx, r: float,
                    x_offset: Optional[Sequence[float]] = None,
                    u_offset: float = 0.0) -> QuadraticLagrangian:
    """Pull ``(x - x_off)^T Qx (x - x_off) + r (u - u_off)^2`` back to the flat output."""
    n = sys.n
    Qx = np.atleast_2d(np.asarray(Qx, dtype=float))
    if Qx.shape != (n, n):
        raise InvalidArgumentError(f"Qx must be {n}x{n}, got {Qx.shape}")
    if r < 0:
        raise InvalidArgumentError("input weight r must be >= 0")
    xo = np.zeros(n) if x_offset is None else np.asarray(x_offset, dtype=float)
    if xo.shape != (n,):
        raise InvalidArgumentError(f"x_offset must have length {n}")

    w = sys.input_weights()
    Q = np.zeros((n + 1, n + 1))
    Q[:n, :n] = Qx
    Q += r * np.outer(w, w)
    l = np.zeros(n + 1)
    l[:n] = -(Qx + Qx.T) @ xo
    l += -2.0 * r * u_offset * w
    c0 = float(xo @ Qx @ xo + r * u_offset**2)
    return QuadraticLagrangian(Q, l, c0)


def from_flat_terms(terms: Iterable[Sequence[float]]) -> QuadraticLagrangian:
    """Build ``sum weight * (y^(order) - offset)^2`` from ``(order, weight, offset)`` triples."""
    terms = [(int(o), float(w), float(off)) for o, w, off in terms]
    for o, w, _ in terms:
        if o < 0 or w < 0:
            raise InvalidArgumentError("orders and weights must be non-negative")
    mu = max((o for o, _, _ in terms), default=0)
    Q = np.zeros((mu + 1, mu + 1))
    l = np.zeros(mu + 1)
    c0 = 0.0
    for o, w, off in terms:
        Q[o, o] += w
        l[o] -= 2.0 * w * off
        c0 += w * off * off
    return QuadraticLagrangian(Q, l, c0)


@dataclass(frozen=True)
class EulerLagrangeOperator:
    """``sum_k e[k] y^(k) = forcing(t)``, forcing given by ascending coefficients."""

    e: np.ndarray
    forcing: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.e, dtype=float).ravel()
        if e.size < 2 or e[-1] == 0.0:
            raise DegenerateLagrangianError("operator needs order >= 1 and e_N != 0")
        f = np.atleast_1d(np.asarray(self.forcing, dtype=float)).ravel()
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "forcing", f if f.size else np.zeros(1))

    @property
    def order(self) -> int:
        return self.e.size - 1

    def characteristic(self) -> Polynomial:
        return Polynomial(self.e)

    def normalized(self) -> "EulerLagrangeOperator":
        """Same equation with unit top coefficient."""
        return EulerLagrangeOperator(self.e / self.e[-1], self.forcing / self.e[-1])

    def apply_poly(self, p) -> np.ndarray:
        """Apply the operator to a polynomial in t (ascending coefficients)."""
        p = np.atleast_1d(np.asarray(p, dtype=float))
        out = np.zeros(max(p.size, 1))
        d = p.copy()
        for ek in self.e:
            if d.size == 0:
                break
            out[: d.size] += ek * d
            d = np.polynomial.polynomial.polyder(d) if d.size > 1 else np.zeros(0)
        return out


def euler_lagrange(L: QuadraticLagrangian) -> EulerLagrangeOperator:
    """Euler-Lagrange operator of a quadratic cost.

    Raises DegenerateLagrangianError when the top coefficient cancels (the
    highest derivative carries no weight).
    """
    mu = L.mu
    Q = L.Q
    e = np.zeros(2 * mu + 1)
    for k in range(2 * mu + 1):
        acc = 0.0
        for i in range(max(0, k - mu), k // 2 + 1):
            j = k - i
            if i == j:
                acc += (-1) ** i * Q[i, i]
            else:
                # (-1)^i + (-1)^j is exactly 0 for odd k: parity cancellation
                acc += ((-1) ** i + (-1) ** j) * Q[i, j]
        e[k] = 2.0 * acc
    if e[-1] == 0.0:
        raise DegenerateLagrangianError(
            f"top Euler-Lagrange coefficient vanishes (no weight on y^({mu}))")
    return EulerLagrangeOperator(e, np.array([-L.l[0]]))
