"""Numerical kernels: polynomial roots, conditioned solves, quadrature, eigenvalues.

Everything here is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import legendre
from numpy.polynomial import polynomial as npoly

from .errors import InvalidArgumentError, NumericError, SingularSystemError

RCOND_THRESHOLD = 1e-12
GAUSS_ORDER = 10
ROOT_RESIDUAL_TOL = 1e-6

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with coefficients in ascending powers of ``s``.

    Trailing (highest-power) zeros are stripped on construction, so the
    leading coefficient is always nonzero.
    """

    coeffs: tuple

    def __init__(self, coeffs: Sequence[float]):
        c = [float(v) for v in coeffs]
        while c and c[-1] == 0.0:
            c.pop()
        if not c:
            raise InvalidArgumentError("zero polynomial has no degree")
        if not all(np.isfinite(c)):
            raise InvalidArgumentError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, s):
        return npoly.polyval(s, self.coeffs)

    def deriv(self, m: int = 1) -> np.ndarray:
        return npoly.polyder(self.coeffs, m)


@dataclass(frozen=True)
class RootSet:
    """Distinct roots with multiplicities, conjugate-closed."""

    roots: tuple  # of (complex, int)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)

    def values(self) -> list[complex]:
        """Roots repeated according to multiplicity."""
        out = []
        for r, m in self.roots:
            out.extend([r] * m)
        return out


def _companion(c: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    A = np.zeros((n, n))
    if n > 1:
        A[1:, :-1] = np.eye(n - 1)
    A[:, -1] = -c[:-1] / c[-1]
    return A


def _merge_allowance(m: int, tol: float, scale: float) -> float:
    # An m-fold root is split by roughly eps**(1/m) under eigenvalue perturbation.
    if m < 2:
        return tol
    return max(tol, 10.0 * _EPS ** (1.0 / m) * scale)


def _cluster(values: list[complex], tol: float, scale: float) -> list[list[complex]]:
    # Greedy: each seed takes the largest group of its nearest neighbours whose
    # diameter fits the allowance for that group size.
    remaining = sorted(values, key=lambda z: (z.real, z.imag))
    clusters = []
    while remaining:
        seed = remaining[0]
        order = sorted(range(len(remaining)), key=lambda i: abs(remaining[i] - seed))
        chosen = [0]
        for k in range(len(remaining), 1, -1):
            group = [remaining[i] for i in order[:k]]
            diam = max(abs(a - b) for a in group for b in group)
            if diam <= _merge_allowance(k, tol, scale):
                chosen = order[:k]
                break
        clusters.append([remaining[i] for i in chosen])
        remaining = [z for i, z in enumerate(remaining) if i not in set(chosen)]
    return clusters


def poly_roots(p: Polynomial | Sequence[float], cluster_tol: float | None = None) -> RootSet:
    """Roots of a real polynomial via companion-matrix eigenvalues.

    Numerically split multiple roots are merged: roots closer than
    ``cluster_tol`` merge, and a group of ``m`` roots also merges when its
    spread is within the ``eps**(1/m)`` perturbation an m-fold root suffers.
    Exact zero low-order coefficients are factored out as an exact root at 0. The default ``cluster_tol`` is ``1e-6 * (1 + max|root|)``.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    if p.degree < 1:
        raise InvalidArgumentError("poly_roots needs degree >= 1")
    c = np.asarray(p.coeffs)
    zero_mult = int(np.argmax(c != 0.0))
    reduced = c[zero_mult:]

    raw = list(np.linalg.eigvals(_companion(reduced))) if len(reduced) > 1 else []
    scale = 1.0 + max((abs(r) for r in raw), default=0.0)
    tol = cluster_tol if cluster_tol is not None else 1e-6 * scale

    clusters = _cluster(raw, tol, scale)
    real, upper, lower = [], [], []
    for members in clusters:
        centre = complex(np.mean(members))
        m = len(members)
        if abs(centre.imag) <= _merge_allowance(max(m, 2), tol, scale):
            real.append((complex(centre.real, 0.0), m))
        elif centre.imag > 0:
            upper.append((centre, m))
        else:
            lower.append((centre, m))

    paired = []
    for z, m in upper:
        if not lower:
            raise NumericError("complex root without conjugate partner")
        k = min(range(len(lower)), key=lambda i: abs(lower[i][0] - z.conjugate()))
        w, mw = lower.pop(k)
        if mw != m:
            raise NumericError("conjugate roots with unequal multiplicity")
        avg = 0.5 * (z + w.conjugate())
        paired.append((avg, m))
        paired.append((avg.conjugate(), m))
    if lower:
        raise NumericError("complex root without conjugate partner")

    roots = real + paired
    if zero_mult:
        roots.append((0j, zero_mult))
    # merge an exact zero root with a numerically found one near zero
    roots = _combine_duplicates(roots, tol)
    roots.sort(key=lambda rm: (rm[0].real, rm[0].imag))

    for r, _ in roots:
        powers = np.abs(r) ** np.arange(len(c))
        denom = float(np.sum(np.abs(c) * powers))
        if denom > 0 and abs(p(r)) > ROOT_RESIDUAL_TOL * denom:
            raise NumericError(f"root {r} failed residual check")
    return RootSet(tuple(roots))


def _combine_duplicates(roots, tol):
    out: list[tuple[complex, int]] = []
    for r, m in roots:
        for i, (q, mq) in enumerate(out):
            if abs(q - r) <= tol:
                out[i] = ((q * mq + r * m) / (mq + m), mq + m)
                break
        else:
            out.append((r, m))
    return out


def solve_linear(A, b, threshold: float = RCOND_THRESHOLD) -> tuple[np.ndarray, float]:
    """Solve ``A x = b`` and report the reciprocal 2-norm condition number.

    Raises SingularSystemError when ``rcond < threshold``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {A.shape}")
    if b.shape[0] != A.shape[0]:
        raise InvalidArgumentError("right-hand side length does not match matrix")
    if not np.all(np.isfinite(A)) or not np.all(np.isfinite(b)):
        raise NumericError("non-finite entries in linear system")
    sv = np.linalg.svd(A, compute_uv=False)
    rcond = float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0
    if rcond < threshold:
        raise SingularSystemError("linear system is singular", rcond)
    return np.linalg.solve(A, b), rcond


@lru_cache(maxsize=None)
def _gauss_rule(order: int):
    return legendre.leggauss(order)


def integrate(f: Callable[[np.ndarray], np.ndarray], T: float, panels: int = 16,
              order: int = GAUSS_ORDER) -> float:
    """Composite Gauss-Legendre quadrature of ``f`` over ``[0, T]``.

    ``f`` is called once with the array of all quadrature nodes.
    """
    if not T > 0:
        raise InvalidArgumentError("integration interval must have T > 0")
    if panels < 1:
        raise InvalidArgumentError("panels must be positive")
    x, w = _gauss_rule(order)
    h = T / panels
    left = np.arange(panels) * h
    nodes = (left[:, None] + 0.5 * h * (x + 1.0)[None, :]).ravel()
    vals = np.asarray(f(nodes), dtype=float)
    if vals.shape != nodes.shape:
        vals = np.broadcast_to(vals, nodes.shape)
    if not np.all(np.isfinite(vals)):
        raise NumericError("integrand produced a non-finite sample")
    return float(0.5 * h * np.sum(vals.reshape(panels, order) * w[None, :]))


def integrate_converged(f, T: float, panels: int = 16, tol: float = 1e-9) -> float:
    """Quadrature with a panel-doubling convergence check.

    Returns the finer estimate; raises NumericError if the two estimates
    differ by more than ``tol * max(1, |I|)``.
    """
    coarse = integrate(f, T, panels)
    fine = integrate(f, T, 2 * panels)
    if abs(fine - coarse) > tol * max(1.0, abs(fine)):
        raise NumericError(
            f"quadrature not converged: {coarse!r} vs {fine!r} at {panels} panels")
    return fine


def eig_real(A) -> list[complex]:
    """Eigenvalues of a real square matrix, sorted by real then imaginary part."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {A.shape}")
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigenvalue iteration failed: {exc}") from exc
    ev = np.asarray(ev, dtype=complex)
    order = np.lexsort((ev.imag, ev.real))
    return [complex(v) for v in ev[order]]


_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_section(f: Callable[[float], float], a: float, b: float,
                   tol: float = 1e-4) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``.

    Stops once the bracket is shorter than ``tol``.
    """
    a, b = min(a, b), max(a, b)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)
