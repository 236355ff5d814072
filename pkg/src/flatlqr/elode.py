"""General solution of a constant-coefficient linear ODE with polynomial forcing.

Basis functions are kept as complex exponential atoms ``t^k exp(lam t)`` and
projected onto their real or imaginary part at evaluation time, which makes
derivatives of any order exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Literal

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import NumericError, OutOfRangeError
from .lagrangian import EulerLagrangeOperator
from .numerics import RootSet, poly_roots, solve_linear

EXP_LIMIT = 700.0
WRONSKIAN_RCOND_MIN = 1e-14


@dataclass(frozen=True)
class Mode:
    """``Re`` or ``Im`` of ``t^power * exp(lam * t)``."""

    power: int
    lam: complex
    part: Literal["re", "im"] = "re"

    @property
    def growth(self) -> float:
        return self.lam.real

    def describe(self) -> str:
        a, w = self.lam.real, self.lam.imag
        poly = "" if self.power == 0 else ("t" if self.power == 1 else f"t^{self.power}")
        exp = "" if a == 0 else f"exp({a:.6g} t)"
        trig = "" if w == 0 else f"{'cos' if self.part == 're' else 'sin'}({w:.6g} t)"
        return "*".join(s for s in (poly, exp, trig) if s) or "1"


@dataclass(frozen=True)
class ModeBasis:
    modes: tuple
    roots: RootSet

    def __len__(self) -> int:
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    def __getitem__(self, j) -> Mode:
        return self.modes[j]


def mode_basis(op: EulerLagrangeOperator) -> ModeBasis:
    """Real fundamental system of the homogeneous equation.

    Ordered by real part, then frequency, then power; cosine before sine.
    """
    roots = poly_roots(op.characteristic())
    modes = []
    for lam, m in roots.roots:
        if lam.imag < 0:
            continue
        for k in range(m):
            if lam.imag == 0:
                modes.append(Mode(k, complex(lam.real, 0.0), "re"))
            else:
                modes.append(Mode(k, lam, "re"))
                modes.append(Mode(k, lam, "im"))
    modes.sort(key=lambda md: (md.lam.real, md.lam.imag, md.power, md.part != "re"))
    basis = ModeBasis(tuple(modes), roots)
    if len(basis) != op.order:
        raise NumericError("mode count does not match operator order")
    W0 = wronskian(basis, 0.0)
    sv = np.linalg.svd(W0, compute_uv=False)
    if sv[-1] < WRONSKIAN_RCOND_MIN * sv[0]:
        raise NumericError("mode basis is numerically dependent at t=0")
    return basis


def _atom_derivative(mode: Mode, d: int, t, shift: float = 0.0):
    t = np.asarray(t, dtype=float)
    lam = mode.lam
    expo = lam.real * t - shift
    if np.any(np.abs(expo) > EXP_LIMIT):
        raise OutOfRangeError(
            f"exponent {float(np.max(np.abs(expo))):.1f} exceeds {EXP_LIMIT} for mode {mode.describe()}")
    k = mode.power
    acc = np.zeros(np.shape(t), dtype=complex)
    for i in range(min(d, k) + 1):
        coef = comb(d, i) * factorial(k) // factorial(k - i)
        acc = acc + coef * t ** (k - i) * lam ** (d - i)
    val = acc * np.exp(expo + 1j * lam.imag * t)
    return val.real if mode.part == "re" else val.imag


def eval_basis(basis: ModeBasis, j: int, d: int, t, shift: float = 0.0):
    """``d``-th derivative of basis function ``j`` at ``t`` (scalar or array).

    ``shift`` multiplies the function by ``exp(-shift)`` inside the exponent,
    which keeps long-horizon evaluations finite.
    """
    if d < 0:
        raise ValueError("derivative order must be >= 0")
    out = _atom_derivative(basis[j], d, t, shift)
    return float(out) if np.ndim(out) == 0 else out


def basis_matrix(basis: ModeBasis, d: int, t, shifts=None) -> np.ndarray:
    """Array of shape ``(len(t), N)`` with ``sigma_j^(d)(t_i) * exp(-shift_j)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    shifts = np.zeros(len(basis)) if shifts is None else shifts
    return np.column_stack([_atom_derivative(m, d, t, s) for m, s in zip(basis, shifts)])


def wronskian(basis: ModeBasis, t: float) -> np.ndarray:
    return np.vstack([basis_matrix(basis, i, t)[0] for i in range(len(basis))])


def particular_solution(op: EulerLagrangeOperator) -> np.ndarray:
    """Polynomial particular solution by undetermined coefficients.

    Its degree is ``deg(forcing) + m0`` where ``m0`` is the multiplicity of the
    characteristic root 0 (the number of leading zero coefficients).
    """
    f = npoly.polytrim(op.forcing, 0.0)
    if f.size == 1 and f[0] == 0.0:
        return np.zeros(1)
    q = f.size - 1
    m0 = int(np.argmax(op.e != 0.0))
    A = np.zeros((q + 1, q + 1))
    for col, j in enumerate(range(m0, m0 + q + 1)):
        tj = np.zeros(j + 1)
        tj[j] = 1.0
        image = op.apply_poly(tj)
        A[:, col] = image[: q + 1] if image.size >= q + 1 else np.pad(image, (0, q + 1 - image.size))
    coef, _ = solve_linear(A, f)
    p = np.zeros(m0 + q + 1)
    p[m0:] = coef
    resid = op.apply_poly(p)
    resid[: f.size] -= f
    if np.max(np.abs(resid)) > 1e-10 * max(1.0, np.max(np.abs(f))):
        raise NumericError("particular solution failed its residual check")
    return p


@dataclass(frozen=True)
class GeneralSolution:
    operator: EulerLagrangeOperator
    basis: ModeBasis
    particular: np.ndarray

    @property
    def order(self) -> int:
        return len(self.basis)

    def particular_derivative(self, d: int, t):
        p = npoly.polyder(self.particular, d) if d else self.particular
        if p.size == 0:
            return np.zeros(np.shape(t))
        return npoly.polyval(np.asarray(t, dtype=float), p)


def general_solution(op: EulerLagrangeOperator) -> GeneralSolution:
    return GeneralSolution(op, mode_basis(op), particular_solution(op))
