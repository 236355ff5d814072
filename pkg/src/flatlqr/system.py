"""Single-input plants in controllable canonical form and Kalman rank tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidArgumentError

RANK_TOL = 1e-10


@dataclass(frozen=True)
class CanonicalSystem:
    """Chain of integrators ``x1' = x2, ..., xn' = -a0 x1 - ... - a_{n-1} xn + b u``.

    ``x1`` is a flat output: every state and the input are expressed through
    ``y = x1`` and its first ``n`` derivatives.
    """

    a: tuple
    b: float

    def __init__(self, a: Sequence[float], b: float):
        a = tuple(float(v) for v in a)
        if len(a) < 1:
            raise InvalidArgumentError("canonical system needs n >= 1")
        if b == 0 or not np.isfinite(b):
            raise InvalidArgumentError("input gain b must be finite and nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", float(b))

    @property
    def n(self) -> int:
        return len(self.a)

    def input_weights(self) -> np.ndarray:
        """Row ``w`` with ``u = w . (y, y', ..., y^(n))``."""
        return np.append(np.asarray(self.a), 1.0) / self.b


@dataclass
class StateSpace:
    F: np.ndarray
    G: np.ndarray
    H: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        self.F = np.atleast_2d(np.asarray(self.F, dtype=float))
        G = np.asarray(self.G, dtype=float)
        self.G = G.reshape(-1, 1) if G.ndim == 1 else G
        n = self.F.shape[0]
        if self.F.shape != (n, n) or self.G.shape[0] != n:
            raise InvalidArgumentError("inconsistent state-space dimensions")
        if self.H is not None:
            H = np.asarray(self.H, dtype=float)
            self.H = H.reshape(1, -1) if H.ndim == 1 else H
            if self.H.shape[1] != n:
                raise InvalidArgumentError("output map width does not match state")

    @property
    def n(self) -> int:
        return self.F.shape[0]


def canonical_to_statespace(sys: CanonicalSystem) -> StateSpace:
    n = sys.n
    F = np.zeros((n, n))
    F[:-1, 1:] = np.eye(n - 1)
    F[-1, :] = -np.asarray(sys.a)
    G = np.zeros((n, 1))
    G[-1, 0] = sys.b
    H = np.zeros((1, n))
    H[0, 0] = 1.0
    return StateSpace(F, G, H)


def _numerical_rank(M: np.ndarray) -> int:
    sv = np.linalg.svd(M, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > RANK_TOL * sv[0]))


def controllability_matrix(F, G) -> np.ndarray:
    F = np.atleast_2d(np.asarray(F, dtype=float))
    G = np.asarray(G, dtype=float)
    G = G.reshape(-1, 1) if G.ndim == 1 else G
    blocks = [G]
    for _ in range(F.shape[0] - 1):
        blocks.append(F @ blocks[-1])
    return np.hstack(blocks)


def controllability_rank(F, G) -> tuple[int, bool]:
    """Rank of ``(G, FG, ..., F^{n-1} G)`` and whether it equals ``n``."""
    C = controllability_matrix(F, G)
    r = _numerical_rank(C)
    return r, r == C.shape[0]


def observability_rank(F, H) -> tuple[int, bool]:
    F = np.atleast_2d(np.asarray(F, dtype=float))
    H = np.asarray(H, dtype=float)
    H = H.reshape(1, -1) if H.ndim == 1 else H
    r, _ = controllability_rank(F.T, H.T)
    return r, r == F.shape[0]


def flat_state_map(sys: CanonicalSystem, yder):
    """State and input from ``(y, y', ..., y^(n))``.

    ``yder`` may carry a trailing sample axis: shape ``(n+1,)`` or ``(n+1, k)``.
    """
    yder = np.asarray(yder, dtype=float)
    if yder.shape[0] != sys.n + 1:
        raise InvalidArgumentError(f"need {sys.n + 1} derivatives, got {yder.shape[0]}")
    x = yder[: sys.n]
    u = np.tensordot(sys.input_weights(), yder, axes=(0, 0))
    return x, u
