"""JSON problem definitions for the command-line tool."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .bvp import BoundarySpec
from .criterion import Problem
from .errors import ConfigError, FlatLQRError
from .lagrangian import QuadraticLagrangian, from_flat_terms, from_state_cost
from .system import CanonicalSystem


@dataclass
class SystemConfig:
    a: list
    b: float


@dataclass
class CostConfig:
    """Either a state/input cost or a list of flat-output terms."""

    Qx: Optional[list] = None
    r: Optional[float] = None
    x_offset: Optional[list] = None
    u_offset: float = 0.0
    flat_terms: Optional[list] = None


@dataclass
class HorizonConfig:
    T: Optional[float] = None
    T_lo: Optional[float] = None
    T_hi: Optional[float] = None
    points: Optional[int] = None

    @property
    def is_sweep(self) -> bool:
        return self.T is None


@dataclass
class Binding:
    """``a[index] = offset + scale * p``."""

    index: int
    offset: float = 0.0
    scale: float = 1.0


@dataclass
class ParameterConfig:
    name: str
    lo: float
    hi: float
    points: int
    bindings: list = field(default_factory=list)


@dataclass
class ControllerConfig:
    type: str = "open-loop"
    dt: float = 1e-3
    duration: Optional[float] = None
    K_P: Optional[float] = None
    K_D: float = 0.0
    alpha: Optional[float] = None
    window: Optional[float] = None
    poles: Optional[list] = None
    mismatch_a: Optional[list] = None
    mismatch_b: float = 0.0
    disturbance: float = 0.0
    disturbance_fraction: Optional[float] = None


@dataclass
class ProblemConfig:
    system: SystemConfig
    cost: CostConfig
    boundary: dict
    horizon: HorizonConfig
    parameter: Optional[ParameterConfig] = None
    controller: Optional[ControllerConfig] = None
    samples: int = 201

    def to_dict(self) -> dict:
        return _drop_none(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def canonical_system(self, a=None) -> CanonicalSystem:
        return CanonicalSystem(self.system.a if a is None else a, self.system.b)

    def lagrangian(self, sys: CanonicalSystem) -> QuadraticLagrangian:
        c = self.cost
        if c.flat_terms is not None:
            return from_flat_terms(c.flat_terms)
        return from_state_cost(sys, c.Qx, c.r, c.x_offset, c.u_offset)

    def boundary_spec(self) -> BoundarySpec:
        return BoundarySpec(self.boundary["initial"], self.boundary["final"])

    def problem(self) -> Problem:
        sys = self.canonical_system()
        return Problem(sys, self.lagrangian(sys), self.boundary_spec())

    def family(self):
        """Parameter -> Problem, re-binding the ``a`` coefficients."""
        par = self.parameter

        def make(p: float) -> Problem:
            a = list(self.system.a)
            for bnd in par.bindings:
                a[bnd.index] = bnd.offset + bnd.scale * p
            sys = self.canonical_system(a)
            return Problem(sys, self.lagrangian(sys), self.boundary_spec())

        return make


def _drop_none(obj):
    if isinstance(obj, dict):
        return {k: _drop_none(v) for k, v in obj.items() if v is not None}
    if isinstance(obj, list):
        return [_drop_none(v) for v in obj]
    return obj


def _build(cls, data: Any, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_config(data: dict) -> ProblemConfig:
    """Validate a decoded JSON document and build a :class:`ProblemConfig`."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - {"system", "cost", "boundary", "horizon", "parameter",
                           "controller", "samples"}
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    for key in ("system", "cost", "boundary", "horizon"):
        if key not in data:
            raise ConfigError(f"missing '{key}' block")

    system = _build(SystemConfig, data["system"], "system")
    system.a = [float(v) for v in system.a]
    system.b = float(system.b)
    n = len(system.a)

    cost = _build(CostConfig, data["cost"], "cost")
    if (cost.flat_terms is None) == (cost.Qx is None):
        raise ConfigError("cost: give exactly one of 'Qx' (with 'r') or 'flat_terms'")
    if cost.Qx is not None:
        if cost.r is None:
            raise ConfigError("cost: 'r' is required with 'Qx'")
        if np.shape(cost.Qx) != (n, n):
            raise ConfigError(f"cost: Qx must be {n}x{n}")
        if cost.x_offset is not None and len(cost.x_offset) != n:
            raise ConfigError(f"cost: x_offset must have length {n}")
    else:
        if any(len(term) != 3 for term in cost.flat_terms):
            raise ConfigError("cost: flat_terms entries are [order, weight, offset]")

    boundary = data["boundary"]
    if not isinstance(boundary, dict) or set(boundary) != {"initial", "final"}:
        raise ConfigError("boundary: needs exactly 'initial' and 'final' lists")
    boundary = {k: [[int(d), float(v)] for d, v in boundary[k]] for k in ("initial", "final")}

    horizon = _build(HorizonConfig, data["horizon"], "horizon")
    sweep_keys = (horizon.T_lo, horizon.T_hi, horizon.points)
    if horizon.T is not None and any(v is not None for v in sweep_keys):
        raise ConfigError("horizon: give either T or T_lo/T_hi/points, not both")
    if horizon.T is None and any(v is None for v in sweep_keys):
        raise ConfigError("horizon: sweep needs T_lo, T_hi and points")

    parameter = None
    if data.get("parameter") is not None:
        raw = dict(data["parameter"])
        raw["bindings"] = [_build(Binding, b, "parameter.bindings")
                           for b in raw.get("bindings", [])]
        parameter = _build(ParameterConfig, raw, "parameter")
        for b in parameter.bindings:
            if not 0 <= b.index < n:
                raise ConfigError(f"parameter: binding index {b.index} outside a[0..{n - 1}]")

    controller = None
    if data.get("controller") is not None:
        controller = _build(ControllerConfig, data["controller"], "controller")

    cfg = ProblemConfig(system, cost, boundary, horizon, parameter, controller,
                        int(data.get("samples", 201)))
    try:
        cfg.problem()
    except FlatLQRError as exc:
        raise ConfigError(f"invalid problem: {exc}") from exc
    return cfg


def load_config(path) -> ProblemConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(data)
