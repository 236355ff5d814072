"""Built-in problem definitions for the worked examples."""

from __future__ import annotations

import copy

HORIZON = {
    "system": {"a": [2.0, 1.0], "b": 3.0},
    "cost": {"Qx": [[1.0, 0.0], [0.0, 1.0]], "r": 1.0, "x_offset": [100.0, 0.0]},
    "boundary": {"initial": [[0, 0.0], [1, 0.0]], "final": [[0, 100.0], [1, 0.0]]},
    "horizon": {"T_lo": 0.5, "T_hi": 10.0, "points": 96},
}

# T = 2 is where the scan over T in {2, 3, 5} puts the optimum near b = 6.
PARAMETER = {
    "system": {"a": [4.0, 6.0], "b": 1.0},
    "cost": {"Qx": [[100.0, 0.0], [0.0, 0.0]], "r": 1.0, "x_offset": [100.0, 0.0]},
    "boundary": {"initial": [[0, 0.0], [1, 0.0]], "final": [[0, 100.0], [1, 0.0]]},
    "horizon": {"T": 2.0},
    "parameter": {"name": "b", "lo": 0.0, "hi": 10.0, "points": 101,
                  "bindings": [{"index": 0, "offset": 10.0, "scale": -1.0},
                               {"index": 1, "offset": 0.0, "scale": 1.0}]},
}
PARAMETER_SCAN_T = (2.0, 3.0, 5.0)

INTEGRATOR_MIN_ENERGY = {
    "system": {"a": [0.0], "b": 1.0},
    "cost": {"flat_terms": [[1, 1.0, 0.0]]},
    "boundary": {"initial": [[0, 0.0]], "final": [[0, 2.0]]},
    "horizon": {"T": 1.0},
}

INTEGRATOR_REST = {
    "system": {"a": [0.0], "b": 1.0},
    "cost": {"flat_terms": [[0, 1.0, 0.0], [1, 1.0, 0.0], [2, 1.0, 0.0]]},
    "boundary": {"initial": [[0, 0.0], [1, 0.0]], "final": [[0, 2.0], [1, 0.0]]},
    "horizon": {"T_lo": 0.5, "T_hi": 5.0, "points": 46},
}

# y(T) = 3 is the end value compatible with the interior plateau at 1.
TURNPIKE = {
    "system": {"a": [0.0, 0.0], "b": 1.0},
    "cost": {"flat_terms": [[1, 1.0, 0.0], [2, 1.0, 0.0]]},
    "boundary": {"initial": [[0, 0.0], [1, 1.0]], "final": [[0, 3.0], [1, 2.0]]},
    "horizon": {"T": 30.0},
}

CLOSED_LOOP = {
    **HORIZON,
    "horizon": {"T": 3.0},
    "controller": {"type": "iPD", "dt": 1e-3, "K_P": 100.0, "K_D": 20.0, "alpha": 3.0,
                   "window": 0.03, "mismatch_a": [-20.0, -20.0],
                   "disturbance_fraction": 0.1},
}

DEMOS = ("integrator-rest", "horizon", "parameter", "turnpike")


def config(name: str) -> dict:
    table = {
        "horizon": HORIZON,
        "parameter": PARAMETER,
        "integrator-rest": INTEGRATOR_REST,
        "integrator-min-energy": INTEGRATOR_MIN_ENERGY,
        "turnpike": TURNPIKE,
        "closed-loop": CLOSED_LOOP,
    }
    return copy.deepcopy(table[name])
