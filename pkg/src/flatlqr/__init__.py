"""Flatness-based linear quadratic trajectory optimization.

Quadratic costs written in flat-output coordinates give linear
constant-coefficient Euler-Lagrange equations; their two-point boundary value
problems are solved in closed form, and the resulting reference trajectories
are tracked with pole placement or model-free intelligent controllers.
"""

from .bvp import BoundarySpec, TrajectorySolution, nominal_histories, solve_bvp
from .closedloop import (Homeostat, SimConfig, f_estimate, ip_control, ipd_control,
                         pole_place, riachy_control, simulate)
from .criterion import (Problem, eval_criterion, perturbation_check, sweep_horizon,
                        sweep_parameter, turnpike_diagnostic)
from .elode import eval_basis, general_solution, mode_basis, particular_solution
from .errors import FlatLQRError
from .lagrangian import (EulerLagrangeOperator, QuadraticLagrangian, euler_lagrange,
                         from_flat_terms, from_state_cost)
from .system import (CanonicalSystem, StateSpace, canonical_to_statespace,
                     controllability_rank, flat_state_map, observability_rank)

__version__ = "0.1.0"
