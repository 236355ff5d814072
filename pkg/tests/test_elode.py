import numpy as np
import pytest

from flatlqr.elode import (Mode, eval_basis, general_solution, mode_basis,
                           particular_solution, wronskian)
from flatlqr.errors import OutOfRangeError
from flatlqr.lagrangian import EulerLagrangeOperator, euler_lagrange, from_flat_terms


def op(e, forcing=(0.0,)):
    return EulerLagrangeOperator(np.array(e, float), np.array(forcing, float))


def ode_residual(operator, basis, j, t):
    return sum(ek * eval_basis(basis, j, k, t) for k, ek in enumerate(operator.e))


def test_integrator_energy_basis_is_affine():
    b = mode_basis(op([0, 0, 1]))
    assert [(m.power, m.lam) for m in b] == [(0, 0j), (1, 0j)]
    assert eval_basis(b, 1, 0, 2.5) == 2.5
    assert eval_basis(b, 1, 1, 2.5) == 1.0
    assert eval_basis(b, 1, 2, 2.5) == 0.0


def test_exponential_pair():
    b = mode_basis(op([-1, 0, 1]))
    assert [m.describe() for m in b] == ["exp(-1 t)", "exp(1 t)"]


def test_rest_to_rest_roots():
    operator = euler_lagrange(from_flat_terms([(0, 1, 0), (1, 1, 0), (2, 1, 0)]))
    b = mode_basis(operator)
    want = sorted([complex(s * np.sqrt(3) / 2, w / 2) for s in (-1, 1) for w in (-1, 1)],
                  key=lambda z: (z.real, z.imag))
    got = b.roots.values()
    np.testing.assert_allclose(got, want, atol=1e-10)
    assert [m.part for m in b] == ["re", "im", "re", "im"]


def test_turnpike_basis():
    b = mode_basis(op([0, 0, 1, 0, -1]))
    assert [(m.power, m.lam.real) for m in b] == [(0, -1.0), (0, 0.0), (1, 0.0), (0, 1.0)]


@pytest.mark.parametrize("e", [[1, 0, -1, 0, 1], [2, 3, 1], [0, 0, 1, 0, -1],
                               [1, 3, 3, 1], [4, 0, 5, 0, 1]])
def test_exact_derivatives_match_finite_differences(e):
    b = mode_basis(op(e))
    h, t = 1e-5, 0.7
    for j in range(len(b)):
        for d in range(3):
            fd = (eval_basis(b, j, d, t + h) - eval_basis(b, j, d, t - h)) / (2 * h)
            assert eval_basis(b, j, d + 1, t) == pytest.approx(fd, rel=1e-7, abs=1e-8)


@pytest.mark.parametrize("e", [[1, 0, -1, 0, 1], [0, 0, 1, 0, -1], [1, 3, 3, 1],
                               [4, 0, 5, 0, 1], [-1, 0, 0, 0, 0, 0, 1]])
def test_basis_solves_homogeneous_equation(e, rng):
    operator = op(e)
    b = mode_basis(operator)
    for j in range(len(b)):
        for t in rng.uniform(0, 3, 5):
            scale = max(abs(eval_basis(b, j, k, t)) for k in range(len(e)))
            assert abs(ode_residual(operator, b, j, t)) <= 1e-9 * max(1.0, scale)


def test_repeated_root_gives_polynomial_times_exponential():
    b = mode_basis(op([1, 3, 3, 1]))  # (s+1)^3
    assert [m.power for m in b] == [0, 1, 2]
    assert all(abs(m.lam + 1) < 1e-12 for m in b)


def test_wronskian_nonsingular(rng):
    b = mode_basis(op([1, 0, -1, 0, 1]))
    for t in rng.uniform(0, 5, 4):
        assert abs(np.linalg.det(wronskian(b, t))) > 1e-8


def test_particular_constant_forcing():
    np.testing.assert_allclose(particular_solution(op([13, 0, -6, 0, 1], [900])), [900 / 13])


def test_particular_with_zero_root():
    # y'' = c has particular solution c t^2 / 2
    np.testing.assert_allclose(particular_solution(op([0, 0, 1], [3.0])), [0, 0, 1.5])
    # y'''' - y'' = 2: zero root of multiplicity 2
    np.testing.assert_allclose(particular_solution(op([0, 0, -1, 0, 1], [2.0])), [0, 0, -1.0])


def test_particular_polynomial_forcing():
    operator = op([2, 1, 1], [1.0, -2.0, 0.5])
    p = particular_solution(operator)
    np.testing.assert_allclose(operator.apply_poly(p)[:3], [1.0, -2.0, 0.5], atol=1e-12)


def test_homogeneous_particular_is_zero():
    np.testing.assert_array_equal(particular_solution(op([1, 0, 1])), [0.0])


def test_general_solution_order():
    gs = general_solution(op([1, 0, -1, 0, 1], [4.0]))
    assert gs.order == 4
    assert gs.particular_derivative(0, 3.0) == pytest.approx(4.0)
    assert gs.particular_derivative(1, 3.0) == 0.0


def test_overflow_guard():
    b = mode_basis(op([-1, 0, 1]))
    with pytest.raises(OutOfRangeError):
        eval_basis(b, 1, 0, 800.0)
    assert np.isfinite(eval_basis(b, 1, 0, 800.0, shift=800.0))


def test_mode_describe():
    assert Mode(0, 0j).describe() == "1"
    assert Mode(2, complex(-1, 3), "im").describe() == "t^2*exp(-1 t)*sin(3 t)"
