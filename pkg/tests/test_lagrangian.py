import numpy as np
import pytest
import sympy as sp
from sympy.calculus.euler import euler_equations

from flatlqr.errors import DegenerateLagrangianError, InvalidArgumentError
from flatlqr.lagrangian import (EulerLagrangeOperator, QuadraticLagrangian, euler_lagrange,
                                from_flat_terms, from_state_cost)
from flatlqr.system import CanonicalSystem, flat_state_map


def sympy_operator(Q, l):
    """Euler-Lagrange coefficients of v^T Q v + l^T v computed symbolically."""
    t = sp.Symbol("t")
    y = sp.Function("y")
    mu = len(l) - 1
    v = [y(t).diff(t, k) if k else y(t) for k in range(mu + 1)]
    Qs = sp.Matrix(Q)
    L = sum(Qs[i, j] * v[i] * v[j] for i in range(mu + 1) for j in range(mu + 1))
    L += sum(sp.Rational(l[i]) * v[i] for i in range(mu + 1))
    eq = sp.expand(euler_equations(L, y(t), t)[0].lhs)
    e = [float(eq.coeff(y(t).diff(t, k) if k else y(t))) for k in range(2 * mu + 1)]
    forcing = -float(eq.subs({y(t).diff(t, k): 0 for k in range(2 * mu, 0, -1)}).subs(y(t), 0))
    return np.array(e), forcing


@pytest.mark.parametrize("seed", range(6))
def test_coefficients_match_symbolic_oracle(seed):
    rng = np.random.default_rng(seed)
    mu = 1 + seed % 3
    A = rng.integers(-3, 4, size=(mu + 1, mu + 1))
    Q = (A + A.T).astype(int)
    Q[mu, mu] = abs(Q[mu, mu]) + 1
    l = rng.integers(-5, 6, size=mu + 1)
    e_ref, f_ref = sympy_operator(Q.tolist(), [int(v) for v in l])
    op = euler_lagrange(QuadraticLagrangian(Q, l))
    np.testing.assert_allclose(op.e, e_ref, atol=1e-12)
    assert op.forcing[0] == pytest.approx(f_ref)


def test_odd_coefficients_cancel_exactly(rng):
    for _ in range(50):
        A = rng.standard_normal((4, 4))
        op = euler_lagrange(QuadraticLagrangian(A + A.T + 10 * np.eye(4), np.zeros(4)))
        assert np.all(op.e[1::2] == 0.0)


def test_scaling_leaves_normalized_operator_unchanged(rng):
    A = rng.standard_normal((3, 3))
    L = QuadraticLagrangian(A + A.T + 5 * np.eye(3), rng.standard_normal(3))
    base = euler_lagrange(L).normalized()
    scaled = euler_lagrange(L.scaled(7.5)).normalized()
    np.testing.assert_allclose(scaled.e, base.e, rtol=1e-14)
    np.testing.assert_allclose(scaled.forcing, base.forcing, rtol=1e-14)


def test_state_cost_pullback_agrees_pointwise(rng):
    sys = CanonicalSystem([2.0, 1.0], 3.0)
    Qx = np.array([[2.0, 0.5], [0.5, 1.0]])
    xo, uo, r = np.array([100.0, -3.0]), 4.0, 0.7
    L = from_state_cost(sys, Qx, r, xo, uo)
    v = rng.standard_normal((3, 25)) * 10
    x, u = flat_state_map(sys, v)
    direct = np.einsum("ik,ij,jk->k", x - xo[:, None], Qx, x - xo[:, None]) + r * (u - uo) ** 2
    np.testing.assert_allclose(L(v), direct, rtol=1e-12)


def test_worked_example_expansion():
    # Qx = I, r = 1, x offset (100, 0) on y'' + y' + 2y = 3u
    L = from_state_cost(CanonicalSystem([2.0, 1.0], 3.0), np.eye(2), 1.0, [100.0, 0.0])
    np.testing.assert_allclose(L.Q * 9, [[13, 2, 2], [2, 10, 1], [2, 1, 1]], atol=1e-12)
    np.testing.assert_allclose(L.l, [-200.0, 0.0, 0.0])
    assert L.c0 == 10000.0
    op = euler_lagrange(L)
    np.testing.assert_allclose(op.e * 9, [26, 0, -12, 0, 2], atol=1e-12)
    np.testing.assert_allclose(op.forcing, [200.0])


def test_rest_to_rest_operator():
    op = euler_lagrange(from_flat_terms([(0, 1, 0), (1, 1, 0), (2, 1, 0)])).normalized()
    np.testing.assert_array_equal(op.e, [1.0, 0.0, -1.0, 0.0, 1.0])


def test_flat_terms_offsets():
    L = from_flat_terms([(0, 2.0, 3.0), (1, 1.0, 0.0)])
    assert L(np.array([3.0, 0.0])) == pytest.approx(0.0)
    assert L(np.array([4.0, 1.0])) == pytest.approx(3.0)


def test_apply_poly():
    op = EulerLagrangeOperator([0.0, 0.0, 1.0], [0.0])
    np.testing.assert_allclose(op.apply_poly([0, 0, 0, 1]), [0, 6, 0, 0])


def test_bilinear_is_directional_derivative(rng):
    A = rng.standard_normal((3, 3))
    L = QuadraticLagrangian(A + A.T, rng.standard_normal(3), 2.0)
    v, w = rng.standard_normal(3), rng.standard_normal(3)
    h = 1e-6
    fd = (L(v + h * w) - L(v - h * w)) / (2 * h)
    assert L.bilinear(v, w) == pytest.approx(fd, rel=1e-7)


def test_degenerate_and_invalid():
    with pytest.raises(DegenerateLagrangianError):
        euler_lagrange(QuadraticLagrangian([[1.0, 0.0], [0.0, 0.0]], [0.0, 0.0]))
    with pytest.raises(InvalidArgumentError):
        QuadraticLagrangian([[1.0, 2.0], [0.0, 1.0]], [0.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        from_flat_terms([(1, -1.0, 0.0)])
