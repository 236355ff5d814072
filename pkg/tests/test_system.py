import numpy as np
import pytest

from flatlqr.errors import InvalidArgumentError
from flatlqr.system import (CanonicalSystem, StateSpace, canonical_to_statespace,
                            controllability_rank, flat_state_map, observability_rank)


def test_canonical_realization_shape():
    ss = canonical_to_statespace(CanonicalSystem([2.0, 1.0], 3.0))
    np.testing.assert_array_equal(ss.F, [[0, 1], [-2, -1]])
    np.testing.assert_array_equal(ss.G, [[0], [3]])
    np.testing.assert_array_equal(ss.H, [[1, 0]])


def test_characteristic_polynomial_matches_coefficients():
    a = [6.0, 11.0, 6.0]
    ss = canonical_to_statespace(CanonicalSystem(a, 1.0))
    np.testing.assert_allclose(np.poly(ss.F), [1.0, 6.0, 11.0, 6.0], atol=1e-12)


@pytest.mark.parametrize("a", [[0.0], [0.0, 0.0], [1.0, -2.0, 0.5], [3.0, 0.0, 0.0, 1.0]])
def test_canonical_form_is_controllable_and_observable(a):
    ss = canonical_to_statespace(CanonicalSystem(a, 0.7))
    assert controllability_rank(ss.F, ss.G) == (len(a), True)
    assert observability_rank(ss.F, ss.H) == (len(a), True)


def test_uncontrollable_pair_detected():
    F = np.diag([-1.0, -2.0])
    G = np.array([1.0, 0.0])
    assert controllability_rank(F, G) == (1, False)


def test_rank_invariant_under_similarity(rng):
    for _ in range(20):
        n = int(rng.integers(2, 6))
        ss = canonical_to_statespace(CanonicalSystem(rng.standard_normal(n), 1.0 + rng.random()))
        P = rng.standard_normal((n, n)) + 3 * np.eye(n)
        Pinv = np.linalg.inv(P)
        F2, G2 = P @ ss.F @ Pinv, P @ ss.G
        assert controllability_rank(F2, G2)[1]
        assert observability_rank(F2, ss.H @ Pinv)[1]


def test_flat_map_reproduces_dynamics(rng):
    # x' = F x + G u holds identically along any y
    sys = CanonicalSystem([2.0, -1.0, 0.5], 4.0)
    ss = canonical_to_statespace(sys)
    yder = rng.standard_normal((sys.n + 2, 7))
    x, u = flat_state_map(sys, yder[: sys.n + 1])
    xdot, _ = flat_state_map(sys, yder[1: sys.n + 2])
    np.testing.assert_allclose(xdot, ss.F @ x + ss.G @ u[None, :], atol=1e-12)


def test_flat_map_scalar_sample():
    sys = CanonicalSystem([2.0, 1.0], 3.0)
    x, u = flat_state_map(sys, [100.0, 0.0, 0.0])
    np.testing.assert_array_equal(x, [100.0, 0.0])
    assert u == pytest.approx(200.0 / 3.0)


def test_validation():
    with pytest.raises(InvalidArgumentError):
        CanonicalSystem([1.0], 0.0)
    with pytest.raises(InvalidArgumentError):
        CanonicalSystem([], 1.0)
    with pytest.raises(InvalidArgumentError):
        flat_state_map(CanonicalSystem([1.0], 1.0), [1.0, 2.0, 3.0])
    with pytest.raises(InvalidArgumentError):
        StateSpace(np.eye(2), np.ones(3))
