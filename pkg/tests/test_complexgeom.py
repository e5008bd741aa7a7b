import math

import numpy as np
import pytest

from slicecheck.bodies import StarBody
from slicecheck.complexgeom import (complex_hyperplane_frame, is_rtheta_invariant,
                                    quarter_turn, rtheta_apply, rtheta_symmetrize)
from slicecheck.errors import InputError


def test_rtheta_apply_quarter_turn():
    assert np.allclose(rtheta_apply(math.pi / 2.0, [1.0, 0.0, 0.0, 0.0]),
                       [0.0, 1.0, 0.0, 0.0], atol=1e-15)


def test_rtheta_apply_identity_and_isometry(rng):
    X = rng.standard_normal((100, 6))
    assert np.allclose(rtheta_apply(0.0, X), X)
    for theta in (0.3, 1.7, 5.5):
        Y = rtheta_apply(theta, X)
        assert np.allclose(np.linalg.norm(Y, axis=1), np.linalg.norm(X, axis=1),
                           rtol=1e-14)


def test_rtheta_apply_rejects_odd_dimension():
    with pytest.raises(InputError):
        rtheta_apply(0.5, [1.0, 2.0, 3.0])


def test_invariance_of_catalog_bodies():
    assert is_rtheta_invariant(StarBody.ball(4)).max_deviation < 1e-15
    for p in (1.0, 2.0, 4.0):
        rep = is_rtheta_invariant(StarBody.complex_lp_ball(p, 2))
        assert rep.invariant and rep.max_deviation < 1e-12


def test_real_cube_is_not_invariant():
    """Witness: theta = pi/4 moves (1,0,0,0) to a different slab gauge."""
    body = StarBody.cube(4)
    rep = is_rtheta_invariant(body)
    assert not rep.invariant
    x = np.array([1.0, 0.0, 0.0, 0.0])
    g0 = body.gauge(x)
    g1 = body.gauge(rtheta_apply(math.pi / 4.0, x))
    assert abs(g0 - g1) > 0.2  # direct confirmation of the sampled witness


def test_complex_hyperplane_frame_coordinate_case():
    H = complex_hyperplane_frame(np.array([1.0, 0.0, 0.0, 0.0]))
    P = H.projector()
    expected = np.diag([0.0, 0.0, 1.0, 1.0])
    assert np.max(np.abs(P - expected)) < 1e-12


def test_complex_hyperplane_frame_orthogonality(rng):
    for _ in range(20):
        xi = rng.standard_normal(6)
        xi /= np.linalg.norm(xi)
        H = complex_hyperplane_frame(xi)
        assert H.sub_dim == 4
        assert np.max(np.abs(H.frame.T @ H.frame - np.eye(4))) < 1e-12
        assert np.max(np.abs(H.frame.T @ xi)) < 1e-12
        assert np.max(np.abs(H.frame.T @ quarter_turn(xi))) < 1e-12


def test_complex_hyperplane_same_subspace_for_rotated_direction(rng):
    for _ in range(10):
        xi = rng.standard_normal(4)
        xi /= np.linalg.norm(xi)
        P = complex_hyperplane_frame(xi).projector()
        for theta in (0.4, 1.2, 2.9):
            Q = complex_hyperplane_frame(rtheta_apply(theta, xi)).projector()
            assert np.max(np.abs(P - Q)) < 1e-10


def test_symmetrize_ball_is_identity(rng):
    Kc = rtheta_symmetrize(StarBody.ball(4))
    X = rng.standard_normal((200, 4))
    assert np.max(np.abs(Kc.gauge(X) - StarBody.ball(4).gauge(X))) < 1e-12


def test_symmetrize_invariant_body_is_identity(rng):
    body = StarBody.complex_lp_ball(1.0, 2)
    Kc = rtheta_symmetrize(body)
    X = rng.standard_normal((200, 4))
    assert np.max(np.abs(Kc.gauge(X) - body.gauge(X)) / body.gauge(X)) < 1e-12


def test_symmetrize_ellipsoid_becomes_invariant():
    inner = StarBody.ellipsoid(np.diag([1.0, 4.0, 2.0, 1.0]))
    Kc = rtheta_symmetrize(inner)
    rep = is_rtheta_invariant(Kc, tol=1e-8)
    assert rep.invariant, f"deviation {rep.max_deviation}"


def test_symmetrize_idempotent(rng):
    inner = StarBody.ellipsoid(np.diag([1.0, 4.0, 2.0, 1.0]))
    once = rtheta_symmetrize(inner)
    twice = rtheta_symmetrize(once)
    X = rng.standard_normal((200, 4))
    assert np.max(np.abs(once.gauge(X) - twice.gauge(X)) / once.gauge(X)) < 1e-10


def test_symmetrize_escalates_on_theta_rough_body(rng):
    """A slab body is kinky in theta; the grid must escalate to 512."""
    rough = StarBody.cube(4)
    Kc = rtheta_symmetrize(rough, theta_nodes=64)
    assert Kc.params["theta_nodes"] == 512
    rep = is_rtheta_invariant(Kc, tol=1e-6)
    assert rep.invariant  # even the rough body symmetrizes to invariance


def test_sandwich_preservation_under_symmetrization(rng):
    """If (1/s) K subset L subset K with L invariant, the same holds for K_c."""
    s = 2.0
    A = np.diag([1.0, 0.25, 0.5, 1.0 / 3.0])  # B_2^4 subset K subset 2 B_2^4
    K = StarBody.ellipsoid(A)
    L = StarBody.ball(4)
    Kc = rtheta_symmetrize(K)
    U = rng.standard_normal((2000, 4))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    rho_L = 1.0 / L.gauge(U)
    rho_Kc = 1.0 / Kc.gauge(U)
    assert np.all(rho_L <= rho_Kc * (1 + 1e-12))
    assert np.all(rho_Kc / s <= rho_L * (1 + 1e-12))


def test_frame_rejects_bad_input():
    with pytest.raises(InputError):
        complex_hyperplane_frame(np.zeros(4))
    with pytest.raises(InputError):
        complex_hyperplane_frame(np.ones(3))
    with pytest.raises(InputError):
        complex_hyperplane_frame(np.array([1.0, 0.0]))  # n = 1 has no H_xi
