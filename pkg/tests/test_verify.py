import math

import numpy as np
import pytest

from slicecheck.bodies import StarBody
from slicecheck.complexgeom import rtheta_symmetrize
from slicecheck.densities import Density
from slicecheck.errors import CertificationError, InputError
from slicecheck.grassmann import SearchConfig
from slicecheck.quadrature import QuadratureSpec
from slicecheck.verify import (check_km, check_slicing_complex,
                               check_slicing_real, check_stability_complex,
                               check_stability_real)


def test_equality_probe_real_ball(spec, search):
    r = check_stability_real(StarBody.ball(4), Density.constant(4, 1.0), 1,
                             spec, search)
    assert abs(r.ratio - 1.0) <= 1e-10
    assert r.passed
    assert abs(r.epsilon) <= 1e-12


def test_equality_probe_complex_ball(spec, search):
    r = check_stability_complex(StarBody.ball(6), Density.constant(6, 1.0),
                                spec, search)
    assert abs(r.ratio - 1.0) <= 1e-10
    assert r.passed


def test_stability_real_ball_quadratic_density(spec, search):
    """Symmetric instance: eps is constant over subspaces; cross-check the
    one-dimensional closed forms for the ball with f = 1 + |x|^2."""
    n, k = 4, 2
    r = check_stability_real(StarBody.ball(n), Density.radial_polynomial(n, [1, 1]),
                             k, spec, search)
    assert r.passed
    d = n - k
    from slicecheck.constants import ball_volume
    # eps = int_{B^d} |x|^2 dx = vol(B^d) * d/(d+2)
    assert r.epsilon == pytest.approx(ball_volume(d) * d / (d + 2.0), rel=1e-9)
    assert r.lhs == pytest.approx(ball_volume(n) * (1.0 + n / (n + 2.0)), rel=1e-9)


def test_stability_real_ellipsoid_gaussian(spec, search):
    body = StarBody.ellipsoid(np.diag([1.0, 2.0, 3.0]))
    f = Density.radial_gaussian(3, sigma=1.0 / math.sqrt(2.0), amplitude=0.5,
                                offset=1.0)
    r = check_stability_real(body, f, 1, spec, search, proof_replay=True)
    assert r.passed and r.replay_passed()
    assert r.ratio < 1.0


def test_monotone_epsilon_in_density_excess(spec, search):
    body = StarBody.ellipsoid(np.diag([1.0, 2.0]))
    eps_values, lhs_values = [], []
    for t in (0.1, 0.5, 1.0):
        f = Density.radial_gaussian(2, sigma=1.0, amplitude=t, offset=1.0)
        r = check_stability_real(body, f, 1, spec, search)
        assert r.passed
        eps_values.append(r.epsilon)
        lhs_values.append(r.lhs)
    assert eps_values == sorted(eps_values)
    assert lhs_values == sorted(lhs_values)


def test_km_ball_closed_form_ratio(spec, search):
    for n, k in [(3, 1), (5, 2), (6, 3)]:
        r = check_km(StarBody.ball(n), Density.constant(n, 1.0), k, spec, search)
        assert r.passed
        assert r.ratio == pytest.approx((n - k) / n, rel=1e-9)


def test_km_ellipsoid_logs_affine_observation(spec, search):
    r = check_km(StarBody.ellipsoid(np.diag([1.0, 4.0, 9.0])),
                 Density.constant(3, 1.0), 1, spec, search)
    assert r.passed
    assert "ball_reference_ratio" in r.extras  # logged, never asserted


def test_slicing_real_ball_is_far_from_saturation(spec, search):
    for n, k in [(4, 1), (5, 2)]:
        r = check_slicing_real(StarBody.ball(n), Density.constant(n, 1.0), k,
                               spec, search)
        assert r.passed
        assert r.ratio < n ** (-k / 2.0)  # sqrt(n)^k factor is pure slack here


def test_slicing_real_cube_with_replay(spec, search):
    r = check_slicing_real(StarBody.cube(4), Density.constant(4, 1.0), 1,
                           spec, search, proof_replay=True)
    assert r.passed and r.replay_passed()
    names = [s.name for s in r.replay]
    assert "sandwich" in names and "K-comp2" in names and "volume-transfer" in names


def test_slicing_real_l1_gaussian(spec, search):
    r = check_slicing_real(StarBody.lp_ball(1.0, 4),
                           Density.radial_gaussian(4, sigma=1.0), 2, spec, search)
    assert r.passed


def test_dimension_sweep_real(spec, search):
    """Stability checks run across n = 3..8, k = 1,2,3 without failure."""
    f_kind = lambda n: Density.radial_polynomial(n, [1.0, 1.0])
    for n in range(3, 9):
        for k in (1, 2, 3):
            if k >= n:
                continue
            r = check_stability_real(StarBody.ball(n), f_kind(n), k, spec, search)
            assert r.passed, (n, k, r.ratio, r.margin)


def test_dimension_sweep_complex(spec, search):
    for nc in (2, 3):
        r = check_stability_complex(StarBody.ball(2 * nc),
                                    Density.radial_polynomial(2 * nc, [1.0, 1.0]),
                                    spec, search)
        assert r.passed
        r = check_slicing_complex(StarBody.complex_lp_ball(1.0, nc),
                                  Density.constant(2 * nc, 1.0), spec, search)
        assert r.passed


def test_stability_complex_symmetrized_ellipsoid(spec, search):
    Kc = rtheta_symmetrize(StarBody.ellipsoid(np.diag([1.0, 4.0, 2.0, 1.0])))
    f = Density.radial_gaussian(4, sigma=1.0, amplitude=0.2, offset=1.0)
    r = check_stability_complex(Kc, f, spec, search, proof_replay=True)
    assert r.passed and r.replay_passed()


def test_slicing_complex_invariant_ellipsoid(spec, search):
    body = StarBody.ellipsoid(np.diag([1.0, 1.0, 9.0, 9.0]))
    r = check_slicing_complex(body, Density.radial_gaussian(4), spec, search,
                              proof_replay=True)
    assert r.passed and r.replay_passed()


def test_report_invariants(spec, search):
    r = check_km(StarBody.ball(4), Density.radial_gaussian(4), 1, spec, search)
    assert r.passed == (r.ratio <= 1.0 + r.margin)
    assert math.isfinite(r.lhs) and math.isfinite(r.rhs) and math.isfinite(r.ratio)
    assert r.margin >= 1e-9
    assert r.witness_frame is not None


def test_uncertified_bodies_rejected(spec, search):
    with pytest.raises(CertificationError):
        check_stability_real(StarBody.cube(4), Density.constant(4, 1.0), 1,
                             spec, search)
    with pytest.raises(CertificationError):
        check_km(StarBody.lp_ball(1.0, 4), Density.constant(4, 1.0), 1,
                 spec, search)
    with pytest.raises(CertificationError):
        check_stability_complex(StarBody.complex_lp_ball(1.0, 2),
                                Density.constant(4, 1.0), spec, search)


def test_hypothesis_violations_rejected(spec, search):
    with pytest.raises(InputError):
        # f = 0.5 < 1 on the body
        check_stability_real(StarBody.ball(3), Density.constant(3, 0.5), 1,
                             spec, search)
    with pytest.raises(InputError):
        # real cube is not R_theta-invariant
        check_slicing_complex(StarBody.cube(4), Density.constant(4, 1.0),
                              spec, search)
    with pytest.raises(InputError):
        check_stability_real(StarBody.ball(3), Density.constant(3, 1.0), 3,
                             spec, search)
