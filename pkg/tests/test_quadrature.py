import math

import numpy as np
import pytest

from slicecheck.constants import sphere_surface
from slicecheck.errors import InputError
from slicecheck.quadrature import (QuadratureSpec, radial_integral, sphere_rule,
                                   subsphere_rule)


def sphere_monomial_moment(exponents):
    """Closed-form int_{S^(m-1)} prod x_i^(2 a_i) dsigma (the test oracle)."""
    a = list(exponents)
    m = len(a)
    num = 2.0 * math.prod(math.gamma(ai + 0.5) for ai in a)
    return num / math.gamma(sum(a) + m / 2.0)


def test_s0_rule_is_two_point_counting_measure(spec):
    r = sphere_rule(1, spec)
    assert r.count == 2
    assert sorted(r.nodes[:, 0].tolist()) == [-1.0, 1.0]
    assert np.allclose(r.weights, 1.0)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7, 8])
@pytest.mark.parametrize("scheme", ["product-gauss", "randomized-qmc"])
def test_weights_sum_to_sphere_measure(m, scheme):
    r = sphere_rule(m, QuadratureSpec(scheme=scheme))
    assert r.weights.sum() == pytest.approx(sphere_surface(m), rel=1e-12)
    assert np.max(np.abs(np.linalg.norm(r.nodes, axis=1) - 1.0)) < 1e-12
    assert np.all(r.weights > 0)


def test_circle_rule_constant(spec):
    r = sphere_rule(2, spec)
    assert r.integrate(np.ones(r.count)) == pytest.approx(2 * math.pi, rel=1e-12)


def test_sphere_rule_constant_is_4pi(spec):
    r = sphere_rule(3, spec)
    assert r.integrate(np.ones(r.count)) == pytest.approx(4 * math.pi, rel=1e-3)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_product_gauss_polynomial_exactness(m):
    """Even monomials of total degree <= 6 against the closed-form moments."""
    rule = sphere_rule(m, QuadratureSpec(scheme="product-gauss"))
    cases = [(3,) + (0,) * (m - 1), (2, 1) + (0,) * (m - 2), (1,) * 2 + (0,) * (m - 2)]
    if m >= 3:
        cases.append((1, 1, 1) + (0,) * (m - 3))
    for a in cases:
        vals = np.prod(rule.nodes ** (2 * np.asarray(a)), axis=1)
        exact = sphere_monomial_moment(a)
        assert rule.integrate(vals) == pytest.approx(exact, rel=1e-10)


def test_antipodal_symmetry_both_schemes():
    for scheme in ("product-gauss", "randomized-qmc"):
        for m in (2, 3, 4, 5, 7):
            r = sphere_rule(m, QuadratureSpec(scheme=scheme))
            # odd integrands integrate to zero exactly on a symmetric node set
            vals = (r.nodes[:, 0] ** 3 + 0.5 * r.nodes[:, -1]
                    + r.nodes[:, 0] * np.cos(r.nodes[:, -1]))
            assert abs(r.integrate(vals)) < 1e-12


def test_determinism_same_spec_bitwise():
    a = sphere_rule(5, QuadratureSpec(seed=123, scheme="randomized-qmc"))
    b = sphere_rule(5, QuadratureSpec(seed=123, scheme="randomized-qmc"))
    assert np.array_equal(a.nodes, b.nodes) and np.array_equal(a.weights, b.weights)
    c = sphere_rule(5, QuadratureSpec(seed=124, scheme="randomized-qmc"))
    assert not np.array_equal(a.nodes, c.nodes)


def test_doubling_changes_catalog_integrals_below_rel_tol(spec):
    """Within the default scheme's competence, doubling the budget moves
    values by less than rel_tol."""
    from slicecheck.bodies import StarBody
    from slicecheck.sections import body_volume

    doubled = QuadratureSpec(sphere_nodes=2 * spec.sphere_nodes,
                             radial_nodes=spec.radial_nodes)
    bodies = [StarBody.ball(4), StarBody.ellipsoid(np.diag([1.0, 2.0, 3.0])),
              StarBody.cube(3), StarBody.lp_ball(4.0, 4)]
    for body in bodies:
        v1 = body_volume(body, spec).value
        v2 = body_volume(body, doubled).value
        assert abs(v1 - v2) < spec.rel_tol * abs(v1)


def test_subsphere_coordinate_plane(spec):
    F = np.eye(3)[:, :2]
    r = subsphere_rule(F, spec)
    assert r.integrate(np.ones(r.count)) == pytest.approx(2 * math.pi, rel=1e-12)
    assert np.allclose(r.nodes[:, 2], 0.0)


def test_subsphere_line_is_s0(spec):
    F = np.eye(3)[:, :1]
    r = subsphere_rule(F, spec)
    assert r.count == 2
    assert r.integrate(np.ones(2)) == pytest.approx(2.0)


def test_subsphere_odd_integrand_vanishes(spec, rng):
    from slicecheck.grassmann import haar_sample

    H = haar_sample(4, 2, seed=5)
    u = H.frame[:, 0]
    r = subsphere_rule(H.frame, spec)
    assert abs(r.integrate(r.nodes @ u))  < 1e-10


def test_frame_equivariance_rotation_invariant_integrand(spec):
    """Two frames of one H integrate a rotation-invariant function identically."""
    from scipy.stats import ortho_group

    F1 = np.linalg.qr(np.random.Generator(np.random.Philox(key=3))
                      .standard_normal((5, 3)))[0]
    Q = ortho_group.rvs(3, random_state=11)
    F2 = F1 @ Q
    r1 = subsphere_rule(F1, spec)
    r2 = subsphere_rule(F2, spec)
    v1 = r1.integrate(np.exp(-np.sum(r1.nodes ** 2, axis=1)))
    v2 = r2.integrate(np.exp(-np.sum(r2.nodes ** 2, axis=1)))
    assert v1 == pytest.approx(v2, abs=1e-10)


def test_subsphere_rejects_non_orthonormal(spec):
    with pytest.raises(InputError):
        subsphere_rule(np.array([[1.0, 0.0], [0.0, 0.5], [0.0, 0.0]]), spec)


def test_radial_integral_polynomials(spec):
    assert radial_integral(lambda r: np.ones_like(r), 1.0, 2, spec) == \
        pytest.approx(1.0 / 3.0, rel=1e-14)
    assert radial_integral(lambda r: np.ones_like(r), 2.0, 0, spec) == \
        pytest.approx(2.0, rel=1e-14)
    assert radial_integral(lambda r: r, 1.0, 3, spec) == \
        pytest.approx(0.2, rel=1e-14)


def test_radial_integral_breakpoints_remove_jump_error(spec):
    step = lambda r: np.where(r < 0.37, 1.0, 2.0)
    exact = 0.37 + 2.0 * (1.0 - 0.37)
    with_bp = radial_integral(step, 1.0, 0, spec, breakpoints=[0.37])
    assert with_bp == pytest.approx(exact, rel=1e-14)
    without = radial_integral(step, 1.0, 0, spec)
    assert abs(without - exact) > 1e-6  # the jump costs real error without the split


def test_radial_integral_validation(spec):
    with pytest.raises(InputError):
        radial_integral(lambda r: r, 0.0, 1, spec)
    with pytest.raises(InputError):
        sphere_rule(0, spec)


def test_spec_validation():
    with pytest.raises(InputError):
        QuadratureSpec(sphere_nodes=1)
    with pytest.raises(InputError):
        QuadratureSpec(rel_tol=2.0)
    with pytest.raises(InputError):
        QuadratureSpec(scheme="lebedev")
