import math

import numpy as np
import pytest

from slicecheck.bodies import StarBody
from slicecheck.constants import ball_volume
from slicecheck.densities import Density
from slicecheck.errors import InputError
from slicecheck.grassmann import Subspace, haar_sample
from slicecheck.oracle import mc_body_measure, mc_section_measure


def test_ball_volume_within_3_sigma():
    est = mc_body_measure(StarBody.ball(3), Density.constant(3, 1.0),
                          samples=1_000_000, seed=1)
    assert est.within(4.0 * math.pi / 3.0, 3.0)
    assert est.std_error < 0.01


def test_cube_volume_within_3_sigma():
    est = mc_body_measure(StarBody.cube(4), Density.constant(4, 1.0),
                          samples=500_000, seed=2)
    assert est.within(16.0, 3.0)


def test_seed_determinism():
    a = mc_body_measure(StarBody.ball(3), Density.constant(3, 1.0),
                        samples=200_000, seed=5)
    b = mc_body_measure(StarBody.ball(3), Density.constant(3, 1.0),
                        samples=200_000, seed=5)
    assert a.mean == b.mean and a.std_error == b.std_error
    c = mc_body_measure(StarBody.ball(3), Density.constant(3, 1.0),
                        samples=200_000, seed=6)
    assert c.mean != a.mean


def test_unbiasedness_over_many_seeds():
    """|mean - closed form| <= 3 sigma in at least 99% of 100 seeds."""
    exact = ball_volume(3)
    hits = 0
    for seed in range(100):
        est = mc_body_measure(StarBody.ball(3), Density.constant(3, 1.0),
                              samples=100_000, seed=seed)
        hits += est.within(exact, 3.0)
    assert hits >= 99


def test_section_measure_ball_k1():
    H = haar_sample(4, 1, seed=3)
    est = mc_section_measure(StarBody.ball(4), Density.constant(4, 1.0), H,
                             samples=500_000, seed=7)
    assert est.within(ball_volume(3), 3.0)


def test_section_measure_cube_coordinate_plane():
    H = Subspace(np.eye(3)[:, :2])
    est = mc_section_measure(StarBody.cube(3), Density.constant(3, 1.0), H,
                             samples=500_000, seed=8)
    assert est.within(4.0, 3.0)


def test_section_hexagon_cross_checks_quadrature(spec):
    from slicecheck.sections import section_volume

    H = Subspace.from_normal(np.array([1.0, 1.0, 1.0]))
    est = mc_section_measure(StarBody.cube(3), Density.constant(3, 1.0), H,
                             samples=500_000, seed=9)
    quad = section_volume(StarBody.cube(3), H, spec).value
    assert est.within(quad, 3.0)
    assert est.within(3.0 * math.sqrt(3.0), 3.0)


def test_weighted_measure_against_exact_gaussian_integral():
    """int over R^2 restricted to a big ball ~ closed-form Gaussian mass."""
    body = StarBody.scaled(StarBody.ball(2), 6.0)
    f = Density.radial_gaussian(2, sigma=1.0)
    est = mc_body_measure(body, f, samples=1_000_000, seed=11)
    assert est.within(2.0 * math.pi * (1.0 - math.exp(-18.0)), 3.5)


def test_dimension_mismatch():
    with pytest.raises(InputError):
        mc_body_measure(StarBody.ball(3), Density.constant(2, 1.0))
