"""Integral quantities of bodies and their central sections.

All operations discretize the polar formulas

    mu(K)        = int_{S^(n-1)} int_0^{rho_K(theta)} r^(n-1) f(r theta) dr dtheta
    |K|          = (1/n) int_{S^(n-1)} rho_K^n
    mu(K cap H)  = R_(n-k)[ int_0^{rho_K} r^(n-k-1) f(r .) dr ](H)
    |K cap H|    = (1/(n-k)) R_(n-k)[ rho_K^(n-k) ](H)

with one spherical rule per sphere or slice and Gauss-Legendre radial
segments.  Volumes use the closed radial form; measures run the radial
rule, which is exact for the polynomial integrand the f = 1 case produces,
so measure-with-unit-density and volume agree to roundoff on identical
node sets.

Densities may declare radial breakpoints (the indicator-sum construction
does); each direction then integrates piecewise so jumps cost nothing.

``est_error`` on results is a doubling-based estimate: the difference
against the same integral on a half-resolution rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import StarBody
from .densities import Density
from .errors import InputError
from .grassmann import Subspace
from .quadrature import QuadratureSpec, SphericalRule, sphere_rule, subsphere_rule, _gl01

__all__ = [
    "IntegralResult",
    "body_measure",
    "body_volume",
    "section_measure",
    "section_volume",
    "section_measure_value",
    "section_volume_value",
    "radon_transform",
    "complex_radon",
]


@dataclass(frozen=True)
class IntegralResult:
    value: float
    est_error: float
    nodes_used: int

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise InputError("integral did not come out finite")


def _directional_radial(body: StarBody, density: Density, dirs: np.ndarray,
                        power: int, spec: QuadratureSpec) -> tuple[np.ndarray, int]:
    """Per-direction int_0^rho(theta) r^power f(r theta) dr, vectorized.

    Returns the (N,) values and the number of radial pieces used.
    """
    N, n = dirs.shape
    U = 1.0 / body.gauge(dirs)
    bp = density.radial_breakpoints(dirs)
    if bp is None:
        cuts = np.column_stack([np.zeros(N), U])
    else:
        clipped = np.clip(bp, 0.0, U[:, None])
        cuts = np.sort(np.column_stack([np.zeros(N), clipped, U]), axis=1)
    x01, w01 = _gl01(spec.radial_nodes)
    total = np.zeros(N)
    for j in range(cuts.shape[1] - 1):
        lo, hi = cuts[:, j], cuts[:, j + 1]
        span = hi - lo
        if not np.any(span > 0.0):
            continue
        r = lo[:, None] + span[:, None] * x01[None, :]
        pts = r[:, :, None] * dirs[:, None, :]
        f = density.eval(pts.reshape(-1, n)).reshape(N, len(x01))
        total += span * ((r ** power * f) @ w01)
    return total, cuts.shape[1] - 1


def _measure_on_rule(body: StarBody, density: Density, rule: SphericalRule,
                     power: int, spec: QuadratureSpec) -> tuple[float, int]:
    vals, pieces = _directional_radial(body, density, rule.nodes, power, spec)
    return rule.integrate(vals), rule.count * pieces * spec.radial_nodes


def _check_dims(body: StarBody, density: Density):
    if body.dim != density.dim:
        raise InputError(f"body dim {body.dim} != density dim {density.dim}")


def _smooth_hint(body: StarBody, density: Density | None = None) -> bool:
    s = body.smooth_gauge
    return s and density.angular_smooth if density is not None else s


def body_measure(body: StarBody, density: Density, spec: QuadratureSpec) -> IntegralResult:
    """mu(K) = int_K f via the polar formula."""
    _check_dims(body, density)
    n = body.dim
    sm = _smooth_hint(body, density)
    value, nodes = _measure_on_rule(body, density, sphere_rule(n, spec, sm), n - 1, spec)
    coarse, _ = _measure_on_rule(body, density, sphere_rule(n, spec.halved(), sm),
                                 n - 1, spec.halved())
    return IntegralResult(value=value, est_error=abs(value - coarse), nodes_used=nodes)


def body_volume(body: StarBody, spec: QuadratureSpec) -> IntegralResult:
    """|K| = (1/n) int rho_K^n over the sphere (closed radial form)."""
    n = body.dim
    sm = body.smooth_gauge
    value = _volume_on_rule(body, sphere_rule(n, spec, sm), n)
    coarse = _volume_on_rule(body, sphere_rule(n, spec.halved(), sm), n)
    return IntegralResult(value=value, est_error=abs(value - coarse),
                          nodes_used=sphere_rule(n, spec, sm).count)


def _volume_on_rule(body: StarBody, rule: SphericalRule, power: int) -> float:
    rho = 1.0 / body.gauge(rule.nodes)
    return rule.integrate(rho ** power) / power


def _subspace_frame(subspace) -> np.ndarray:
    F = np.asarray(getattr(subspace, "frame", subspace), dtype=float)
    if F.ndim == 1:
        F = F[:, None]
    return F


def section_measure(body: StarBody, density: Density, subspace,
                    spec: QuadratureSpec) -> IntegralResult:
    """mu(K cap H) for an (n-k)-dimensional subspace H."""
    _check_dims(body, density)
    value, nodes = _section_measure_raw(body, density, subspace, spec)
    coarse, _ = _section_measure_raw(body, density, subspace, spec.halved())
    return IntegralResult(value=value, est_error=abs(value - coarse), nodes_used=nodes)


def section_measure_value(body: StarBody, density: Density, subspace,
                          spec: QuadratureSpec) -> float:
    """Fast path without the error estimate (used inside searches)."""
    _check_dims(body, density)
    return _section_measure_raw(body, density, subspace, spec)[0]


def section_volume_value(body: StarBody, subspace, spec: QuadratureSpec) -> float:
    """Fast path for |K cap H| without the error estimate."""
    F = _subspace_frame(subspace)
    d = F.shape[1]
    return _volume_on_rule(body, subsphere_rule(F, spec, body.smooth_gauge), d)


def _section_measure_raw(body, density, subspace, spec) -> tuple[float, int]:
    F = _subspace_frame(subspace)
    if F.shape[0] != body.dim:
        raise InputError(f"subspace lives in R^{F.shape[0]}, body in R^{body.dim}")
    d = F.shape[1]
    rule = subsphere_rule(F, spec, _smooth_hint(body, density))
    return _measure_on_rule(body, density, rule, d - 1, spec)


def section_volume(body: StarBody, subspace, spec: QuadratureSpec) -> IntegralResult:
    """|K cap H| = (1/(n-k)) R_(n-k)(rho_K^(n-k))(H)."""
    F = _subspace_frame(subspace)
    if F.shape[0] != body.dim:
        raise InputError(f"subspace lives in R^{F.shape[0]}, body in R^{body.dim}")
    d = F.shape[1]
    sm = body.smooth_gauge
    value = _volume_on_rule(body, subsphere_rule(F, spec, sm), d)
    coarse = _volume_on_rule(body, subsphere_rule(F, spec.halved(), sm), d)
    return IntegralResult(value=value, est_error=abs(value - coarse),
                          nodes_used=subsphere_rule(F, spec, sm).count)


def radon_transform(g, subspace, spec: QuadratureSpec) -> float:
    """Spherical Radon transform R_(n-k) g(H) = int_{S^(n-1) cap H} g.

    ``g`` takes an (N, n) array of unit vectors and returns (N,) values
    (scalar-only callables are adapted).
    """
    rule = subsphere_rule(_subspace_frame(subspace), spec)
    return rule.integrate(_eval_sphere_function(g, rule.nodes))


def complex_radon(g, xi, spec: QuadratureSpec) -> float:
    """Complex spherical Radon transform: integrate g over S^(2n-1) cap H_xi."""
    from .complexgeom import complex_hyperplane_frame

    xi = np.asarray(xi, dtype=float)
    if xi.ndim != 1 or xi.size % 2 != 0:
        raise InputError("complex Radon needs a direction in even-dimensional space")
    return radon_transform(g, complex_hyperplane_frame(xi), spec)


def _eval_sphere_function(g, nodes: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(g(nodes), dtype=float)
        if vals.shape == (nodes.shape[0],):
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([float(g(x)) for x in nodes])
