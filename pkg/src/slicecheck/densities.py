"""Even continuous non-negative densities on R^n.

The catalog covers what the verifiers need:

* ``constant``                f = c
* ``radial-gaussian``         f = offset + amplitude * exp(-|x|^2 / (2 sigma^2))
* ``radial-polynomial``       f = sum_j coeffs[j] * |x|^(2j)
* ``shifted-indicator-sum``   f = sum_i w_i(x) * chi_{B_i}(x)

The last kind is the slicing-proof construction chi_K + g*chi_L: weights
may be numbers or densities, and the component body boundaries are the
declared radial breakpoints that keep piecewise quadrature exact.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .bodies import StarBody, _as_batch, body_from_spec
from .errors import InputError

__all__ = ["Density", "density_from_spec", "density_eval", "indicator_sum"]


class Density:
    """Pointwise evaluator for an even non-negative density.

    ``eval(X)`` is vectorized over rows.  ``radial_breakpoints(dirs)``
    reports, per direction, the radii where the density jumps (None for
    smooth kinds); ``is_radial`` marks densities that depend on |x| only.
    """

    def __init__(self, dim: int, kind: str, eval_fn, params: dict | None = None,
                 is_radial: bool = False, components: Sequence | None = None):
        if dim < 1:
            raise InputError(f"density dimension must be >= 1, got {dim}")
        self.dim = int(dim)
        self.kind = kind
        self._eval_fn = eval_fn
        self.params = params or {}
        self.is_radial = is_radial
        self._components = list(components) if components else None

    # ------------------------------------------------------------------
    # catalog constructors
    # ------------------------------------------------------------------

    @classmethod
    def constant(cls, dim: int, c: float = 1.0) -> "Density":
        if c < 0:
            raise InputError("constant density level must be non-negative")

        def fn(X, c=float(c)):
            return np.full(X.shape[0], c)

        return cls(dim, "constant", fn, params={"c": float(c)}, is_radial=True)

    @classmethod
    def radial_gaussian(cls, dim: int, sigma: float = 1.0, amplitude: float = 1.0,
                        offset: float = 0.0) -> "Density":
        """offset + amplitude * exp(-|x|^2/(2 sigma^2)); defaults give f(0) = 1."""
        if sigma <= 0:
            raise InputError("gaussian width must be positive")
        if amplitude < 0 or offset < 0:
            raise InputError("gaussian amplitude and offset must be non-negative")

        def fn(X, s2=2.0 * sigma * sigma, a=float(amplitude), b=float(offset)):
            return b + a * np.exp(-np.sum(X * X, axis=1) / s2)

        return cls(dim, "radial-gaussian", fn,
                   params={"sigma": float(sigma), "amplitude": float(amplitude),
                           "offset": float(offset)},
                   is_radial=True)

    @classmethod
    def radial_polynomial(cls, dim: int, coeffs: Sequence[float]) -> "Density":
        """sum_j coeffs[j] * |x|^(2j); coefficients must be non-negative.

        [1, 1] is the 1 + |x|^2 density used throughout the checks.
        """
        c = [float(v) for v in coeffs]
        if not c or any(v < 0 for v in c):
            raise InputError("radial polynomial needs non-negative coefficients")

        def fn(X, c=tuple(c)):
            r2 = np.sum(X * X, axis=1)
            out = np.full(X.shape[0], c[0])
            pw = np.ones_like(r2)
            for v in c[1:]:
                pw = pw * r2
                out = out + v * pw
            return out

        return cls(dim, "radial-polynomial", fn, params={"coeffs": c}, is_radial=True)

    @classmethod
    def indicator_sum(cls, components: Sequence[tuple[StarBody, object]]) -> "Density":
        """f = sum_i w_i(x) * chi_{B_i}(x) with numeric or density weights."""
        comps = []
        dim = None
        for body, weight in components:
            if dim is None:
                dim = body.dim
            elif body.dim != dim:
                raise InputError("indicator-sum component dimensions disagree")
            if isinstance(weight, (int, float)):
                if weight < 0:
                    raise InputError("indicator weights must be non-negative")
                comps.append((body, float(weight)))
            elif isinstance(weight, Density):
                if weight.dim != body.dim:
                    raise InputError("weight density dimension mismatch")
                comps.append((body, weight))
            else:
                raise InputError("indicator weight must be a number or a Density")
        if dim is None:
            raise InputError("indicator-sum needs at least one component")

        def fn(X, comps=tuple(comps)):
            out = np.zeros(X.shape[0])
            for body, weight in comps:
                inside = body.gauge(X) <= 1.0 + 1e-12
                if isinstance(weight, float):
                    out[inside] += weight
                else:
                    out[inside] += weight.eval(X[inside])
            return out

        return cls(dim, "shifted-indicator-sum", fn, components=comps)

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------

    def eval(self, x):
        X, single = _as_batch(x, self.dim)
        v = np.asarray(self._eval_fn(X), dtype=float)
        return float(v[0]) if single else v

    def __call__(self, x):
        return self.eval(x)

    def radial_breakpoints(self, dirs: np.ndarray):
        """Per-direction jump radii, shape (N, B); None when smooth."""
        if self._components is None:
            return None
        return np.column_stack([body.radial(dirs) for body, _ in self._components])

    @property
    def angular_smooth(self) -> bool:
        """True when the direction-wise radial profile varies smoothly in
        angle (radial densities always; indicator sums only when every
        component boundary is ridge-free)."""
        if self._components is None:
            return True
        return all(body.smooth_gauge for body, _ in self._components)

    def radial_profile(self, r: np.ndarray):
        """Value as a function of radius (radial kinds only)."""
        if not self.is_radial:
            raise InputError(f"density kind {self.kind!r} is not radial")
        r = np.asarray(r, dtype=float)
        X = np.zeros((r.size, self.dim))
        X[:, 0] = r.ravel()
        return self.eval(X).reshape(r.shape)


def indicator_sum(components) -> Density:
    return Density.indicator_sum(components)


def density_eval(density: Density, x) -> float:
    return density.eval(x)


# ----------------------------------------------------------------------
# structured-text density specs
# ----------------------------------------------------------------------

_SHORTHANDS = {
    "const": lambda dim: Density.constant(dim, 1.0),
    "1": lambda dim: Density.constant(dim, 1.0),
    "radial-gaussian": lambda dim: Density.radial_gaussian(dim),
    "gaussian": lambda dim: Density.radial_gaussian(dim),
    "1+r2": lambda dim: Density.radial_polynomial(dim, [1.0, 1.0]),
}


def density_from_spec(doc, dim: int | None = None) -> Density:
    """Build a density from a JSON-style document or shorthand name."""
    if isinstance(doc, str):
        if doc not in _SHORTHANDS:
            raise InputError(f"unknown density shorthand {doc!r}")
        if dim is None:
            raise InputError(f"density shorthand {doc!r} needs an explicit dimension")
        return _SHORTHANDS[doc](dim)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputError("density spec must be a shorthand string or a dict with a 'kind'")
    kind = doc["kind"]
    d = doc.get("dim", dim)
    if d is None:
        raise InputError("density spec needs a dimension")
    d = int(d)
    if kind == "constant":
        return Density.constant(d, doc.get("c", 1.0))
    if kind == "radial-gaussian":
        return Density.radial_gaussian(d, sigma=doc.get("sigma", 1.0),
                                       amplitude=doc.get("amplitude", 1.0),
                                       offset=doc.get("offset", 0.0))
    if kind == "radial-polynomial":
        return Density.radial_polynomial(d, doc["coeffs"])
    if kind == "shifted-indicator-sum":
        comps = []
        for item in doc["components"]:
            body = body_from_spec(item["body"], dim=d)
            weight = item.get("weight", 1.0)
            if isinstance(weight, dict):
                weight = density_from_spec(weight, dim=d)
            comps.append((body, weight))
        return Density.indicator_sum(comps)
    raise InputError(f"unknown density kind {kind!r}")
