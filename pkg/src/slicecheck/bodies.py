"""Origin-symmetric star bodies represented by their Minkowski functional.

Every downstream formula consumes only the gauge ||x||_K (and its inverse,
the radial function), so a body is an evaluator plus a catalog tag; no
boundary meshes anywhere.  Gauges are vectorized: ``gauge(X)`` accepts a
single point of shape (n,) or a batch of shape (N, n).

Catalog kinds and their closed forms:

* ``euclidean-ball``      |x|
* ``ellipsoid``           sqrt(x^T A x) for SPD A, the body {x^T A x <= 1}
* ``lp-ball``             (sum |x_i|^p)^(1/p), p >= 1
* ``slab-polytope``       max_i |<a_i, x>| for row vectors a_i (cube = identity rows)
* ``complex-lp-ball``     lp norm of the coordinate-pair moduli vector
* ``rtheta-symmetrized``  (mean_theta ||R_theta x||_inner^(-2))^(-1/2)
* ``scaled``              ||x||_inner / s
* ``custom``              user-supplied functional; invariants advisory only
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import InputError

__all__ = ["StarBody", "body_from_spec", "DEFAULT_CONTAINS_TOL",
           "minkowski_functional", "radial_function", "contains",
           "check_star_body"]

DEFAULT_CONTAINS_TOL = 1e-9

CONVEX_KINDS = {"euclidean-ball", "ellipsoid", "lp-ball", "slab-polytope",
                "complex-lp-ball"}


def _as_batch(x, dim: int) -> tuple[np.ndarray, bool]:
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != dim:
        raise InputError(f"expected points of dimension {dim}, got shape {np.shape(x)}")
    return X, single


def _pair_rotate(X: np.ndarray, cos_t: float, sin_t: float) -> np.ndarray:
    """Apply the same 2x2 rotation to every coordinate pair of each row."""
    P = X.reshape(X.shape[0], -1, 2)
    out = np.empty_like(P)
    out[..., 0] = cos_t * P[..., 0] - sin_t * P[..., 1]
    out[..., 1] = sin_t * P[..., 0] + cos_t * P[..., 1]
    return out.reshape(X.shape)


class StarBody:
    """A star body given by its gauge evaluator and catalog metadata.

    Use the classmethod constructors; the raw __init__ is the escape
    hatch for custom functionals.
    """

    def __init__(self, dim: int, kind: str, gauge_fn: Callable[[np.ndarray], np.ndarray],
                 params: dict | None = None, convex: bool = False,
                 smooth_gauge: bool = False):
        if dim < 1:
            raise InputError(f"body dimension must be >= 1, got {dim}")
        self.dim = int(dim)
        self.kind = kind
        self._gauge_fn = gauge_fn
        self.params = params or {}
        self.convex = convex
        # smooth_gauge flags gauges without ridges away from the origin;
        # the quadrature auto-scheme treats ridged integrands as kinky
        self.smooth_gauge = smooth_gauge

    # ------------------------------------------------------------------
    # catalog constructors
    # ------------------------------------------------------------------

    @classmethod
    def ball(cls, dim: int) -> "StarBody":
        return cls(dim, "euclidean-ball",
                   lambda X: np.linalg.norm(X, axis=1),
                   convex=True, smooth_gauge=True)

    @classmethod
    def ellipsoid(cls, matrix) -> "StarBody":
        A = np.asarray(matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InputError("ellipsoid matrix must be square")
        if np.max(np.abs(A - A.T)) > 1e-12 * (1.0 + np.max(np.abs(A))):
            raise InputError("ellipsoid matrix must be symmetric")
        try:
            np.linalg.cholesky(A)
        except np.linalg.LinAlgError:
            raise InputError("ellipsoid matrix must be positive definite") from None
        A = 0.5 * (A + A.T)

        def gauge(X, A=A):
            return np.sqrt(np.einsum("ni,ij,nj->n", X, A, X))

        return cls(A.shape[0], "ellipsoid", gauge, params={"matrix": A},
                   convex=True, smooth_gauge=True)

    @classmethod
    def lp_ball(cls, p: float, dim: int) -> "StarBody":
        if p < 1:
            raise InputError(f"lp-ball requires p >= 1, got {p}")

        def gauge(X, p=float(p)):
            return np.sum(np.abs(X) ** p, axis=1) ** (1.0 / p)

        return cls(dim, "lp-ball", gauge, params={"p": float(p)}, convex=True,
                   smooth_gauge=p >= 2.0)

    @classmethod
    def cube(cls, dim: int) -> "StarBody":
        """[-1, 1]^dim as a slab polytope with identity rows."""
        return cls.slab_polytope(np.eye(dim))

    @classmethod
    def slab_polytope(cls, rows) -> "StarBody":
        W = np.atleast_2d(np.asarray(rows, dtype=float))
        n = W.shape[1]
        if np.linalg.matrix_rank(W) < n:
            raise InputError("slab rows must span R^n, otherwise the body is unbounded")

        def gauge(X, W=W):
            return np.max(np.abs(X @ W.T), axis=1)

        return cls(n, "slab-polytope", gauge, params={"rows": W}, convex=True)

    @classmethod
    def complex_lp_ball(cls, p: float, complex_dim: int) -> "StarBody":
        if p < 1:
            raise InputError(f"complex-lp-ball requires p >= 1, got {p}")
        if complex_dim < 1:
            raise InputError("complex dimension must be >= 1")

        def gauge(X, p=float(p)):
            moduli = np.linalg.norm(X.reshape(X.shape[0], -1, 2), axis=2)
            return np.sum(moduli ** p, axis=1) ** (1.0 / p)

        return cls(2 * complex_dim, "complex-lp-ball", gauge,
                   params={"p": float(p), "complex_dim": complex_dim}, convex=True,
                   smooth_gauge=p >= 2.0)

    @classmethod
    def scaled(cls, inner: "StarBody", scale: float) -> "StarBody":
        if scale <= 0:
            raise InputError(f"scale must be positive, got {scale}")

        def gauge(X, inner=inner, s=float(scale)):
            return inner.gauge(X) / s

        return cls(inner.dim, "scaled", gauge,
                   params={"inner": inner, "scale": float(scale)}, convex=inner.convex,
                   smooth_gauge=inner.smooth_gauge)

    @classmethod
    def rtheta_symmetrized(cls, inner: "StarBody", theta_nodes: int = 64) -> "StarBody":
        """Body K_c with ||x||^(-2) the theta-average of ||R_theta x||^(-2).

        The uniform theta grid integrates periodic trigonometric
        polynomials of degree < theta_nodes exactly.
        """
        if inner.dim % 2 != 0:
            raise InputError("rtheta symmetrization needs an even-dimensional body")
        if theta_nodes < 4:
            raise InputError("theta_nodes must be >= 4")
        thetas = 2.0 * math.pi * np.arange(theta_nodes) / theta_nodes
        cos_t, sin_t = np.cos(thetas), np.sin(thetas)

        def gauge(X, inner=inner, cos_t=cos_t, sin_t=sin_t):
            N, n = X.shape
            T = len(cos_t)
            P = X.reshape(N, -1, 2)
            acc = np.zeros(N)
            # rotate against all theta nodes in memory-bounded blocks and
            # hit the inner gauge with one big batch per block
            block = max(1, (1 << 21) // max(1, N * n))
            for start in range(0, T, block):
                c = cos_t[start:start + block][:, None, None]
                s = sin_t[start:start + block][:, None, None]
                rot = np.empty((c.shape[0], N, P.shape[1], 2))
                rot[..., 0] = c * P[None, ..., 0] - s * P[None, ..., 1]
                rot[..., 1] = s * P[None, ..., 0] + c * P[None, ..., 1]
                g = inner.gauge(rot.reshape(-1, n)).reshape(c.shape[0], N)
                acc += np.sum(1.0 / np.maximum(g * g, 1e-300), axis=0)
            out = 1.0 / np.sqrt(acc / T)
            out[np.linalg.norm(X, axis=1) == 0.0] = 0.0
            return out

        return cls(inner.dim, "rtheta-symmetrized", gauge,
                   params={"inner": inner, "theta_nodes": int(theta_nodes)},
                   convex=False, smooth_gauge=inner.smooth_gauge)

    @classmethod
    def custom(cls, dim: int, gauge_fn, convex: bool = False,
               vectorized: bool = True) -> "StarBody":
        if vectorized:
            fn = gauge_fn
        else:
            def fn(X, g=gauge_fn):
                return np.array([float(g(row)) for row in X])
        return cls(dim, "custom", fn, params={}, convex=convex)

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------

    def gauge(self, x):
        """Minkowski functional ||x||_K; accepts (n,) or (N, n)."""
        X, single = _as_batch(x, self.dim)
        g = np.asarray(self._gauge_fn(X), dtype=float)
        return float(g[0]) if single else g

    def radial(self, theta):
        """Radial function rho_K = 1/||theta||_K (the radius in a direction)."""
        X, single = _as_batch(theta, self.dim)
        if np.any(np.linalg.norm(X, axis=1) == 0.0):
            raise InputError("radial function is undefined at the zero vector")
        g = np.asarray(self._gauge_fn(X), dtype=float)
        r = 1.0 / g
        return float(r[0]) if single else r

    def contains(self, x, tol: float = DEFAULT_CONTAINS_TOL):
        """Membership test ||x||_K <= 1 + tol."""
        X, single = _as_batch(x, self.dim)
        inside = np.asarray(self._gauge_fn(X), dtype=float) <= 1.0 + tol
        return bool(inside[0]) if single else inside

    def circumradius(self) -> float:
        """Exact (catalog) or sampled circumscribed radius max rho_K."""
        if self.kind == "euclidean-ball":
            return 1.0
        if self.kind == "ellipsoid":
            return 1.0 / math.sqrt(np.linalg.eigvalsh(self.params["matrix"])[0])
        if self.kind == "lp-ball":
            p = self.params["p"]
            return self.dim ** max(0.0, 0.5 - 1.0 / p)
        if self.kind == "complex-lp-ball":
            p, nc = self.params["p"], self.params["complex_dim"]
            return nc ** max(0.0, 0.5 - 1.0 / p)
        if self.kind == "slab-polytope":
            W = self.params["rows"]
            G = W @ W.T
            if W.shape[0] == W.shape[1] and np.max(np.abs(G - np.diag(np.diag(G)))) < 1e-12:
                return math.sqrt(float(np.sum(1.0 / np.diag(G))))
            return self._sampled_circumradius()
        if self.kind == "scaled":
            return self.params["scale"] * self.params["inner"].circumradius()
        if self.kind == "rtheta-symmetrized":
            # rho_Kc(u)^2 is the theta-mean of rho_inner^2, so it cannot
            # exceed the inner circumradius
            return self.params["inner"].circumradius()
        return self._sampled_circumradius()

    def _sampled_circumradius(self, samples: int = 8192, seed: int = 0) -> float:
        rng = np.random.Generator(np.random.Philox(key=seed))
        U = rng.standard_normal((samples, self.dim))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        return 1.05 * float(np.max(1.0 / self.gauge(U)))

    def __repr__(self):
        return f"StarBody(kind={self.kind!r}, dim={self.dim})"


# ----------------------------------------------------------------------
# module-level operation wrappers
# ----------------------------------------------------------------------

def minkowski_functional(body: StarBody, x) -> float:
    return body.gauge(x)


def radial_function(body: StarBody, theta) -> float:
    return body.radial(theta)


def contains(body: StarBody, x, tol: float = DEFAULT_CONTAINS_TOL) -> bool:
    return body.contains(x, tol=tol)


def check_star_body(body: StarBody, samples: int = 1000, seed: int = 0) -> dict:
    """Sampled star-body invariant deviations, advisory for custom gauges.

    Returns max absolute deviations for homogeneity and origin symmetry,
    the min gauge over nonzero samples (positivity), and the worst
    midpoint-convexity violation (only meaningful for convex bodies).
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    X = rng.standard_normal((samples, body.dim))
    Y = rng.standard_normal((samples, body.dim))
    lam = rng.uniform(-3.0, 3.0, size=samples)
    g = body.gauge(X)
    homogeneity = float(np.max(np.abs(body.gauge(X * lam[:, None])
                                      - np.abs(lam) * g) / (1.0 + g)))
    symmetry = float(np.max(np.abs(body.gauge(-X) - g)))
    positivity = float(np.min(g))
    mid = body.gauge((X + Y) / 2.0) - (g + body.gauge(Y)) / 2.0
    convexity = float(np.max(mid / (1.0 + np.abs(g))))
    return {"homogeneity": homogeneity, "symmetry": symmetry,
            "min_gauge": positivity, "convexity_violation": convexity}


# ----------------------------------------------------------------------
# structured-text (JSON-compatible) body specs
# ----------------------------------------------------------------------

_SHORTHANDS = {
    "ball": lambda dim: StarBody.ball(dim),
    "cube": lambda dim: StarBody.cube(dim),
    "l1-ball": lambda dim: StarBody.lp_ball(1.0, dim),
    "l4-ball": lambda dim: StarBody.lp_ball(4.0, dim),
    "ellipsoid": lambda dim: StarBody.ellipsoid(np.diag(np.arange(1.0, dim + 1.0))),
    "complex-l1": lambda dim: StarBody.complex_lp_ball(1.0, _half(dim)),
    "complex-l2": lambda dim: StarBody.complex_lp_ball(2.0, _half(dim)),
    "complex-l4": lambda dim: StarBody.complex_lp_ball(4.0, _half(dim)),
}


def _half(dim: int) -> int:
    if dim % 2 != 0:
        raise InputError(f"complex bodies need even ambient dimension, got {dim}")
    return dim // 2


def body_from_spec(doc, dim: int | None = None) -> StarBody:
    """Build a catalog body from a JSON-style document or shorthand name.

    Examples: {"kind": "lp-ball", "p": 1.0, "dim": 5},
    {"kind": "ellipsoid", "matrix": [[1, 0], [0, 4]]}, "cube" (with dim).
    """
    if isinstance(doc, str):
        if doc not in _SHORTHANDS:
            raise InputError(f"unknown body shorthand {doc!r}")
        if dim is None:
            raise InputError(f"body shorthand {doc!r} needs an explicit dimension")
        return _SHORTHANDS[doc](dim)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputError("body spec must be a shorthand string or a dict with a 'kind'")
    kind = doc["kind"]
    d = doc.get("dim", dim)
    if kind == "euclidean-ball":
        return StarBody.ball(_need_dim(d))
    if kind == "ellipsoid":
        return StarBody.ellipsoid(doc["matrix"])
    if kind == "lp-ball":
        return StarBody.lp_ball(doc["p"], _need_dim(d))
    if kind == "cube":
        return StarBody.cube(_need_dim(d))
    if kind == "slab-polytope":
        return StarBody.slab_polytope(doc["rows"])
    if kind == "complex-lp-ball":
        nc = doc.get("complex_dim")
        if nc is None:
            nc = _half(_need_dim(d))
        return StarBody.complex_lp_ball(doc["p"], nc)
    if kind == "scaled":
        return StarBody.scaled(body_from_spec(doc["inner"], dim=d), doc["scale"])
    if kind == "rtheta-symmetrized":
        from .complexgeom import rtheta_symmetrize
        return rtheta_symmetrize(body_from_spec(doc["inner"], dim=d),
                                 theta_nodes=doc.get("theta_nodes", 64))
    raise InputError(f"unknown body kind {kind!r}")


def _need_dim(d) -> int:
    if d is None:
        raise InputError("body spec needs a dimension")
    return int(d)
