"""Sandwiching ellipsoids: for a symmetric convex body L, an ellipsoid K
with (1/s) K subset L subset K and s <= sqrt(n).

The slicing proofs only need existence of SOME sandwich with ratio at
most sqrt(n), and every catalog body admits one in closed form, so no
inscribed-ellipsoid program is solved:

* ellipsoids are their own sandwich (ratio 1);
* lp balls sit between the extreme-radius Euclidean balls, giving ratio
  n^|1/2 - 1/p| (= sqrt(n) at p = 1, 1 at p = 2);
* orthogonal slab polytopes (the cube) use circumscribed radius
  sqrt(sum 1/|a_i|^2) against inscribed radius 1/max|a_i|;
* complex lp balls get the same ball sandwich with n replaced by the
  complex dimension, so the ratio is well under the sqrt(2n) the complex
  argument allows, and a ball is R_theta-invariant, so symmetrizing the
  sandwich leaves it fixed.

Anything else falls back to a sampled inertia fit that is explicitly
uncertified; verifiers refuse uncertified sandwiches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import StarBody
from .errors import InputError

__all__ = ["SandwichEllipsoid", "sandwich_ellipsoid", "verify_sandwich", "SandwichCheck"]


@dataclass(frozen=True)
class SandwichEllipsoid:
    """Ellipsoid {x : x^T A x <= 1} with (1/ratio) K subset L subset K."""

    shape: np.ndarray  # SPD matrix A
    ratio: float
    certified: bool

    def __post_init__(self):
        A = np.asarray(self.shape, dtype=float)
        try:
            np.linalg.cholesky(A)
        except np.linalg.LinAlgError:
            raise InputError("sandwich shape matrix must be SPD") from None
        object.__setattr__(self, "shape", A)
        if self.ratio < 1.0 - 1e-12:
            raise InputError("sandwich ratio below 1 is impossible")

    def body(self) -> StarBody:
        return StarBody.ellipsoid(self.shape)

    @property
    def dim(self) -> int:
        return self.shape.shape[0]


def sandwich_ellipsoid(body: StarBody) -> SandwichEllipsoid:
    """Closed-form sandwich for catalog convex bodies.

    The returned K always CONTAINS the body; ratio s is the guaranteed
    shrink factor with (1/s) K inside.
    """
    if not body.convex:
        raise InputError(f"sandwich requires a convex body, got kind {body.kind!r}")
    n = body.dim
    kind = body.kind

    if kind == "euclidean-ball":
        return SandwichEllipsoid(shape=np.eye(n), ratio=1.0, certified=True)
    if kind == "ellipsoid":
        return SandwichEllipsoid(shape=body.params["matrix"].copy(), ratio=1.0,
                                 certified=True)
    if kind == "scaled":
        inner = sandwich_ellipsoid(body.params["inner"])
        s = body.params["scale"]
        return SandwichEllipsoid(shape=inner.shape / (s * s), ratio=inner.ratio,
                                 certified=inner.certified)
    if kind == "lp-ball":
        p = body.params["p"]
        R = n ** max(0.0, 0.5 - 1.0 / p)       # circumscribed ball radius
        ratio = n ** abs(0.5 - 1.0 / p)
        return SandwichEllipsoid(shape=np.eye(n) / (R * R), ratio=ratio, certified=True)
    if kind == "complex-lp-ball":
        p, nc = body.params["p"], body.params["complex_dim"]
        R = nc ** max(0.0, 0.5 - 1.0 / p)
        ratio = nc ** abs(0.5 - 1.0 / p)
        return SandwichEllipsoid(shape=np.eye(n) / (R * R), ratio=ratio, certified=True)
    if kind == "slab-polytope":
        W = body.params["rows"]
        G = W @ W.T
        orthogonal = (W.shape[0] == W.shape[1]
                      and np.max(np.abs(G - np.diag(np.diag(G)))) < 1e-12)
        if orthogonal:
            # the box {|<w_j, x>| <= 1} sits inside {sum <w_j,x>^2 <= n}
            # with corners on the boundary; shrinking by sqrt(n) fits back
            # inside, so the ratio is exactly sqrt(n) for ANY orthogonal
            # slab set, not just the cube
            return SandwichEllipsoid(shape=(W.T @ W) / n, ratio=math.sqrt(n),
                                     certified=True)
        return _numeric_sandwich(body)
    return _numeric_sandwich(body)


def _numeric_sandwich(body: StarBody, samples: int = 4096, seed: int = 0) -> SandwichEllipsoid:
    """Inertia-based circumscribed ellipsoid from boundary samples.

    Uncertified: the reported ratio is the sampled max/min gauge spread,
    not a guarantee.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    U = rng.standard_normal((samples, body.dim))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    B = U / body.gauge(U)[:, None]          # boundary points
    M = (B.T @ B) / samples
    A0 = np.linalg.inv(M)
    scale = float(np.max(np.einsum("ni,ij,nj->n", B, A0, B)))
    # pad outward: the body can poke past the sampled hull between samples
    A = A0 / (scale * (1.0 + 1e-3))
    ell = StarBody.ellipsoid(A)
    ratio = float(np.max(body.gauge(U) / ell.gauge(U))) * (1.0 + 1e-3)
    return SandwichEllipsoid(shape=A, ratio=ratio, certified=False)


@dataclass(frozen=True)
class SandwichCheck:
    passed: bool
    max_violation: float
    samples: int
    tol: float


def verify_sandwich(body: StarBody, ellipsoid: SandwichEllipsoid,
                    samples: int = 10_000, tol: float = 1e-9,
                    seed: int = 7) -> SandwichCheck:
    """Sampled containment check rho_L <= rho_K <= ratio * rho_L.

    Violations are measured relative to rho_K; the worst one over the
    sampled directions is reported.
    """
    if ellipsoid.dim != body.dim:
        raise InputError("sandwich dimension mismatch")
    rng = np.random.Generator(np.random.Philox(key=seed))
    U = rng.standard_normal((samples, body.dim))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    rho_L = 1.0 / body.gauge(U)
    rho_K = 1.0 / ellipsoid.body().gauge(U)
    outer = (rho_L - rho_K) / rho_K                     # > 0 when L pokes out of K
    inner = (rho_K / ellipsoid.ratio - rho_L) / rho_K   # > 0 when K/s pokes out of L
    worst = float(max(np.max(outer), np.max(inner)))
    return SandwichCheck(passed=worst <= tol, max_violation=worst,
                         samples=samples, tol=tol)
