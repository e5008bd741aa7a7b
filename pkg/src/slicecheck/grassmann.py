"""Subspaces of R^n, Haar sampling, and derivative-free maximization of
section functionals over the Grassmannian and over unit directions.

The search is deliberately simple: multistart from Haar-random frames,
then a local phase that perturbs one frame column at a time by a Givens
rotation toward a random direction orthogonal to the current span.  The
step halves after a run of rejections and the restart stops once the step
underflows or the evaluation budget runs out.  Restarts own independent
counter-based generators, so the result is reproducible and independent
of execution order; ties break toward the lower restart index.

A budgeted search only ever under-estimates the true maximum.  The
verifiers put the maximum on the side of their inequalities where an
underestimate makes the check harder, never unsound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "Subspace",
    "haar_sample",
    "SearchConfig",
    "MaxSectionResult",
    "maximize_over_grassmann",
    "maximize_over_sphere",
    "max_section",
    "max_complex_section",
]

_ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class Subspace:
    """An (n-k)-dimensional subspace of R^n held as an orthonormal frame."""

    frame: np.ndarray  # (n, n-k), orthonormal columns

    def __post_init__(self):
        F = np.asarray(self.frame, dtype=float)
        if F.ndim != 2 or not 1 <= F.shape[1] <= F.shape[0]:
            raise InputError(f"subspace frame has invalid shape {F.shape}")
        dev = np.max(np.abs(F.T @ F - np.eye(F.shape[1])))
        if dev > _ORTHO_TOL:
            raise InputError(f"subspace frame not orthonormal (deviation {dev:.3e})")
        object.__setattr__(self, "frame", F)

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def sub_dim(self) -> int:
        return self.frame.shape[1]

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.sub_dim

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.T

    @classmethod
    def coordinate(cls, n: int, sub_dim: int) -> "Subspace":
        """span{e_1, ..., e_sub_dim} in R^n."""
        return cls(np.eye(n)[:, :sub_dim])

    @classmethod
    def from_normal(cls, xi) -> "Subspace":
        """The hyperplane orthogonal to a nonzero vector xi."""
        v = np.asarray(xi, dtype=float)
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            raise InputError("hyperplane normal must be nonzero")
        return cls(_orthocomplement_frame(v[:, None] / nrm))


def _orthocomplement_frame(V: np.ndarray) -> np.ndarray:
    """Orthonormal frame of the complement of span(V), V orthonormal n x c.

    Deterministic largest-pivot Gram-Schmidt over the standard basis.
    """
    n, c = V.shape
    cols = [V[:, j] for j in range(c)]
    out = []
    residual = np.eye(n) - V @ V.T
    basis_residuals = residual.copy()
    for _ in range(n - c):
        norms = np.linalg.norm(basis_residuals, axis=0)
        j = int(np.argmax(norms))
        v = basis_residuals[:, j] / norms[j]
        # re-orthogonalize once for numerical hygiene
        for u in cols + out:
            v = v - np.dot(u, v) * u
        v /= np.linalg.norm(v)
        out.append(v)
        basis_residuals = basis_residuals - np.outer(v, v @ basis_residuals)
    return np.column_stack(out)


def haar_sample(n: int, k: int, seed) -> Subspace:
    """Rotation-invariant random (n-k)-subspace of R^n.

    QR of a Gaussian matrix with the sign convention diag(R) > 0, which
    makes the draw a measurable function of the Gaussian and hence
    deterministic per seed.  ``seed`` may be an int or a Generator.
    """
    if not 1 <= k <= n - 1:
        raise InputError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    rng = _as_generator(seed)
    return Subspace(_haar_frame(rng, n, n - k))


def _haar_frame(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    G = rng.standard_normal((n, d))
    Q, R = np.linalg.qr(G)
    signs = np.sign(np.diag(R))
    signs[signs == 0.0] = 1.0
    return Q * signs


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(key=int(seed) & (2 ** 64 - 1)))


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    key = np.array([int(seed) & (2 ** 64 - 1), restart], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


# ----------------------------------------------------------------------
# multistart local search
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    """Budget and schedule of the multistart Grassmannian search."""

    restarts: int = 32
    evals: int = 500
    seed: int = 42
    step_init: float = 0.5
    step_min: float = 1e-4
    reject_limit: int = 10

    def __post_init__(self):
        if self.restarts < 1 or self.evals < 1:
            raise InputError("search needs at least one restart and one evaluation")


@dataclass
class MaxSectionResult:
    """Best subspace/direction found, its value, and the search trace.

    ``best_value`` is a certified lower bound for the true maximum (the
    search only ever reports values it actually evaluated).
    """

    best_subspace: object
    best_value: float
    trace: list = field(default_factory=list)
    evaluations: int = 0
    near_optima: list = field(default_factory=list)

    @property
    def witness_frame(self) -> np.ndarray:
        f = getattr(self.best_subspace, "frame", self.best_subspace)
        return np.asarray(f)


def _perturb_frame(F: np.ndarray, rng: np.random.Generator, step: float) -> np.ndarray:
    """Rotate one frame column toward a random direction orthogonal to the span."""
    n, d = F.shape
    j = int(rng.integers(d))
    v = rng.standard_normal(n)
    v -= F @ (F.T @ v)
    nrm = np.linalg.norm(v)
    if nrm < 1e-12:  # frame spans everything; nothing to rotate into
        return F
    v /= nrm
    angle = step * rng.standard_normal()
    G = F.copy()
    G[:, j] = math.cos(angle) * F[:, j] + math.sin(angle) * v
    # first-order drift cleanup keeps the frame orthonormal over long runs
    Q, R = np.linalg.qr(G)
    signs = np.sign(np.diag(R))
    signs[signs == 0.0] = 1.0
    return Q * signs


def _perturb_direction(x: np.ndarray, rng: np.random.Generator, step: float) -> np.ndarray:
    v = rng.standard_normal(x.size)
    v -= np.dot(v, x) * x
    nrm = np.linalg.norm(v)
    if nrm < 1e-12:
        return x
    v /= nrm
    angle = step * rng.standard_normal()
    y = math.cos(angle) * x + math.sin(angle) * v
    return y / np.linalg.norm(y)


def _multistart(objective, start_fn, perturb_fn, config: SearchConfig) -> MaxSectionResult:
    best_val = -math.inf
    best_state = None
    best_restart = -1
    trace = []
    finals = []
    total_evals = 0
    for r in range(config.restarts):
        rng = _restart_rng(config.seed, r)
        state = start_fn(rng)
        val = float(objective(state))
        total_evals += 1
        evals = 1
        step = config.step_init
        rejects = 0
        while evals < config.evals and step >= config.step_min:
            cand = perturb_fn(state, rng, step)
            cv = float(objective(cand))
            total_evals += 1
            evals += 1
            if cv > val:
                state, val = cand, cv
                rejects = 0
                trace.append((total_evals, val))
            else:
                rejects += 1
                if rejects >= config.reject_limit:
                    step *= 0.5
                    rejects = 0
        finals.append((val, r, state))
        if val > best_val:
            best_val, best_state, best_restart = val, state, r
    near = [(v, r) for v, r, _ in finals
            if v >= best_val - 1e-9 * max(1.0, abs(best_val))]
    return MaxSectionResult(best_subspace=best_state, best_value=best_val,
                            trace=trace, evaluations=total_evals,
                            near_optima=sorted(near, key=lambda t: t[1]))


def maximize_over_grassmann(objective: Callable[[Subspace], float], n: int, k: int,
                            config: SearchConfig) -> MaxSectionResult:
    """Maximize a functional of (n-k)-subspaces by multistart local search."""
    if not 1 <= k <= n - 1:
        raise InputError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    d = n - k

    def start(rng):
        return Subspace(_haar_frame(rng, n, d))

    def perturb(sub, rng, step):
        return Subspace(_perturb_frame(sub.frame, rng, step))

    return _multistart(objective, start, perturb, config)


def maximize_over_sphere(objective: Callable[[np.ndarray], float], dim: int,
                         config: SearchConfig) -> MaxSectionResult:
    """Maximize a functional of unit vectors in R^dim."""
    if dim < 2:
        raise InputError("direction search needs dim >= 2")

    def start(rng):
        v = rng.standard_normal(dim)
        return v / np.linalg.norm(v)

    return _multistart(objective, start, _perturb_direction, config)


# ----------------------------------------------------------------------
# section-measure objectives
# ----------------------------------------------------------------------

def max_section(body, density, k: int, spec, config: SearchConfig) -> MaxSectionResult:
    """max over H in Gr_(n-k) of the density mass of body-cap-H."""
    from .sections import section_measure

    def objective(sub: Subspace) -> float:
        return section_measure(body, density, sub, spec).value

    return maximize_over_grassmann(objective, body.dim, k, config)


def max_complex_section(body, density, spec, config: SearchConfig) -> MaxSectionResult:
    """max over unit xi of the density mass of body-cap-H_xi.

    The body must be R_theta-invariant; the caller is expected to have
    checked that (the objective is then well defined on complex lines).
    """
    from .complexgeom import complex_hyperplane_frame
    from .sections import section_measure

    if body.dim % 2 != 0:
        raise InputError("complex sections need an even ambient dimension")

    def objective(xi: np.ndarray) -> float:
        return section_measure(body, density, complex_hyperplane_frame(xi), spec).value

    return maximize_over_sphere(objective, body.dim, config)
