"""Independent Monte Carlo estimators for every integral the quadrature
pipeline produces; the ground-truth cross-check.

Rejection sampling, uniform in a box circumscribing the body (exact
catalog circumradius where available), estimating

    int_K f  ~=  vol(box) * mean( f(x) * [x in K] ).

Batches draw from counter-based Philox generators keyed by
(seed, batch index), so estimates are reproducible and independent of
batch scheduling.  Standard errors come straight from the sample variance
of the f * indicator values (binomial for f = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import StarBody
from .densities import Density
from .errors import InputError, UnboundedBodyError
from .grassmann import Subspace

__all__ = ["McEstimate", "mc_body_measure", "mc_section_measure"]

_BATCH = 1 << 17


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def within(self, value: float, n_sigma: float = 3.0) -> bool:
        """Is ``value`` within n_sigma standard errors of the estimate?"""
        return abs(value - self.mean) <= n_sigma * self.std_error


def _batch_rng(seed: int, batch: int) -> np.random.Generator:
    key = np.array([int(seed) & (2 ** 64 - 1), batch], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _accumulate(dim: int, radius: float, samples: int, seed: int, weight_fn):
    """Stream batches of box points through weight_fn and reduce moments."""
    total = 0.0
    total_sq = 0.0
    hits = 0
    done = 0
    batch = 0
    while done < samples:
        m = min(_BATCH, samples - done)
        rng = _batch_rng(seed, batch)
        X = radius * (2.0 * rng.random((m, dim)) - 1.0)
        vals = weight_fn(X)
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
        hits += int(np.count_nonzero(vals))
        done += m
        batch += 1
        if batch == 1 and hits == 0 and samples > _BATCH:
            raise UnboundedBodyError(
                "no acceptances in the first batch; body looks unbounded "
                "or the circumscribing box is degenerate")
    box_vol = (2.0 * radius) ** dim
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return McEstimate(mean=box_vol * mean,
                      std_error=box_vol * math.sqrt(var / samples),
                      samples=samples, seed=seed)


def mc_body_measure(body: StarBody, density: Density, samples: int = 1_000_000,
                    seed: int = 42) -> McEstimate:
    """Rejection-sampling estimate of mu(K) = int_K f."""
    if body.dim != density.dim:
        raise InputError("body and density dimensions disagree")
    R = 1.01 * body.circumradius()

    def weight(X):
        inside = body.gauge(X) <= 1.0
        out = np.zeros(X.shape[0])
        if np.any(inside):
            out[inside] = density.eval(X[inside])
        return out

    return _accumulate(body.dim, R, samples, seed, weight)


def mc_section_measure(body: StarBody, density: Density, subspace,
                       samples: int = 1_000_000, seed: int = 42) -> McEstimate:
    """Rejection-sampling estimate of mu(K cap H) inside the subspace.

    Sampling runs in the (n-k)-dimensional coordinates of the frame; the
    circumscribed radius of the section is at most the body's.
    """
    if body.dim != density.dim:
        raise InputError("body and density dimensions disagree")
    F = np.asarray(getattr(subspace, "frame", subspace), dtype=float)
    if F.ndim == 1:
        F = F[:, None]
    if F.shape[0] != body.dim:
        raise InputError("subspace ambient dimension mismatch")
    d = F.shape[1]
    R = 1.01 * body.circumradius()

    def weight(Y):
        X = Y @ F.T
        inside = body.gauge(X) <= 1.0
        out = np.zeros(X.shape[0])
        if np.any(inside):
            out[inside] = density.eval(X[inside])
        return out

    return _accumulate(d, R, samples, seed, weight)
