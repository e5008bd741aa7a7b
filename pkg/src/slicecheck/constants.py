"""Ball volumes, sphere measures, and the dimensional constants of the
slicing inequalities.

Everything here is a closed-form Gamma-function expression:

    vol(B_2^n)   = pi^(n/2) / Gamma(n/2 + 1)
    |S^(n-1)|    = n * vol(B_2^n) = 2 pi^(n/2) / Gamma(n/2)
    c(n, k)      = vol(B_2^n)^((n-k)/n) / vol(B_2^(n-k))      in (0, 1)
    d(n)         = vol(B_2^(2n))^((n-1)/n) / vol(B_2^(2n-2))  in (0, 1)

c(n, 1) is the hyperplane constant of the one-codimensional inequality;
d(n) is its complex analog and coincides with c(2n, 2).

``math.gamma`` (Lanczos under the hood) is exact to ~1e-13 relative for
the n <= 60 range these verifiers run at.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError

__all__ = [
    "ball_volume",
    "sphere_surface",
    "c_nk",
    "d_n",
    "SlicingConstants",
    "slicing_constants",
]


def ball_volume(n: int) -> float:
    """Volume of the unit Euclidean ball in R^n."""
    if n < 1:
        raise InputError(f"ball_volume requires n >= 1, got {n}")
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def sphere_surface(n: int) -> float:
    """Surface measure |S^(n-1)| of the unit sphere in R^n; |S^0| = 2."""
    if n < 1:
        raise InputError(f"sphere_surface requires n >= 1, got {n}")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def c_nk(n: int, k: int) -> float:
    """The codimension-k slicing constant c(n, k), strictly inside (0, 1)."""
    if not 1 <= k <= n - 1:
        raise InputError(f"c_nk requires 1 <= k <= n-1, got n={n}, k={k}")
    return ball_volume(n) ** ((n - k) / n) / ball_volume(n - k)


def d_n(n: int) -> float:
    """Complex slicing constant d(n) for complex dimension n >= 2.

    Equals c(2n, 2): the real and complex ratios share one formula.
    """
    if n < 2:
        raise InputError(f"d_n requires complex dimension n >= 2, got {n}")
    return ball_volume(2 * n) ** ((n - 1) / n) / ball_volume(2 * n - 2)


@dataclass(frozen=True)
class SlicingConstants:
    """Bundle of the constants entering one theorem instance.

    ``factor`` is the full convex-body slicing factor
    n^(k/2) * (n/(n-k)) * c(n, k); ``km_factor`` drops the n^(k/2)
    (the generalized-intersection-body form).
    """

    n: int
    k: int
    ball_vol_n: float
    sphere_vol_n: float
    c_nk: float
    factor: float

    @property
    def km_factor(self) -> float:
        return (self.n / (self.n - self.k)) * self.c_nk


def slicing_constants(n: int, k: int) -> SlicingConstants:
    c = c_nk(n, k)
    return SlicingConstants(
        n=n,
        k=k,
        ball_vol_n=ball_volume(n),
        sphere_vol_n=sphere_surface(n),
        c_nk=c,
        factor=n ** (k / 2.0) * (n / (n - k)) * c,
    )
