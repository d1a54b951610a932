"""Volumes of balls and cubes, spherical caps, and the area-based direction bound.

The bound on the number of eps-almost orthogonal directions in R^n comes
from the cap of angular radius arccos(eps)/2 around each unit vector: two
directions are eps-almost orthogonal iff these caps (and the ones around
the antipodes) are disjoint, so the count is at most the reciprocal of
twice the cap's area fraction.  All of it is carried in log10 because the
values run past 1e700.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError
from .specialfn import log_gamma, log_reg_inc_beta

LOG10_MATERIALIZE_CUTOFF = 300.0
_LN10 = math.log(10.0)


@dataclass(frozen=True)
class CapGeometry:
    """Cap parametrisation for a threshold eps.

    alpha is the angle between two directions at the threshold, half_angle
    the angular radius of the cap, h the cap height on the unit sphere and
    x_param = 1 - cos(half_angle)^2 = 2h - h^2 the Beta-function argument.
    """

    alpha: float
    half_angle: float
    h: float
    x_param: float


@dataclass(frozen=True)
class CapBoundResult:
    n: int
    eps: float
    log10_bound: float
    bound: Optional[float] = None


def _check_dim(n, minimum=1):
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise DomainError(f"dimension must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _check_eps(eps):
    eps = float(eps)
    if not math.isfinite(eps) or eps < 0.0 or eps >= 1.0:
        raise DomainError(f"eps must lie in [0, 1), got {eps!r}")
    return eps


def _check_pos(name, value):
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


def ball_volume_log(n, r=1.0):
    """ln V_n(r) with V_n(r) = pi^(n/2) / Gamma(n/2 + 1) * r^n."""
    n = _check_dim(n)
    r = _check_pos("r", r)
    return 0.5 * n * math.log(math.pi) - log_gamma(0.5 * n + 1.0) + n * math.log(r)


def ball_volume_stirling_log(n, r=1.0):
    """ln of the Stirling form (1/sqrt(n pi)) (2 pi e / n)^(n/2) r^n of V_n(r)."""
    n = _check_dim(n)
    r = _check_pos("r", r)
    return (
        -0.5 * math.log(n * math.pi)
        + 0.5 * n * math.log(2.0 * math.pi * math.e / n)
        + n * math.log(r)
    )


def radius_for_volume(n, volume):
    """Approximate radius R_n(V) of the n-ball with volume V (Stirling inversion)."""
    n = _check_dim(n)
    volume = _check_pos("volume", volume)
    log_r = (
        math.log(math.pi * n) / (2.0 * n)
        + 0.5 * math.log(n / (2.0 * math.pi * math.e))
        + math.log(volume) / n
    )
    return math.exp(log_r)


def cube_diameter(side, n):
    n = _check_dim(n)
    side = _check_pos("side", side)
    return side * math.sqrt(n)


def corner_ambient_fraction(n):
    """log10 of the share of ambient space the cube occupies at a vertex, i.e. log10(2^-n)."""
    n = _check_dim(n)
    return -n * math.log10(2.0)


def cap_geometry(eps):
    eps = _check_eps(eps)
    alpha = math.acos(eps)
    half = 0.5 * alpha
    c = math.cos(half)
    h = 1.0 - c
    # 1 - c^2 written as sin^2 to avoid cancellation near eps -> 1
    x_param = math.sin(half) ** 2
    return CapGeometry(alpha=alpha, half_angle=half, h=h, x_param=x_param)


def _log_cap_fraction(n, x_param):
    # ln of 1/2 * I_x((n-1)/2, 1/2)
    return math.log(0.5) + log_reg_inc_beta(x_param, 0.5 * (n - 1), 0.5)


def cap_area_fraction(n, eps):
    """Fraction of the unit sphere in R^n covered by one cap of angular radius arccos(eps)/2."""
    n = _check_dim(n, minimum=2)
    geom = cap_geometry(eps)
    return math.exp(_log_cap_fraction(n, geom.x_param))


def area_bound(n, eps):
    """Area-based upper bound I_x((n-1)/2, 1/2)^-1 on eps-almost orthogonal directions."""
    n = _check_dim(n, minimum=2)
    eps = _check_eps(eps)
    geom = cap_geometry(eps)
    log10_bound = -log_reg_inc_beta(geom.x_param, 0.5 * (n - 1), 0.5) / _LN10
    bound = None
    if log10_bound <= LOG10_MATERIALIZE_CUTOFF:
        bound = 10.0 ** log10_bound
    return CapBoundResult(n=n, eps=eps, log10_bound=log10_bound, bound=bound)


def cap_area_profile(n, h_grid):
    """Cap area fraction 1/2 I_{2h-h^2}((n-1)/2, 1/2) for every cap height in ``h_grid``."""
    n = _check_dim(n, minimum=2)
    out = []
    for h in h_grid:
        h = float(h)
        if not math.isfinite(h) or h < 0.0 or h > 1.0:
            raise DomainError(f"cap height must lie in [0, 1], got {h!r}")
        x = min(1.0, 2.0 * h - h * h)
        out.append((h, math.exp(_log_cap_fraction(n, x))))
    return out


def default_h_grid(points=401):
    return [i / (points - 1) for i in range(points)]
