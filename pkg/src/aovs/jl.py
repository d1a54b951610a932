"""Johnson-Lindenstrauss bound calculus.

Three questions are answered here:

* how small a target dimension still admits a (1 +- eps) distortion map
  for k points (:func:`jl_min_dimension`);
* how far the cosine of two orthonormal vectors can drift under such a map
  (:func:`cosine_distortion`), and its inverse (:func:`threshold_to_jl_eps`);
* how many t-almost orthogonal vectors the lemma guarantees in R^n
  (:func:`jl_count_bound`, :func:`jl_crossover_dimension`).

``log`` is the natural logarithm throughout.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError

_MATERIALIZE_LN = 300.0 * math.log(10.0)


@dataclass(frozen=True)
class JlConstant:
    """Multiplier c in n > c ln(k) / eps^2.

    ``c`` is ``None`` for the Dasgupta-Gupta form
    n > 4 (eps^2/2 - eps^3/3)^-1 ln(k), which is not a plain multiple of 1/eps^2.
    """

    label: str
    c: Optional[float]

    def coefficient(self, eps):
        """Factor multiplying ln(k) in the dimension bound."""
        if self.c is None:
            return 4.0 / (eps * eps / 2.0 - eps ** 3 / 3.0)
        return self.c / (eps * eps)


JL_CONSTANTS = {
    "8": JlConstant("8", 8.0),
    "16": JlConstant("16", 16.0),
    "20": JlConstant("20", 20.0),
    "200": JlConstant("200", 200.0),
    "dasgupta-gupta": JlConstant("dasgupta-gupta", None),
}
DEFAULT_CONSTANT = JL_CONSTANTS["8"]


def get_constant(label):
    try:
        return JL_CONSTANTS[str(label)]
    except KeyError:
        raise DomainError(
            f"unknown JL constant {label!r}; choose from {', '.join(JL_CONSTANTS)}"
        ) from None


@dataclass(frozen=True)
class JlBoundResult:
    k: int
    eps: float
    n_min: int
    c: JlConstant


@dataclass(frozen=True)
class CosineDistortion:
    eps: float
    lower: float
    upper: float


# How a cosine threshold t is turned into the lemma's distortion eps before
# the count bound ln(N + 1) < n eps^2 / 8 is applied.
#   printed     - the closed form exp((n/8) (2t/(1-t))^2) - 1 taken literally
#   paper-chain - eps = t / 2, the small-t approximation; gives 13 in R^768 at t = 1/3
#   exact       - eps = t / (2 + t), exact inverse of the upper distortion bound
#   lower       - eps = t / (2 - t), inverse of the lower distortion bound;
#                 this is the variant that yields the crossover n = 29748 at t = 0.1
COUNT_VARIANTS = ("printed", "paper-chain", "exact", "lower")


@dataclass(frozen=True)
class JlCountResult:
    n: int
    t: float
    variant: str
    eps: float
    log_count_plus_one: float
    count: Optional[float] = None

    @property
    def guaranteed(self):
        """Whole number of vectors the bound guarantees, when materialised."""
        if self.count is None:
            return None
        return max(0, math.floor(self.count))


def _open_unit(name, value):
    value = float(value)
    if not math.isfinite(value) or value <= 0.0 or value >= 1.0:
        raise DomainError(f"{name} must lie in the open interval (0, 1), got {value!r}")
    return value


def _int_at_least(name, value, minimum):
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def jl_min_dimension(k, eps, c=DEFAULT_CONSTANT):
    """Least integer n strictly above coefficient(eps) * ln(k)."""
    k = _int_at_least("k", k, 2)
    eps = _open_unit("eps", eps)
    if isinstance(c, str):
        c = get_constant(c)
    bound = c.coefficient(eps) * math.log(k)
    return JlBoundResult(k=k, eps=eps, n_min=math.floor(bound) + 1, c=c)


def cosine_distortion(eps):
    eps = _open_unit("eps", eps)
    return CosineDistortion(
        eps=eps, lower=-2.0 * eps / (1.0 + eps), upper=2.0 * eps / (1.0 - eps)
    )


def threshold_to_jl_eps(t):
    """Distortion eps whose upper cosine bound 2 eps / (1 - eps) equals t."""
    t = _open_unit("t", t)
    return t / (2.0 + t)


def variant_eps(t, variant="printed"):
    t = _open_unit("t", t)
    if variant == "printed":
        return 2.0 * t / (1.0 - t)
    if variant == "paper-chain":
        return t / 2.0
    if variant == "exact":
        return t / (2.0 + t)
    if variant == "lower":
        return t / (2.0 - t)
    raise DomainError(f"unknown count variant {variant!r}; choose from {', '.join(COUNT_VARIANTS)}")


def jl_count_bound(n, t, variant="printed", c=DEFAULT_CONSTANT):
    """Count bound N < exp(n / coefficient(eps)) - 1 carried as ln(N + 1).

    With the default constant 8 this is ln(N + 1) = (n / 8) eps^2, where eps
    is derived from the threshold t according to ``variant``.
    """
    n = _int_at_least("n", n, 1)
    eps = variant_eps(t, variant)
    if isinstance(c, str):
        c = get_constant(c)
    if c.c is None and eps >= 1.0:
        raise DomainError(f"variant {variant!r} maps t={t} to eps={eps} >= 1, outside the Dasgupta-Gupta form")
    log_np1 = n / c.coefficient(eps)
    count = None
    if log_np1 < _MATERIALIZE_LN:
        count = math.expm1(log_np1)
    return JlCountResult(
        n=n, t=float(t), variant=variant, eps=eps, log_count_plus_one=log_np1, count=count
    )


def jl_crossover_dimension(t, variant="printed", c=DEFAULT_CONSTANT):
    """Smallest n for which the count bound exceeds n itself.

    The excess ln(N + 1) - ln(n + 1) is convex in n and vanishes at n = 0,
    so the predicate is monotone and an exponential bracket followed by
    bisection finds the threshold.
    """
    _open_unit("t", t)

    def beats(n):
        return jl_count_bound(n, t, variant, c).log_count_plus_one > math.log1p(n)

    if beats(1):
        return 1
    lo, hi = 1, 2
    while not beats(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if beats(mid):
            hi = mid
        else:
            lo = mid
    return hi
