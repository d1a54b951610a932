"""Generators for sets of almost orthogonal unit vectors.

Methods:

``orthonormal``
    A Haar-random orthonormal frame (needs count <= dim).
``random``
    i.i.d. uniform directions (normalised standard normals).
``projection``
    Rows of a Haar-random orthogonal count x count matrix truncated to their
    first ``dim`` coordinates and renormalised.
``energy``
    Projected descent on the repulsion energy sum 1/d^p over the vectors
    together with their antipodes, so that directions rather than points
    repel each other.

``random`` and ``projection`` oversample and greedily prune by default.

Randomness comes exclusively from ``numpy.random.Generator(PCG64(seed))``;
a given seed produces the same vectors on every platform numpy supports.
"""

import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from ._kernels import pair_terms
from .errors import DomainError, NumericError
from .vecset import UnitVectorSet, max_abs_offdiag

METHODS = ("orthonormal", "random", "projection", "energy")
DEFAULT_OVERSAMPLE = 2.0
MAX_PROJECTION_RESAMPLES = 10
MAX_COLLISIONS = 100
MAX_HALVINGS = 20
_COLLISION_COS = 1.0 - 1e-15
_JITTER = 1e-8
_SEED_MAX = 2 ** 64 - 1


def make_rng(seed):
    """Generator for ``seed``; an existing Generator is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed <= _SEED_MAX:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def _check_int(name, value, minimum):
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class GenSpec:
    method: str
    dim: int
    count: int
    seed: int = 0
    oversample: float = DEFAULT_OVERSAMPLE
    # None: prune for random/projection, not for energy/orthonormal
    prune: Optional[bool] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        _check_int("dim", self.dim, 1)
        _check_int("count", self.count, 1)
        make_rng(self.seed)
        if not math.isfinite(self.oversample) or self.oversample < 1.0:
            raise DomainError(f"oversample must be >= 1, got {self.oversample!r}")

    @property
    def pruning(self):
        if self.prune is None:
            return self.method in ("random", "projection")
        return bool(self.prune) and self.method != "orthonormal"

    @property
    def generated_count(self):
        """How many vectors are drawn before pruning back to ``count``."""
        if not self.pruning:
            return self.count
        return max(self.count, math.ceil(self.oversample * self.count))

    def to_dict(self):
        d = asdict(self)
        d["prune"] = self.pruning
        return d


@dataclass(frozen=True)
class EnergyConfig:
    p: float = 8.0
    steps: int = 2000
    step_size: float = 0.01
    record_every: int = 10
    backtrack: bool = True
    # "global": the vector with the largest gradient moves by step_size;
    # "vector": every vector moves by step_size
    normalize: str = "global"
    # return the visited configuration with the smallest max|cos|, not the last
    keep_best: bool = True

    def __post_init__(self):
        if not math.isfinite(self.p) or self.p <= 0:
            raise DomainError(f"energy exponent p must be > 0, got {self.p!r}")
        _check_int("steps", self.steps, 0)
        if not math.isfinite(self.step_size) or self.step_size <= 0:
            raise DomainError(f"step_size must be > 0, got {self.step_size!r}")
        _check_int("record_every", self.record_every, 1)
        if self.normalize not in ("global", "vector"):
            raise DomainError(f"normalize must be 'global' or 'vector', got {self.normalize!r}")

    def to_dict(self):
        return asdict(self)


@dataclass
class GenerationReport:
    spec: GenSpec
    energy_cfg: Optional[EnergyConfig]
    achieved_max_abs_cos: float
    trajectory: Optional[List[Tuple[int, float]]] = None
    elapsed_ms: int = 0

    def to_dict(self):
        return {
            "spec": self.spec.to_dict(),
            "energy_cfg": None if self.energy_cfg is None else self.energy_cfg.to_dict(),
            "achieved_max_abs_cos": self.achieved_max_abs_cos,
            "trajectory": None
            if self.trajectory is None
            else [[int(s), float(v)] for s, v in self.trajectory],
            "elapsed_ms": int(self.elapsed_ms),
        }


# -- sampling -----------------------------------------------------------------


def haar_orthogonal(n, rng):
    """Haar-distributed n x n orthogonal matrix (QR with sign-fixed diagonal)."""
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def _renormalize(x):
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def gen_orthonormal(dim, count, seed=0):
    dim = _check_int("dim", dim, 1)
    count = _check_int("count", count, 0)
    if count > dim:
        raise DomainError(f"cannot place {count} orthonormal vectors in R^{dim}")
    rng = make_rng(seed)
    q = haar_orthogonal(dim, rng)
    # Q is orthogonal, so its rows are an orthonormal basis; renormalising
    # only removes last-bit drift.
    return UnitVectorSet(_renormalize(q[:count]))


def gen_random(dim, count, seed=0):
    dim = _check_int("dim", dim, 1)
    count = _check_int("count", count, 0)
    rng = make_rng(seed)
    x = rng.standard_normal((count, dim))
    norms = np.linalg.norm(x, axis=1)
    for i in np.flatnonzero(norms == 0.0):
        while norms[i] == 0.0:
            x[i] = rng.standard_normal(dim)
            norms[i] = np.linalg.norm(x[i])
    return UnitVectorSet(x / norms[:, None])


def gen_projection(dim, count, seed=0):
    dim = _check_int("dim", dim, 1)
    count = _check_int("count", count, 1)
    rng = make_rng(seed)
    if count <= dim:
        return gen_orthonormal(dim, count, rng)
    for _ in range(MAX_PROJECTION_RESAMPLES + 1):
        q = haar_orthogonal(count, rng)
        head = q[:, :dim]
        norms = np.linalg.norm(head, axis=1)
        if norms.min() >= 1e-12:
            return UnitVectorSet(head / norms[:, None])
    raise NumericError(
        f"projection produced a vanishing row {MAX_PROJECTION_RESAMPLES + 1} times in a row",
        iterations=MAX_PROJECTION_RESAMPLES,
    )


# -- energy minimisation --------------------------------------------------------


@dataclass
class EnergyRun:
    """Everything recorded while minimising the energy."""

    vectors: np.ndarray
    trajectory: List[Tuple[int, float]] = field(default_factory=list)
    log_energy: List[float] = field(default_factory=list)
    steps_taken: int = 0
    collisions: int = 0
    rejected_steps: int = 0


class _Terms:
    """Energy, max|cos| and gradient coefficients at one configuration."""

    __slots__ = ("energy", "max_abs", "coef", "rowsum")

    def __init__(self, v, p, d2_ref):
        self.energy, self.max_abs, self.coef, self.rowsum = pair_terms(v @ v.T, p, d2_ref)

    def descent_direction(self, v):
        # minus the energy gradient (up to a positive factor), projected onto
        # the tangent space of each row
        d = self.rowsum[:, None] * v - self.coef @ v
        d -= np.sum(d * v, axis=1, keepdims=True) * v
        return d


def _resolve_collisions(v, rng, budget):
    """Jitter rows that coincide with another row (or its antipode). Returns the count used."""
    used = 0
    while True:
        g = np.abs(v @ v.T)
        np.fill_diagonal(g, 0.0)
        hits = np.argwhere(np.triu(g >= _COLLISION_COS, k=1))
        if hits.size == 0:
            return used
        for _, j in hits:
            used += 1
            if used > budget:
                raise NumericError(
                    f"energy minimisation hit more than {MAX_COLLISIONS} coincident vectors",
                    iterations=used,
                )
            v[j] += _JITTER * rng.standard_normal(v.shape[1])
            v[j] /= np.linalg.norm(v[j])


def minimize_energy(init, cfg, rng):
    """Projected descent on the antipodal repulsion energy.

    Each step moves the vectors along the tangent descent direction, scaled
    so that the largest per-vector move equals the current step (or, with
    ``cfg.normalize == "vector"``, so that every vector moves by it), and
    renormalises them onto the sphere.  With ``cfg.backtrack`` the step is
    halved (at most 20 times) until the energy decreases and grows back
    towards ``cfg.step_size`` after accepted steps; when no halving helps
    the run stops early.  With ``cfg.keep_best`` the returned vectors are
    the visited configuration with the smallest max|cos|; lower energy does
    not always mean a lower maximum.
    """
    v = np.array(init, dtype=np.float64, copy=True)
    k = v.shape[0]
    if k < 2:
        raise DomainError("energy minimisation needs at least two vectors")
    p = float(cfg.p)
    run = EnergyRun(vectors=v)
    run.collisions += _resolve_collisions(v, rng, MAX_COLLISIONS)

    def reference(t):
        # energies are kept relative to the closest pair so large p cannot overflow
        return max(2.0 - 2.0 * t.max_abs, 1e-300)

    terms = _Terms(v, p, 1.0)
    d2_ref = reference(terms)
    terms = _Terms(v, p, d2_ref)

    def log_energy(t, ref):
        return math.log(t.energy) - (p / 2.0) * math.log(ref)

    run.trajectory.append((0, min(1.0, terms.max_abs)))
    run.log_energy.append(log_energy(terms, d2_ref))
    best_v, best_max = v, terms.max_abs

    step = cfg.step_size
    for it in range(1, cfg.steps + 1):
        d = terms.descent_direction(v)
        dnorm = np.linalg.norm(d, axis=1, keepdims=True)
        if cfg.normalize == "vector":
            d = np.divide(d, dnorm, out=np.zeros_like(d), where=dnorm > 0)
        else:
            top = float(dnorm.max())
            if top == 0.0:
                break
            d /= top

        accepted = False
        for _ in range(MAX_HALVINGS + 1):
            cand = _renormalize(v + step * d)
            cand_terms = _Terms(cand, p, d2_ref)
            if not cfg.backtrack:
                if not math.isfinite(cand_terms.energy):
                    run.collisions += _resolve_collisions(
                        cand, rng, MAX_COLLISIONS - run.collisions
                    )
                    d2_ref = 1.0
                    cand_terms = _Terms(cand, p, d2_ref)
                accepted = True
                break
            if math.isfinite(cand_terms.energy) and cand_terms.energy < terms.energy:
                accepted = True
                break
            step *= 0.5
            run.rejected_steps += 1

        if not accepted:
            break
        v = cand
        terms = cand_terms
        if not 1e-200 < terms.energy < 1e200:
            d2_ref = reference(terms)
            terms = _Terms(v, p, d2_ref)
        run.steps_taken = it
        if terms.max_abs < best_max:
            best_v, best_max = v, terms.max_abs
        run.log_energy.append(log_energy(terms, d2_ref))
        if it % cfg.record_every == 0 or it == cfg.steps:
            run.trajectory.append((it, min(1.0, terms.max_abs)))
        if cfg.backtrack:
            step = min(cfg.step_size, step * 1.25)

    if run.trajectory[-1][0] != run.steps_taken:
        run.trajectory.append((run.steps_taken, min(1.0, terms.max_abs)))
    run.vectors = best_v if cfg.keep_best else v
    return run


def gen_energy(dim, count, seed=0, cfg=None, init=None):
    """Energy-minimised directions; starts from :func:`gen_random` unless ``init`` is given."""
    dim = _check_int("dim", dim, 2)
    count = _check_int("count", count, 2)
    cfg = cfg or EnergyConfig()
    rng = make_rng(seed)
    t0 = time.perf_counter()
    if init is None:
        start = gen_random(dim, count, rng).data
    else:
        start = init.data if isinstance(init, UnitVectorSet) else np.asarray(init, dtype=np.float64)
        if start.shape != (count, dim):
            raise DomainError(f"warm start has shape {start.shape}, expected {(count, dim)}")
    run = minimize_energy(start, cfg, rng)
    vs = UnitVectorSet(run.vectors)
    report = GenerationReport(
        spec=GenSpec("energy", dim, count, seed if not isinstance(seed, np.random.Generator) else 0,
                     prune=False),
        energy_cfg=cfg,
        achieved_max_abs_cos=max_abs_offdiag(vs),
        trajectory=run.trajectory,
        elapsed_ms=int(round((time.perf_counter() - t0) * 1000)),
    )
    return vs, report


# -- pruning --------------------------------------------------------------------


def greedy_removal_order(s, target):
    """Rows removed by :func:`prune_greedy`, in order.

    Returns ``(removed, maxima)`` where ``maxima[i]`` is max|cos| of the
    surviving set after the i-th removal.
    """
    x = s.data if isinstance(s, UnitVectorSet) else np.asarray(s, dtype=np.float64)
    k = x.shape[0]
    target = _check_int("target", target, 2)
    if target > k:
        raise DomainError(f"target {target} exceeds the {k} available vectors")
    a = np.abs(x @ x.T)
    np.fill_diagonal(a, -np.inf)
    alive = np.ones(k, dtype=bool)

    top1 = np.empty(k)
    top1_idx = np.empty(k, dtype=np.intp)
    top2 = np.empty(k)
    top2_idx = np.empty(k, dtype=np.intp)

    def refresh(i):
        row = np.where(alive, a[i], -np.inf)
        row[i] = -np.inf
        j1 = int(np.argmax(row))
        top1[i], top1_idx[i] = row[j1], j1
        row[j1] = -np.inf
        j2 = int(np.argmax(row))
        top2[i], top2_idx[i] = row[j2], j2

    for i in range(k):
        refresh(i)

    removed, maxima = [], []
    for _ in range(k - target):
        live = np.flatnonzero(alive)
        worst = top1[live].max()
        cand = live[top1[live] == worst]
        if cand.size > 1:
            second = top2[cand].max()
            cand = cand[top2[cand] == second]
        r = int(cand.min())
        alive[r] = False
        removed.append(r)
        live = np.flatnonzero(alive)
        stale = live[(top1_idx[live] == r) | (top2_idx[live] == r)]
        for i in stale:
            refresh(int(i))
        maxima.append(float(top1[live].max()) if live.size > 1 else 0.0)
    return removed, maxima


def prune_greedy(s, target):
    """Drop the worst offender until ``target`` vectors remain.

    The worst offender has the largest max|cos| against the rest; ties go to
    the larger second-largest |cos|, then the lowest row index.  Survivors
    keep their original order.
    """
    removed, _ = greedy_removal_order(s, target)
    keep = np.ones(s.count, dtype=bool)
    keep[removed] = False
    return s.subset(np.flatnonzero(keep))


# -- dispatch -------------------------------------------------------------------


def generate(spec, energy_cfg=None, init=None):
    """Run ``spec`` and return exactly ``spec.count`` vectors plus a report."""
    rng = make_rng(spec.seed)
    t0 = time.perf_counter()
    n = spec.generated_count
    trajectory = None
    cfg = None
    if spec.method == "orthonormal":
        vs = gen_orthonormal(spec.dim, spec.count, rng)
    elif spec.method == "random":
        vs = gen_random(spec.dim, n, rng)
    elif spec.method == "projection":
        vs = gen_projection(spec.dim, n, rng)
    else:
        cfg = energy_cfg or EnergyConfig()
        vs, sub = gen_energy(spec.dim, n, rng, cfg, init=init)
        trajectory = sub.trajectory
    if vs.count > spec.count:
        vs = prune_greedy(vs, spec.count)
    achieved = max_abs_offdiag(vs) if vs.count >= 2 else 0.0
    report = GenerationReport(
        spec=spec,
        energy_cfg=cfg,
        achieved_max_abs_cos=achieved,
        trajectory=trajectory,
        elapsed_ms=int(round((time.perf_counter() - t0) * 1000)),
    )
    return vs, report


def with_seed(spec, seed):
    return replace(spec, seed=seed)
