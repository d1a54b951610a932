"""Vector-set containers, cosine metrics and distribution summaries.

Conventions used by every statistic in the package:

* standard deviations are population (divide by N);
* quantiles interpolate linearly between order statistics (numpy's default);
* each unordered pair {i, j}, i != j, is counted exactly once.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError

UNIT_NORM_TOL = 1e-9
_BLOCK_ROWS = 1024


class UnitVectorSet:
    """``count`` unit vectors in R^``dim`` stored row-major as float64.

    Rows are checked to have norm 1 within 1e-9; use :meth:`from_rows` to
    normalise arbitrary nonzero rows first.  The backing array is read-only.
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, copy=True, ndmin=2)
        if arr.ndim != 2:
            raise DomainError(f"expected a 2-D array, got shape {arr.shape}")
        if arr.shape[1] < 1:
            raise DomainError("vectors must have dimension >= 1")
        if not np.all(np.isfinite(arr)):
            raise DomainError("vector entries must be finite")
        if arr.shape[0]:
            norms = np.linalg.norm(arr, axis=1)
            bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_NORM_TOL)
            if bad.size:
                i = int(bad[0])
                raise DomainError(f"row {i} has norm {norms[i]!r}, not 1 within {UNIT_NORM_TOL}")
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def from_rows(cls, rows):
        """Normalise nonzero rows to unit length."""
        arr = np.array(rows, dtype=np.float64, ndmin=2)
        norms = np.linalg.norm(arr, axis=1)
        zero = np.flatnonzero(norms == 0.0)
        if zero.size:
            raise DomainError(f"row {int(zero[0])} is the zero vector")
        return cls(arr / norms[:, None])

    @classmethod
    def empty(cls, dim):
        return cls(np.zeros((0, dim)))

    @property
    def data(self):
        return self._data

    @property
    def dim(self):
        return self._data.shape[1]

    @property
    def count(self):
        return self._data.shape[0]

    def __len__(self):
        return self.count

    def subset(self, indices):
        return UnitVectorSet(self._data[np.asarray(indices, dtype=np.intp)])

    def __repr__(self):
        return f"UnitVectorSet(count={self.count}, dim={self.dim})"


class RawMatrix:
    """Arbitrary finite rows x cols matrix, e.g. an exported embedding table."""

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, copy=True, ndmin=2)
        if arr.ndim != 2:
            raise DomainError(f"expected a 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            r, c = np.argwhere(~np.isfinite(arr))[0]
            raise DomainError(f"non-finite entry at row {r}, column {c}")
        arr.setflags(write=False)
        self._data = arr

    @property
    def data(self):
        return self._data

    @property
    def rows(self):
        return self._data.shape[0]

    @property
    def cols(self):
        return self._data.shape[1]

    def __repr__(self):
        return f"RawMatrix(rows={self.rows}, cols={self.cols})"


@dataclass(frozen=True)
class CosineStats:
    pair_count: int
    mean: float
    std: float
    q25: float
    q50: float
    q75: float
    min: float
    max: float
    max_abs: float

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class NormStats:
    mean: float
    std: float
    q25: float
    q50: float
    q75: float

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple
    counts: tuple

    @property
    def total(self):
        return int(sum(self.counts))

    def to_rows(self):
        return [
            (self.bin_edges[i], self.bin_edges[i + 1], self.counts[i])
            for i in range(len(self.counts))
        ]


def _as_vector(v, name):
    arr = np.asarray(v, dtype=np.float64).ravel()
    if arr.size == 0:
        raise DomainError(f"{name} is empty")
    return arr


def cosine_similarity(v, w):
    """<v, w> / (|v| |w|), clamped to [-1, 1]."""
    a = _as_vector(v, "v")
    b = _as_vector(w, "w")
    if a.shape != b.shape:
        raise DomainError(f"dimension mismatch: {a.size} vs {b.size}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise DomainError("cosine similarity is undefined for the zero vector")
    c = float(np.dot(a, b) / (na * nb))
    return min(1.0, max(-1.0, c))


def _matrix_of(s):
    if isinstance(s, (UnitVectorSet, RawMatrix)):
        return s.data
    return np.asarray(s, dtype=np.float64)


def _normalized_rows(x):
    norms = np.linalg.norm(x, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise DomainError(f"row {int(zero[0])} is the zero vector")
    return x / norms[:, None]


def pairwise_cosines(s):
    """All count*(count-1)/2 off-diagonal cosines, pairs (i, j) with i < j in row-major order.

    Computed in row blocks; the output order does not depend on the block size.
    """
    u = _normalized_rows(_matrix_of(s))
    k = u.shape[0]
    out = np.empty(k * (k - 1) // 2)
    pos = 0
    for i0 in range(0, k, _BLOCK_ROWS):
        i1 = min(k, i0 + _BLOCK_ROWS)
        g = u[i0:i1] @ u[i0:].T
        for r in range(i1 - i0):
            seg = g[r, r + 1:]
            out[pos:pos + seg.size] = seg
            pos += seg.size
    np.clip(out, -1.0, 1.0, out=out)
    return out


def cosine_stats_from_values(values):
    vals = np.asarray(values, dtype=np.float64)
    if vals.size == 0:
        raise DomainError("no cosine values to summarise")
    q25, q50, q75 = np.percentile(vals, [25, 50, 75])
    lo = float(vals.min())
    hi = float(vals.max())
    return CosineStats(
        pair_count=int(vals.size),
        mean=float(vals.mean()),
        std=float(vals.std()),
        q25=float(q25),
        q50=float(q50),
        q75=float(q75),
        min=lo,
        max=hi,
        max_abs=max(abs(lo), abs(hi)),
    )


def pairwise_cosine_stats(s):
    """Distribution summary over every unordered off-diagonal pair of rows."""
    x = _matrix_of(s)
    if x.shape[0] < 2:
        raise DomainError("need at least two vectors for pairwise statistics")
    return cosine_stats_from_values(pairwise_cosines(x))


def max_abs_offdiag(s):
    """Largest |cos| over unordered pairs, without materialising all pairs."""
    x = _matrix_of(s)
    k = x.shape[0]
    if k < 2:
        raise DomainError("need at least two vectors for pairwise statistics")
    u = _normalized_rows(x)
    best = 0.0
    for i0 in range(0, k, _BLOCK_ROWS):
        i1 = min(k, i0 + _BLOCK_ROWS)
        g = np.abs(u[i0:i1] @ u[i0:].T)
        # mask the diagonal and everything left of it
        mask = np.triu(np.ones(g.shape, dtype=bool), k=1)
        if mask.any():
            best = max(best, float(g[mask].max()))
    return min(1.0, best)


def norm_stats(m):
    x = _matrix_of(m)
    if x.ndim != 2 or x.shape[0] == 0:
        raise DomainError("norm statistics need at least one row")
    norms = np.linalg.norm(x, axis=1)
    q25, q50, q75 = np.percentile(norms, [25, 50, 75])
    return NormStats(
        mean=float(norms.mean()),
        std=float(norms.std()),
        q25=float(q25),
        q50=float(q50),
        q75=float(q75),
    )


def standardize_samples(values):
    """Shift to mean 0 and scale to (population) std 1, preserving order."""
    vals = np.asarray(values, dtype=np.float64)
    if vals.size < 2:
        raise DomainError("need at least two samples to standardize")
    mu = vals.mean()
    sd = vals.std()
    if not sd > 0.0:
        raise DomainError("cannot standardize samples with zero standard deviation")
    return (vals - mu) / sd


def histogram(values, bins, value_range):
    """Uniform-bin histogram on ``value_range``.

    Bins are half-open [lo, hi) except the last, which is closed.  Values
    outside the range are counted in the nearest end bin, so the total is
    always len(values).
    """
    if isinstance(bins, bool) or int(bins) != bins or bins < 1:
        raise DomainError(f"bins must be a positive integer, got {bins!r}")
    lo, hi = (float(v) for v in value_range)
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise DomainError(f"invalid histogram range ({lo}, {hi})")
    vals = np.asarray(values, dtype=np.float64).ravel()
    edges = np.linspace(lo, hi, int(bins) + 1)
    counts = np.zeros(int(bins), dtype=np.int64)
    if vals.size:
        clipped = np.clip(vals, lo, hi)
        counts, _ = np.histogram(clipped, bins=edges)
    return Histogram(bin_edges=tuple(float(e) for e in edges), counts=tuple(int(c) for c in counts))
