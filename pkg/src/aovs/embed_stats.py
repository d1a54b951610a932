"""Cosine and norm statistics of an exported embedding matrix.

Vocabulary-sized matrices have ~1e9 row pairs, so pairs are sampled
uniformly without replacement once they exceed ``pair_budget``.  Norms always
use every row of the raw (unnormalised) matrix.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .generators import make_rng
from .vecset import (
    CosineStats,
    Histogram,
    NormStats,
    RawMatrix,
    cosine_stats_from_values,
    histogram,
    norm_stats,
    pairwise_cosines,
    standardize_samples,
)

DEFAULT_PAIR_BUDGET = 2_000_000
HIST_BIN_WIDTH = 0.1
HIST_HALF_RANGE = 6.0
_CHUNK = 200_000


@dataclass(frozen=True)
class EmbeddingReport:
    source_label: str
    dim: int
    row_count: int
    cosine: CosineStats
    norms: NormStats
    standardized_histogram: Optional[Histogram]
    sample_pairs_used: int

    def to_dict(self):
        hist = self.standardized_histogram
        return {
            "source_label": self.source_label,
            "dim": self.dim,
            "row_count": self.row_count,
            "cosine": self.cosine.to_dict(),
            "norms": self.norms.to_dict(),
            "standardized_histogram": None
            if hist is None
            else {"bin_edges": list(hist.bin_edges), "counts": list(hist.counts)},
            "sample_pairs_used": self.sample_pairs_used,
        }

    def table_row(self):
        """The columns of the per-model cosine and norm tables, in their order."""
        c, n = self.cosine, self.norms
        return {
            "Emb. Dim": self.dim,
            "Mean CosSim": c.mean,
            "Std CosSim": c.std,
            "CosSim 25%": c.q25,
            "CosSim 50%": c.q50,
            "CosSim 75%": c.q75,
            "Mean Norm": n.mean,
            "Std Norm": n.std,
            "Norm 25%": n.q25,
            "Norm 50%": n.q50,
            "Norm 75%": n.q75,
        }


def pair_from_index(index, rows):
    """Map linear indices over pairs (i < j, row-major) back to (i, j)."""
    idx = np.asarray(index, dtype=np.int64)
    n = int(rows)
    b = 2 * n - 1
    i = np.floor((b - np.sqrt(float(b) * b - 8.0 * idx.astype(np.float64))) / 2.0).astype(np.int64)
    i = np.clip(i, 0, n - 2)

    def start(r):
        return r * (2 * n - r - 1) // 2

    # repair float rounding at row boundaries
    too_far = start(i) > idx
    while np.any(too_far):
        i[too_far] -= 1
        too_far = start(i) > idx
    short = start(i + 1) <= idx
    while np.any(short):
        i[short] += 1
        short = start(i + 1) <= idx
    j = idx - start(i) + i + 1
    return i, j


def sample_pair_cosines(unit_rows, pair_budget, rng):
    """Cosines of ``pair_budget`` distinct unordered pairs, drawn uniformly."""
    n = unit_rows.shape[0]
    total = n * (n - 1) // 2
    picks = np.sort(rng.choice(total, size=pair_budget, replace=False))
    out = np.empty(pair_budget)
    for s in range(0, pair_budget, _CHUNK):
        i, j = pair_from_index(picks[s:s + _CHUNK], n)
        out[s:s + _CHUNK] = np.einsum("ij,ij->i", unit_rows[i], unit_rows[j])
    np.clip(out, -1.0, 1.0, out=out)
    return out


def standardized_histogram(values, bin_width=HIST_BIN_WIDTH):
    """Histogram of standardised values on a grid covering at least [-6, 6]."""
    z = standardize_samples(values)
    lo = min(-HIST_HALF_RANGE, math.floor(z.min() / bin_width) * bin_width)
    hi = max(HIST_HALF_RANGE, math.ceil(z.max() / bin_width) * bin_width)
    bins = int(round((hi - lo) / bin_width))
    return histogram(z, bins, (lo, hi))


def analyze_embeddings(m, pair_budget=DEFAULT_PAIR_BUDGET, seed=0, source_label=""):
    """Summarise an embedding table.

    ``pair_budget`` = 0 means every pair is used.
    """
    if not isinstance(m, RawMatrix):
        m = RawMatrix(m)
    if m.rows < 2:
        raise DomainError(f"need at least two rows, got {m.rows}")
    if isinstance(pair_budget, bool) or int(pair_budget) != pair_budget or pair_budget < 0:
        raise DomainError(f"pair_budget must be a non-negative integer, got {pair_budget!r}")
    x = m.data
    norms = np.linalg.norm(x, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise DomainError(f"row {int(zero[0])} is the zero vector; its cosine is undefined")

    total = m.rows * (m.rows - 1) // 2
    if pair_budget == 0 or total <= pair_budget:
        cos = pairwise_cosines(x)
    else:
        cos = sample_pair_cosines(x / norms[:, None], int(pair_budget), make_rng(seed))

    stats = cosine_stats_from_values(cos)
    hist = standardized_histogram(cos) if stats.std > 0 else None
    return EmbeddingReport(
        source_label=str(source_label),
        dim=m.cols,
        row_count=m.rows,
        cosine=stats,
        norms=norm_stats(m),
        standardized_histogram=hist,
        sample_pairs_used=int(cos.size),
    )


def compare_to_normal(report):
    """Rows (z, empirical density, standard normal density) at the bin centres."""
    hist = report.standardized_histogram if isinstance(report, EmbeddingReport) else report
    if hist is None:
        raise DomainError("distribution has zero spread; no standardized histogram")
    total = hist.total
    if total == 0:
        raise DomainError("histogram is empty")
    edges = np.asarray(hist.bin_edges)
    counts = np.asarray(hist.counts, dtype=np.float64)
    widths = np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    empirical = counts / (total * widths)
    normal = np.exp(-0.5 * centers ** 2) / math.sqrt(2.0 * math.pi)
    return [(float(z), float(e), float(g)) for z, e, g in zip(centers, empirical, normal)]
