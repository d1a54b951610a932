"""Almost-orthogonal vector sets: theoretical bounds, generators and statistics."""

from .errors import AovsError, DomainError, FormatError, NumericError
from .vecset import (
    CosineStats,
    Histogram,
    NormStats,
    RawMatrix,
    UnitVectorSet,
    cosine_similarity,
    max_abs_offdiag,
    pairwise_cosine_stats,
)

__version__ = "0.1.0"

__all__ = [
    "AovsError",
    "CosineStats",
    "DomainError",
    "FormatError",
    "Histogram",
    "NormStats",
    "NumericError",
    "RawMatrix",
    "UnitVectorSet",
    "cosine_similarity",
    "max_abs_offdiag",
    "pairwise_cosine_stats",
]
