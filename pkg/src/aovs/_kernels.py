"""Pairwise terms of the antipodal repulsion energy.

For unit rows with Gram matrix G, every unordered pair i < j contributes
four pairs of the augmented set {v} u {-v}: two at squared distance
s- = 2 - 2 G_ij and two at s+ = 2 + 2 G_ij.  With f(s) = (s / ref)^(-p/2)
the scaled energy is 2 * sum_{i<j} [f(s-) + f(s+)].

``pair_terms`` also returns the matrix ``coef`` (a - b) and vector ``rowsum``
(sum_j a + b), where a = f(s-)/s- and b = f(s+)/s+, from which the gradient
is rowsum_i v_i - (coef @ v)_i up to a positive factor.

The numba kernel makes one deterministic pass over the upper triangle; the
numpy version is kept as a fallback and as the reference in the tests.
"""

import math

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None


def _int_half(p):
    """p when p/2 is a multiple of 1/2 up to 64, else 0 (use the generic power)."""
    if p == int(p) and 1 <= p <= 128:
        return int(p)
    return 0


def pair_terms_numpy(gram, p, d2_ref):
    g = np.array(gram, dtype=np.float64, copy=True)
    np.fill_diagonal(g, 0.0)
    dm2 = 2.0 - 2.0 * g
    dp2 = 2.0 + 2.0 * g
    half = p / 2.0
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        fm = np.power(dm2 / d2_ref, -half)
        fp = np.power(dp2 / d2_ref, -half)
        np.fill_diagonal(fm, 0.0)
        np.fill_diagonal(fp, 0.0)
        a = fm / dm2
        b = fp / dp2
    np.fill_diagonal(a, 0.0)
    np.fill_diagonal(b, 0.0)
    energy = float(fm.sum() + fp.sum())
    if not np.all(dm2[~np.eye(len(g), dtype=bool)] > 0) or not np.all(
        dp2[~np.eye(len(g), dtype=bool)] > 0
    ):
        energy = math.inf
    max_abs = float(np.abs(g).max()) if len(g) > 1 else 0.0
    return energy, max_abs, a - b, (a + b).sum(axis=1)


if njit is not None:

    @njit(cache=True, nogil=True)
    def _pair_terms_jit(gram, half, int_p, inv_ref, coef, rowsum):
        k = gram.shape[0]
        energy = 0.0
        max_abs = 0.0
        bad = False
        for i in range(k):
            rowsum[i] = 0.0
        for i in range(k):
            coef[i, i] = 0.0
            for j in range(i + 1, k):
                c = gram[i, j]
                ac = abs(c)
                if ac > max_abs:
                    max_abs = ac
                sm = 2.0 - 2.0 * c
                sp = 2.0 + 2.0 * c
                if sm <= 0.0 or sp <= 0.0:
                    bad = True
                    coef[i, j] = 0.0
                    coef[j, i] = 0.0
                    continue
                if int_p > 0:
                    rm = 1.0 / (sm * inv_ref)
                    rp = 1.0 / (sp * inv_ref)
                    fm = 1.0
                    fp = 1.0
                    for _ in range(int_p // 2):
                        fm *= rm
                        fp *= rp
                    if int_p % 2:
                        fm *= math.sqrt(rm)
                        fp *= math.sqrt(rp)
                else:
                    fm = (sm * inv_ref) ** (-half)
                    fp = (sp * inv_ref) ** (-half)
                energy += fm + fp
                am = fm / sm
                ap = fp / sp
                coef[i, j] = am - ap
                coef[j, i] = am - ap
                rowsum[i] += am + ap
                rowsum[j] += am + ap
        if bad:
            energy = np.inf
        return 2.0 * energy, max_abs


def pair_terms(gram, p, d2_ref):
    """Return ``(scaled_energy, max_abs_offdiag, coef, rowsum)`` for a Gram matrix."""
    if njit is None:
        return pair_terms_numpy(gram, p, d2_ref)
    k = gram.shape[0]
    coef = np.empty((k, k))
    rowsum = np.empty(k)
    energy, max_abs = _pair_terms_jit(
        np.ascontiguousarray(gram, dtype=np.float64),
        float(p) / 2.0,
        _int_half(float(p)),
        1.0 / float(d2_ref),
        coef,
        rowsum,
    )
    return float(energy), float(max_abs), coef, rowsum
