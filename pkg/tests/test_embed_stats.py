import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aovs.embed_stats import (
    EmbeddingReport,
    analyze_embeddings,
    compare_to_normal,
    pair_from_index,
    sample_pair_cosines,
    standardized_histogram,
)
from aovs.errors import DomainError
from aovs.generators import make_rng
from aovs.vecset import Histogram, RawMatrix, pairwise_cosine_stats

HAND = RawMatrix([[1.0, 0.0], [1.0, 1.0], [0.0, 2.0]])


def gaussian(rows, cols, seed):
    return RawMatrix(np.random.default_rng(seed).standard_normal((rows, cols)))


class TestPairIndex:
    @pytest.mark.parametrize("n", [2, 3, 7, 50])
    def test_enumerates_all_pairs(self, n):
        total = n * (n - 1) // 2
        i, j = pair_from_index(np.arange(total), n)
        expected = [(a, b) for a in range(n) for b in range(a + 1, n)]
        assert list(zip(i.tolist(), j.tolist())) == expected

    @settings(max_examples=200)
    @given(st.integers(2, 200_000), st.data())
    def test_large_rows(self, n, data):
        total = n * (n - 1) // 2
        idx = data.draw(st.integers(0, total - 1))
        i, j = pair_from_index(np.array([idx]), n)
        i, j = int(i[0]), int(j[0])
        assert 0 <= i < j < n
        assert i * (2 * n - i - 1) // 2 + (j - i - 1) == idx


class TestSampling:
    def test_distinct_pairs(self):
        x = np.random.default_rng(0).standard_normal((40, 3))
        u = x / np.linalg.norm(x, axis=1, keepdims=True)
        vals = sample_pair_cosines(u, 780, make_rng(1))
        full = np.sort((u @ u.T)[np.triu_indices(40, 1)])
        # every pair exactly once when the budget covers them all
        np.testing.assert_allclose(np.sort(vals), full, atol=1e-15)

    def test_deterministic(self):
        m = gaussian(300, 8, 1)
        a = analyze_embeddings(m, pair_budget=1000, seed=5)
        b = analyze_embeddings(m, pair_budget=1000, seed=5)
        assert a == b and a.sample_pairs_used == 1000

    def test_sampled_mean_agrees_with_full(self):
        m = gaussian(500, 64, 3)
        full = analyze_embeddings(m, pair_budget=0)
        sample = analyze_embeddings(m, pair_budget=20_000, seed=3)
        stderr = full.cosine.std / math.sqrt(20_000)
        assert abs(full.cosine.mean - sample.cosine.mean) <= 3 * stderr
        assert full.sample_pairs_used == 500 * 499 // 2


class TestAnalyze:
    def test_identity(self):
        r = analyze_embeddings(RawMatrix(np.eye(4)))
        assert r.cosine.mean == 0.0 and r.cosine.std == 0.0
        assert r.norms.mean == 1.0
        assert r.standardized_histogram is None
        assert r.cosine == pairwise_cosine_stats(np.eye(4))

    def test_hand_fixture(self):
        r = analyze_embeddings(HAND)
        assert r.cosine.pair_count == 3 and r.sample_pairs_used == 3
        assert r.cosine.mean == pytest.approx(math.sqrt(2.0) / 3.0, abs=1e-12)
        assert r.cosine.max == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)
        assert r.cosine.min == pytest.approx(0.0, abs=1e-12)
        assert r.norms.mean == pytest.approx((1.0 + math.sqrt(2.0) + 2.0) / 3.0, abs=1e-12)
        assert (r.dim, r.row_count) == (2, 3)

    def test_norms_use_raw_rows(self):
        m = RawMatrix(np.diag([1.0, 2.0, 3.0, 4.0]))
        r = analyze_embeddings(m, pair_budget=2, seed=0)
        assert r.norms.mean == 2.5 and r.sample_pairs_used == 2

    def test_table_row_schema(self):
        row = analyze_embeddings(HAND).table_row()
        assert list(row) == ["Emb. Dim", "Mean CosSim", "Std CosSim", "CosSim 25%", "CosSim 50%",
                             "CosSim 75%", "Mean Norm", "Std Norm", "Norm 25%", "Norm 50%", "Norm 75%"]

    def test_json(self):
        d = json.loads(json.dumps(analyze_embeddings(HAND, source_label="hand").to_dict()))
        assert d["source_label"] == "hand" and d["cosine"]["pair_count"] == 3
        assert sum(d["standardized_histogram"]["counts"]) == 3

    def test_zero_row_named(self):
        with pytest.raises(DomainError, match="row 2"):
            analyze_embeddings(RawMatrix([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))

    def test_too_few_rows(self):
        with pytest.raises(DomainError):
            analyze_embeddings(RawMatrix([[1.0, 2.0]]))

    @pytest.mark.parametrize("budget", [-1, 1.5, True])
    def test_bad_budget(self, budget):
        with pytest.raises(DomainError):
            analyze_embeddings(HAND, pair_budget=budget)

    @pytest.mark.slow
    def test_vocabulary_scale(self):
        r = analyze_embeddings(gaussian(30_000, 768, 0), pair_budget=1_000_000, seed=0)
        assert r.sample_pairs_used == 1_000_000
        assert abs(r.cosine.mean) < 0.001
        assert abs(r.cosine.std - 1 / math.sqrt(768)) < 0.05 / math.sqrt(768)

    def test_report_type(self):
        assert isinstance(analyze_embeddings(HAND), EmbeddingReport)


class TestNormalComparison:
    def test_histogram_range(self):
        h = standardized_histogram(np.random.default_rng(0).standard_normal(1000))
        assert h.bin_edges[0] <= -6.0 and h.bin_edges[-1] >= 6.0
        assert h.total == 1000

    def test_histogram_widens_for_outliers(self):
        vals = np.r_[np.zeros(999), 1.0]
        h = standardized_histogram(vals)
        z_max = (1.0 - vals.mean()) / vals.std()
        assert h.bin_edges[-1] >= z_max

    def test_gaussian_sample_matches(self):
        vals = np.random.default_rng(1).standard_normal(100_000)
        rows = compare_to_normal(standardized_histogram(vals))
        width = rows[1][0] - rows[0][0]
        assert sum(e for _, e, _ in rows) * width == pytest.approx(1.0, abs=1e-6)
        assert max(abs(e - g) for _, e, g in rows) < 0.05

    def test_report_input(self):
        r = analyze_embeddings(gaussian(200, 16, 2), pair_budget=0)
        rows = compare_to_normal(r)
        assert len(rows) == len(r.standardized_histogram.counts)

    def test_two_point_distribution(self):
        rows = compare_to_normal(standardized_histogram([-1.0, 1.0] * 50))
        assert max(abs(e - g) for _, e, g in rows) > 1.0

    def test_degenerate(self):
        with pytest.raises(DomainError):
            compare_to_normal(analyze_embeddings(RawMatrix(np.eye(4))))

    def test_empty(self):
        with pytest.raises(DomainError):
            compare_to_normal(Histogram(bin_edges=(0.0, 1.0), counts=(0,)))
