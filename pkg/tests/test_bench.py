import csv

import pytest

from aovs.bench import BenchGrid, BenchRow, best_map, best_path_for, run_benchmark, thread_cap, write_benchmark
from aovs.errors import DomainError
from aovs.generators import EnergyConfig

FAST = EnergyConfig(steps=50)


def small_grid(**kw):
    base = dict(dims=[8, 16], counts=[6, 12], methods=["orthonormal", "random", "energy"],
                seeds=[0, 1], energy_cfg=FAST)
    base.update(kw)
    return BenchGrid(**base)


class TestGrid:
    def test_orthonormal_skips_overfull_cells(self):
        cells = small_grid().cells()
        assert ("orthonormal", 8, 12, 0) not in cells
        assert ("orthonormal", 16, 12, 1) in cells
        assert len(cells) == 2 * (3 + 4 + 4)
        assert cells == sorted(cells)

    @pytest.mark.parametrize("kw, fragment", [
        (dict(dims=[]), "dims"),
        (dict(seeds=[]), "seeds"),
        (dict(dims=[1, 8]), ">= 2"),
        (dict(counts=[1]), ">= 2"),
        (dict(methods=["random", "magic"]), "orthonormal"),
    ])
    def test_validation(self, kw, fragment):
        with pytest.raises(DomainError, match=fragment):
            small_grid(**kw)

    def test_no_feasible_cells(self):
        with pytest.raises(DomainError):
            run_benchmark(small_grid(dims=[4], counts=[8], methods=["orthonormal"]))


@pytest.fixture(scope="module")
def result():
    return run_benchmark(small_grid(), threads=1)


class TestRun:
    def test_best_is_minimum_of_rows(self, result):
        for (dim, count), value in result.best.items():
            matching = [r.max_abs_cos for r in result.rows if (r.dim, r.count) == (dim, count)]
            assert value == min(matching)
        assert set(result.best) == {(d, c) for d in (8, 16) for c in (6, 12)}

    def test_rows_sorted(self, result):
        keys = [(r.method, r.dim, r.count, r.seed) for r in result.rows]
        assert keys == sorted(keys)

    def test_zero_cells(self, result):
        assert result.best[(8, 6)] <= 1e-9 and result.best[(16, 12)] <= 1e-9

    def test_thread_count_does_not_change_numbers(self, result, monkeypatch):
        monkeypatch.setenv("AOVS_THREADS", "4")
        again = run_benchmark(small_grid())
        assert [r.as_tuple()[:5] for r in again.rows] == [r.as_tuple()[:5] for r in result.rows]
        assert again.best == result.best

    def test_single_cell(self):
        res = run_benchmark(small_grid(dims=[8], counts=[6], methods=["random"], seeds=[3]))
        assert len(res.rows) == 1 and list(res.best) == [(8, 6)]

    def test_csv_outputs(self, result, tmp_path):
        path = tmp_path / "bench.csv"
        best_path = write_benchmark(result, path)
        assert best_path == str(tmp_path / "bench-best.csv")
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["method", "dim", "count", "seed", "max_abs_cos", "elapsed_ms"]
        assert len(rows) == 1 + len(result.rows)
        with open(best_path) as fh:
            best = list(csv.reader(fh))
        # counts down the rows, dims across the columns
        assert best[0] == ["count", "8", "16"]
        assert [r[0] for r in best[1:]] == ["6", "12"]
        assert float(best[2][1]) == result.best[(8, 12)]


class TestHelpers:
    def test_best_map(self):
        rows = [BenchRow("random", 4, 5, s, v, 0) for s, v in enumerate([0.5, 0.2, 0.3])]
        rows.append(BenchRow("energy", 4, 5, 0, 0.25, 0))
        assert best_map(rows) == {(4, 5): 0.2}

    def test_best_table_gaps(self):
        from aovs.bench import BenchResult

        res = BenchResult(rows=[], best={(8, 4): 0.0, (4, 6): 0.3})
        assert res.best_table() == ([4, 8], [(4, [None, 0.0]), (6, [0.3, None])])

    def test_best_path(self):
        assert best_path_for("out/run.csv") == "out/run-best.csv"
        assert best_path_for("run") == "run-best.csv"

    @pytest.mark.parametrize("raw, expected", [("3", 3), ("", None), ("0", None)])
    def test_thread_cap(self, monkeypatch, raw, expected):
        import os

        monkeypatch.setenv("AOVS_THREADS", raw)
        assert thread_cap() == (expected or os.cpu_count() or 1)

    @pytest.mark.parametrize("raw", ["-1", "many"])
    def test_thread_cap_invalid(self, monkeypatch, raw):
        monkeypatch.setenv("AOVS_THREADS", raw)
        with pytest.raises(DomainError, match="AOVS_THREADS"):
            thread_cap()


def test_small_table_cells():
    grid = BenchGrid(dims=[32, 64], counts=[40, 100], methods=["orthonormal", "random", "energy"],
                     seeds=[0, 1, 2])
    res = run_benchmark(grid)
    assert res.best[(32, 40)] <= 0.14
    assert res.best[(64, 40)] <= 1e-9
