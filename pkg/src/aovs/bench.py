"""Benchmark harness: sweep method x dim x count x seed and tabulate the best max|cos|.

Cells are independent and run on a thread pool (numpy releases the GIL in
its linear algebra).  ``AOVS_THREADS`` caps the pool; 0 or unset means one
worker per CPU.  Each cell seeds its own generator, so the numbers do not
depend on the worker count.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .errors import DomainError
from .formats import write_csv
from .generators import DEFAULT_OVERSAMPLE, METHODS, EnergyConfig, GenSpec, generate

log = logging.getLogger(__name__)

ROW_HEADER = ("method", "dim", "count", "seed", "max_abs_cos", "elapsed_ms")


@dataclass(frozen=True)
class BenchGrid:
    dims: Sequence[int]
    counts: Sequence[int]
    methods: Sequence[str]
    seeds: Sequence[int]
    energy_cfg: EnergyConfig = field(default_factory=EnergyConfig)
    oversample: float = DEFAULT_OVERSAMPLE

    def __post_init__(self):
        for name in ("dims", "counts", "methods", "seeds"):
            if not len(getattr(self, name)):
                raise DomainError(f"benchmark grid needs at least one entry in {name}")
        for d in self.dims:
            if d < 2:
                raise DomainError(f"benchmark dimensions must be >= 2, got {d}")
        for c in self.counts:
            if c < 2:
                raise DomainError(f"benchmark counts must be >= 2, got {c}")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise DomainError(
                f"unknown method(s) {', '.join(unknown)}; choose from {', '.join(METHODS)}"
            )

    def cells(self):
        """Feasible (method, dim, count, seed) cells; orthonormal needs count <= dim."""
        out = []
        for method in self.methods:
            for dim in self.dims:
                for count in self.counts:
                    if method == "orthonormal" and count > dim:
                        continue
                    for seed in self.seeds:
                        out.append((method, int(dim), int(count), int(seed)))
        return sorted(out)


@dataclass(frozen=True)
class BenchRow:
    method: str
    dim: int
    count: int
    seed: int
    max_abs_cos: float
    elapsed_ms: int

    def as_tuple(self):
        return (self.method, self.dim, self.count, self.seed, self.max_abs_cos, self.elapsed_ms)


@dataclass
class BenchResult:
    rows: List[BenchRow]
    best: Dict[Tuple[int, int], float]

    def best_table(self):
        """Rows keyed by count, one column per dim; ``None`` where nothing ran."""
        dims = sorted({d for d, _ in self.best})
        counts = sorted({c for _, c in self.best})
        return dims, [(c, [self.best.get((d, c)) for d in dims]) for c in counts]


def thread_cap():
    raw = os.environ.get("AOVS_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"AOVS_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise DomainError(f"AOVS_THREADS must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def run_cell(cell, grid):
    method, dim, count, seed = cell
    spec = GenSpec(method, dim, count, seed=seed, oversample=grid.oversample)
    cfg = grid.energy_cfg if method == "energy" else None
    _, report = generate(spec, cfg)
    log.info("%s dim=%d count=%d seed=%d -> %.4f (%d ms)", method, dim, count, seed,
             report.achieved_max_abs_cos, report.elapsed_ms)
    return BenchRow(method, dim, count, seed, report.achieved_max_abs_cos, report.elapsed_ms)


def best_map(rows):
    best = {}
    for r in rows:
        key = (r.dim, r.count)
        if key not in best or r.max_abs_cos < best[key]:
            best[key] = r.max_abs_cos
    return best


def run_benchmark(grid, threads=None):
    cells = grid.cells()
    if not cells:
        raise DomainError("benchmark grid has no feasible cells")
    workers = min(threads or thread_cap(), len(cells))
    if workers <= 1:
        rows = [run_cell(c, grid) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda c: run_cell(c, grid), cells))
    rows.sort(key=lambda r: (r.method, r.dim, r.count, r.seed))
    return BenchResult(rows=rows, best=best_map(rows))


def best_path_for(path):
    root, ext = os.path.splitext(str(path))
    return f"{root}-best{ext or '.csv'}"


def write_benchmark(result, path):
    """Write the per-cell CSV and the companion ``-best`` table; returns the latter's path."""
    write_csv(path, ROW_HEADER, [r.as_tuple() for r in result.rows])
    dims, table = result.best_table()
    best_path = best_path_for(path)
    write_csv(
        best_path,
        ["count"] + [str(d) for d in dims],
        [[c] + ["" if v is None else v for v in vals] for c, vals in table],
    )
    return best_path
