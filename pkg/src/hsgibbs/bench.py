"""Timing harnesses: the n x p sampler grid and numba-vs-numpy kernels."""
from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .linear import RegressionData, SamplerConfig, run_chain
from .rng import make_stream

PAPER_GRID = (10, 50, 100, 500, 1000)


@dataclass
class BenchGrid:
    n_values: list = field(default_factory=lambda: list(PAPER_GRID))
    p_values: list = field(default_factory=lambda: list(PAPER_GRID))
    n_iterations: int = 1000
    repetitions: int = 3
    seed: int = 0

    def __post_init__(self):
        vals = list(self.n_values) + list(self.p_values) + [self.n_iterations, self.repetitions]
        if not self.n_values or not self.p_values or any(int(v) < 1 for v in vals):
            raise ValueError("benchmark grid values must all be positive")


def cell_timings(n, p, n_iterations, repetitions, seed=0, backend_policy="auto"):
    """Wall-clock seconds of each repetition drawing ``n_iterations`` samples.

    Synthetic X and y are iid standard normal; no burn-in is run.
    """
    rng = make_stream([seed, n, p])
    X = rng.standard_normal((n, p))
    y = rng.standard_normal(n)
    data = RegressionData.from_arrays(X, y)
    cfg = SamplerConfig(n_burn=0, n_keep=n_iterations, seed=seed, backend_policy=backend_policy)
    return [run_chain(data, cfg).wall_clock_seconds for _ in range(repetitions)]


def time_cell(n, p, n_iterations, repetitions, seed=0, backend_policy="auto"):
    """Median of :func:`cell_timings`."""
    return statistics.median(cell_timings(n, p, n_iterations, repetitions, seed, backend_policy))


def bench_repetitions(grid: BenchGrid, progress=None):
    """Per-repetition timings of every cell: ``{(n, p): [seconds, ...] or None}``.

    Failed cells (memory or numerical) are recorded as ``None`` and the run
    continues.
    """
    results = {}
    cell_timings(5, 5, 20, 1, grid.seed)  # warm caches and lazy imports
    for n in grid.n_values:
        for p in grid.p_values:
            try:
                results[(n, p)] = cell_timings(n, p, grid.n_iterations, grid.repetitions, grid.seed)
            except (MemoryError, NumericalError):
                results[(n, p)] = None
            if progress is not None:
                t = results[(n, p)]
                progress(n, p, None if t is None else statistics.median(t))
    return results


def bench(grid: BenchGrid, out_path=None, progress=None, reps_out=None):
    """Median time of every (n, p) cell. Returns ``{(n, p): seconds or None}``.

    ``out_path`` receives a CSV with one row per n and one column per p.
    Passing a dict as ``reps_out`` also collects the per-repetition times.
    """
    reps = bench_repetitions(grid, progress)
    if reps_out is not None:
        reps_out.update(reps)
    results = {k: None if v is None else statistics.median(v) for k, v in reps.items()}
    if out_path is not None:
        write_table(out_path, grid, results)
    return results


def write_table(path, grid, results):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n"] + [f"p={p}" for p in grid.p_values])
        for n in grid.n_values:
            row = [n]
            for p in grid.p_values:
                t = results.get((n, p))
                row.append("failed" if t is None else f"{t:.4f}")
            w.writerow(row)


def kernel_benchmark(sizes=(1_000, 10_000, 100_000), repeats=3, seed=0):
    """Compare the numba and numpy kernel backends on PG draws and ESS.

    Returns a list of dict rows; the numba column is absent when numba is
    unavailable. Compilation is excluded by a warm-up call.
    """
    from . import kernels

    rows = []
    for name, backend in kernels.BACKENDS.items():
        warm = make_stream(seed)
        backend.polya_gamma(warm, np.ones(8), np.zeros(8), 200)
        backend.geyer_tau(warm.standard_normal(200))
        for size in sizes:
            rng = make_stream(seed)
            c = rng.normal(0, 2, size)
            b = np.ones(size)
            x = np.cumsum(rng.standard_normal(size)) * 0.01 + rng.standard_normal(size)
            for kernel, fn in (
                ("pg1", lambda: backend.polya_gamma(rng, b, c, 200)),
                ("geyer_tau", lambda: backend.geyer_tau(x)),
            ):
                ts = []
                for _ in range(repeats):
                    t0 = time.perf_counter()
                    fn()
                    ts.append(time.perf_counter() - t0)
                rows.append({"backend": name, "kernel": kernel, "size": size, "seconds": min(ts)})
    return rows
