"""Timing harness for the two inverse solvers."""
from dataclasses import dataclass, field
import time

import numpy as np

from .diagnostics import admissible_sample
from .inverse import inlfft, layer_strip_general, warmup


@dataclass(frozen=True)
class BenchRow:
    n: int
    t_layer: float
    t_fast: float
    max_diff: float


@dataclass
class BenchResult:
    rows: list = field(default_factory=list)

    def slope(self, attr):
        n = np.array([r.n for r in self.rows], dtype=float)
        t = np.array([getattr(r, attr) for r in self.rows])
        return float(np.polyfit(np.log(n), np.log(t), 1)[0])

    @property
    def slope_layer(self):
        return self.slope("t_layer")

    @property
    def slope_fast(self):
        return self.slope("t_fast")


def _median_time(fn, reps):
    ts = []
    out = None
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        ts.append(time.perf_counter() - t0)
    return float(np.median(ts)), out


def bench(min_n=1024, max_n=16384, reps=3, seed=0, eta=0.25):
    """Median wall times of layer stripping and inlfft on shared admissible inputs."""
    if min_n < 1 or max_n < min_n or min_n & (min_n - 1) or max_n & (max_n - 1):
        raise ValueError("bench sizes must be powers of two with min <= max")
    warmup()
    rng = np.random.default_rng(seed)
    res = BenchResult()
    n = min_n
    while n <= max_n:
        s = admissible_sample(rng, n, eta=eta)
        a, b = s.pair.arrays()
        tl, gl = _median_time(lambda: layer_strip_general(a, b, n), reps)
        tf, gf = _median_time(lambda: inlfft(a, b)[0], reps)
        res.rows.append(BenchRow(n, tl, tf, float(np.max(np.abs(gl.values - gf.values)))))
        n *= 2
    return res
