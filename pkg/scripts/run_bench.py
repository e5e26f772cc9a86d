"""Timing table for layer stripping and the inverse nonlinear FFT, with fitted slopes."""
import argparse
from dataclasses import dataclass

from nlfft import io
from nlfft.bench import bench


@dataclass
class BenchConfig:
    min_n: int = 1024
    max_n: int = 16384
    reps: int = 3
    seed: int = 0
    eta: float = 0.25
    out: str | None = None


def main(cfg: BenchConfig):
    res = bench(cfg.min_n, cfg.max_n, cfg.reps, cfg.seed, cfg.eta)
    rows = [(r.n, r.t_layer, r.t_fast, r.max_diff) for r in res.rows]
    io.write_text(cfg.out, io.csv_text(["n", "t_layer", "t_fast", "max_diff"], rows))
    print(f"slope layer {res.slope_layer:.2f}, slope fast {res.slope_fast:.2f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--min", dest="min_n", type=int, default=1024)
    ap.add_argument("--max", dest="max_n", type=int, default=16384)
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--eta", type=float, default=0.25)
    ap.add_argument("--out")
    main(BenchConfig(**vars(ap.parse_args())))
