"""Relative roundtrip error of both inverse solvers against n at fixed eta."""
import argparse
from dataclasses import dataclass

import numpy as np

from nlfft import io
from nlfft.diagnostics import admissible_sample
from nlfft.inverse import inlfft, layer_strip


@dataclass
class TrendConfig:
    min_log2: int = 6
    max_log2: int = 13
    eta: float = 0.3
    seeds: int = 3
    out: str | None = None


def main(cfg: TrendConfig):
    rows = []
    for t in range(cfg.min_log2, cfg.max_log2 + 1):
        n = 2 ** t
        el = ef = 0.0
        for seed in range(cfg.seeds):
            s = admissible_sample(np.random.default_rng(1000 * seed + n), n, eta=cfg.eta)
            a, b = s.pair.arrays()
            scale = np.max(np.abs(s.gamma))
            el = max(el, np.max(np.abs(layer_strip(s.pair).values - s.gamma)) / scale)
            ef = max(ef, np.max(np.abs(inlfft(a, b)[0].values - s.gamma)) / scale)
        rows.append((n, el, ef))
    io.write_text(cfg.out, io.csv_text(["n", "err_layer", "err_fast"], rows))
    n = np.array([r[0] for r in rows], dtype=float)
    sl = np.polyfit(np.log(n), np.log([r[1] for r in rows]), 1)[0]
    sf = np.polyfit(np.log(n), np.log([r[2] for r in rows]), 1)[0]
    print(f"log-log slope layer {sl:.2f}, fast {sf:.2f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--min-log2", type=int, default=6)
    ap.add_argument("--max-log2", type=int, default=13)
    ap.add_argument("--eta", type=float, default=0.3)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--out")
    main(TrendConfig(**vars(ap.parse_args())))
