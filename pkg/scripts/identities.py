"""Residuals of the d = 2 four-tree degeneracy and of the divergence-free combination across seeds."""

import argparse
from dataclasses import dataclass

import numpy as np

from aromatic.series import degeneracy_residual, divfree_combination, eval_series, fd_divergence
from aromatic.polyfield import random_field


@dataclass
class IdentityConfig:
    seeds: int = 20
    degree: int = 3
    points: int = 5


def main(cfg: IdentityConfig) -> None:
    rng = np.random.default_rng(0)
    b = divfree_combination()
    print(f"{'seed':>4} {'degen d=2':>11} {'degen d=3':>11} {'div d=2':>11} {'div d=3':>11}")
    for seed in range(cfg.seeds):
        row = []
        for d in (2, 3):
            v, s = degeneracy_residual(random_field(d, cfg.degree, seed), rng.uniform(-1, 1, d))
            row.append(float(np.max(np.abs(v))) / (1 + s))
        for d in (2, 3):
            f = random_field(d, cfg.degree, seed)
            worst = 0.0
            for _ in range(cfg.points):
                div, s = fd_divergence(lambda y: eval_series(b, f, y), rng.uniform(-1, 1, d))
                worst = max(worst, abs(div) / (1 + s))
            row.append(worst)
        print(f"{seed:>4} " + " ".join(f"{r:11.2e}" for r in row))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--degree", type=int, default=3)
    a = p.parse_args()
    main(IdentityConfig(a.seeds, a.degree))
