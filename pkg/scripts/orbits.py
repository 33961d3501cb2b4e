"""Orbit classes of permutations under the block numbering, for every tree composition up to a size."""

import argparse
import math
from dataclasses import dataclass

from aromatic.tensormap import format_table, orbit_classes, tree_compositions


@dataclass
class OrbitConfig:
    max_size: int = 4
    verbose: bool = False


def main(cfg: OrbitConfig) -> None:
    for kappa in tree_compositions(cfg.max_size):
        if cfg.verbose:
            print(format_table(kappa))
            print()
            continue
        classes = orbit_classes(kappa)
        sizes = sorted((len(v) for v in classes.values()), reverse=True)
        print(f"{kappa!r:<14} n!={math.factorial(kappa.size):<5} classes={len(classes):<3} sizes={sizes}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-size", type=int, default=4)
    p.add_argument("--verbose", action="store_true")
    a = p.parse_args()
    main(OrbitConfig(a.max_size, a.verbose))
