"""Print the aromatic trees of order <= N with composition, derived composition and index form."""

import argparse
from dataclasses import dataclass

from aromatic.eldiff import index_string
from aromatic.graph import composition, decompose, derived_composition, enumerate_trees, parse


@dataclass
class CensusConfig:
    max_order: int = 4


def main(cfg: CensusConfig) -> None:
    for n in range(1, cfg.max_order + 1):
        trees = enumerate_trees(n)
        print(f"# order {n}: {len(trees)} trees")
        for t in trees:
            forest = parse(t)
            kappa = composition(forest)
            rooted, aromas = decompose(forest)
            parts = " + ".join(repr(composition(parse(s))) for s in rooted + aromas)
            print(f"{t:<22} {kappa!r:<12} {derived_composition(kappa)!r:<12} {parts:<24} {index_string(t)}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-order", type=int, default=4)
    main(CensusConfig(p.parse_args().max_order))
