"""Permutations to aromatic trees: the block numbering of a composition and its orbit classes.

For a composition kappa with |kappa| = |kappa'| + 1, nodes 1..n are numbered
by ascending in-degree and arrows 2..n fill the incoming slots in node order,
which fixes a target map tau. A permutation sigma then defines the tree with
arrows a = 2..n running from sigma^{-1}(a) to tau(a). Identifiers here are
1-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .graph import AromaticForest, Composition, canonicalize

MAX_PERM_SIZE = 7


@dataclass(frozen=True)
class BlockNumbering:
    kappa: Composition
    in_degree: tuple[int, ...]  # in_degree[i - 1] for node i
    tau: dict[int, int]  # arrow id -> node id

    @property
    def size(self) -> int:
        return len(self.in_degree)


@dataclass(frozen=True)
class Permutation:
    """Bijection on {1..n}; ``image[i - 1]`` is sigma(i)."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(i) for i in self.image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise ValueError(f"{image} is not a permutation of 1..{len(image)}")
        object.__setattr__(self, "image", image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image, 1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def __len__(self):
        return len(self.image)

    def __str__(self):
        return "(" + ",".join(map(str, self.image)) + ")"


def _as_composition(kappa) -> Composition:
    return kappa if isinstance(kappa, Composition) else Composition(tuple(kappa))


def target_map(kappa) -> BlockNumbering:
    kappa = _as_composition(kappa)
    if not kappa.is_tree_composition:
        raise ValueError(f"composition {kappa!r} has |k| = {kappa.size} != |k'| + 1 = {kappa.derived_size + 1}")
    in_degree = tuple(j for j, count in enumerate(kappa.counts) for _ in range(count))
    tau: dict[int, int] = {}
    arrow = 2
    for node, j in enumerate(in_degree, 1):
        for _ in range(j):
            tau[arrow] = node
            arrow += 1
    return BlockNumbering(kappa, in_degree, tau)


def perm_to_tree(sigma: Permutation | Sequence[int], numbering: BlockNumbering) -> AromaticForest:
    """Tree on nodes 1..n (returned 0-based) with arrows sigma^{-1}(a) -> tau(a)."""
    if not isinstance(sigma, Permutation):
        sigma = Permutation(tuple(sigma))
    n = numbering.size
    if len(sigma) != n:
        raise ValueError(f"permutation acts on {len(sigma)} points, numbering has {n} nodes")
    inv = sigma.inverse()
    return AromaticForest.from_arrows(n, ((inv(a) - 1, t - 1) for a, t in numbering.tau.items()))


def orbit_classes(kappa, cap: int = MAX_PERM_SIZE) -> dict[str, list[Permutation]]:
    """Group all permutations of 1..|kappa| by the canonical string of their tree."""
    numbering = target_map(kappa)
    n = numbering.size
    if n > cap:
        raise ValueError(f"{n}! permutations exceeds the cap ({cap}!)")
    classes: dict[str, list[Permutation]] = {}
    for image in itertools.permutations(range(1, n + 1)):
        sigma = Permutation(image)
        classes.setdefault(canonicalize(perm_to_tree(sigma, numbering)), []).append(sigma)
    return dict(sorted(classes.items()))


def tree_compositions(max_size: int) -> list[Composition]:
    """Every composition with |k| = |k'| + 1 and 1 <= |k| <= max_size."""
    out = []
    for n in range(1, max_size + 1):
        # in-degrees are at most n - 1 since there are n - 1 arrows
        for counts in _weak_compositions(n, n):
            c = Composition(counts)
            if c.is_tree_composition:
                out.append(c)
    return out


def _weak_compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def format_table(kappa) -> str:
    """Text table of the orbit classes: one permutation per line, grouped by tree."""
    classes = orbit_classes(kappa)
    lines = [f"kappa = {_as_composition(kappa)!r}  ({math.factorial(target_map(kappa).size)} permutations, "
             f"{len(classes)} classes)"]
    ordered = sorted(classes.items(), key=lambda kv: (-len(kv[1]), kv[0]))
    for tree, perms in ordered:
        lines.append(f"class {tree}  size {len(perms)}")
        lines.extend(f"  {p}" for p in perms)
    return "\n".join(lines)
