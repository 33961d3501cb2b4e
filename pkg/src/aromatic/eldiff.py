"""Elementary differentials of aromatic forests evaluated on polynomial fields.

Every node v carries an index l(v) in {0..d-1} and contributes the factor

    d^m f^{l(v)} / dx_{l(u1)} ... dx_{l(um)}      (u1..um the in-neighbours of v)

and the elementary differential is the sum of the product of these factors
over all labellings. For a one-root forest the root index stays free and the
result is a vector; for a rootless forest it is a scalar.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from .graph import AromaticForest, canonicalize, parse
from .polyfield import FieldJet, PolyVectorField

MAX_NODES = 9

ForestLike = Union[str, AromaticForest]

INDEX_LETTERS = "ijmnpqrstuvwxyzabcdegh"


class RootCountError(ValueError):
    pass


class NodeCapError(ValueError):
    pass


@lru_cache(maxsize=4096)
def _canonical_from_text(text: str) -> AromaticForest:
    return parse(canonicalize(parse(text)))


def as_canonical_forest(forest: ForestLike) -> AromaticForest:
    """Relabel so nodes follow canonical-string order."""
    if isinstance(forest, str):
        return _canonical_from_text(forest)
    return _canonical_from_text(canonicalize(forest))


def _jet(f: PolyVectorField, x, jet: Optional[FieldJet]) -> FieldJet:
    if jet is not None:
        if jet.f is not f:
            raise ValueError("jet was built for a different field")
        return jet
    return FieldJet(f, x)


def _labelled_sum(forest: AromaticForest, jet: FieldJet, fixed: dict[int, int]) -> float:
    d = jet.f.dim
    preds = forest.predecessors
    free = [v for v in range(forest.node_count) if v not in fixed]
    label = [0] * forest.node_count
    for v, k in fixed.items():
        label[v] = k
    total = 0.0
    for labels in itertools.product(range(d), repeat=len(free)):
        for v, k in zip(free, labels):
            label[v] = k
        term = 1.0
        for v in range(forest.node_count):
            term *= jet.value(label[v], [label[u] for u in preds[v]])
            if term == 0.0:
                break
        total += term
    return total


def _check_size(forest: AromaticForest, max_nodes: int) -> None:
    if forest.node_count > max_nodes:
        raise NodeCapError(f"{forest.node_count} nodes exceeds the evaluation cap {max_nodes}")


def eval_vector(tree: ForestLike, f: PolyVectorField, x, *, jet: Optional[FieldJet] = None,
                max_nodes: int = MAX_NODES) -> np.ndarray:
    """F(tree)(f)(x) for a forest with exactly one root."""
    forest = as_canonical_forest(tree)
    if forest.root_count != 1:
        raise RootCountError(f"expected one root, found {forest.root_count}")
    _check_size(forest, max_nodes)
    jet = _jet(f, x, jet)
    root = forest.roots[0]
    return np.array([_labelled_sum(forest, jet, {root: k}) for k in range(f.dim)])


def eval_scalar(forest: ForestLike, f: PolyVectorField, x, *, jet: Optional[FieldJet] = None,
                max_nodes: int = MAX_NODES) -> float:
    """Full contraction of a rootless forest (a product of aromas); 1 for the empty forest."""
    forest = as_canonical_forest(forest)
    if forest.root_count != 0:
        raise RootCountError(f"expected no roots, found {forest.root_count}")
    _check_size(forest, max_nodes)
    jet = _jet(f, x, jet)
    return _labelled_sum(forest, jet, {})


def eval_forest(forest: ForestLike, f: PolyVectorField, x, *, jet: Optional[FieldJet] = None):
    """Vector for one-root forests, scalar for rootless ones."""
    forest = as_canonical_forest(forest)
    if forest.root_count == 0:
        return eval_scalar(forest, f, x, jet=jet)
    return eval_vector(forest, f, x, jet=jet)


def eval_homogeneity_check(tree: ForestLike, f: PolyVectorField, x, c: float) -> tuple[np.ndarray, np.ndarray]:
    """Return (F(tree)(c f)(x), c^n F(tree)(f)(x)); the two agree by multilinearity."""
    forest = as_canonical_forest(tree)
    lhs = eval_vector(forest, f.scaled(c), x)
    rhs = c ** forest.node_count * eval_vector(forest, f, x)
    return lhs, rhs


def index_string(forest: ForestLike) -> str:
    """Einstein-notation contraction, e.g. ``f^k_{ij} f^i_m f^m f^j``.

    Rooted components come first. Letters are handed out breadth-first from
    each component's first node (root gets ``k`` when there is a single root);
    factors are written in canonical node order.
    """
    forest = as_canonical_forest(forest)
    if forest.node_count == 0:
        return "1"
    preds = forest.predecessors
    roots = forest.roots
    # a component starts at its lowest node id (the root or first cycle node)
    starts = []
    seen: set[int] = set()
    order_by_comp: list[list[int]] = []
    for s in range(forest.node_count):
        if s in seen:
            continue
        comp_nodes = _component_of(forest, s)
        seen |= comp_nodes
        starts.append(min(comp_nodes))
    starts.sort(key=lambda s: (s not in roots, s))

    letters = iter(INDEX_LETTERS)
    fallback = itertools.count(1)

    def next_letter() -> str:
        try:
            return next(letters)
        except StopIteration:
            return f"i{next(fallback)}"

    name: dict[int, str] = {}
    for s in starts:
        comp = []
        queue = [s]
        while queue:
            v = queue.pop(0)
            if v in name:
                continue
            if len(roots) == 1 and v == roots[0]:
                name[v] = "k"
            else:
                name[v] = next_letter()
            comp.append(v)
            queue.extend(u for u in preds[v] if u not in name)
        order_by_comp.append(sorted(comp))

    factors = []
    for comp in order_by_comp:
        for v in comp:
            lower = "".join(name[u] for u in preds[v])
            if not lower:
                factors.append(f"f^{name[v]}")
            elif len(lower) == 1:
                factors.append(f"f^{name[v]}_{lower}")
            else:
                factors.append(f"f^{name[v]}_{{{lower}}}")
    return " ".join(factors)


def _component_of(forest: AromaticForest, v: int) -> set[int]:
    adj: dict[int, set[int]] = {u: set(forest.predecessors[u]) for u in range(forest.node_count)}
    for u, w in enumerate(forest.successor):
        if w is not None:
            adj[u].add(w)
    comp = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in comp:
                comp.add(w)
                stack.append(w)
    return comp
