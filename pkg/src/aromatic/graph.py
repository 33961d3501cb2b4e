"""Aromatic forests: directed graphs in which every node has at most one outgoing arrow.

A forest is stored as a successor list: ``successor[v]`` is the target of the
unique arrow leaving ``v``, or ``None`` when ``v`` is a root. Self-loops and
cycles are allowed.

Forests serialize to a canonical string built from three bracket kinds::

    rooted tree  ::= "[" tree* "]"
    cycle node   ::= "{" tree* "}"
    aroma        ::= "(" cyclenode+ ")"
    forest       ::= component (" " component)*

Inside an aroma the cycle nodes are listed along the arrows (each node points
to the next one, the last to the first), starting from the rotation with the
smallest concatenated string. Children and components are sorted, so two
forests share a string iff they are isomorphic.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

DEFAULT_MAX_ORDER = 7


class ParseError(ValueError):
    """Malformed forest string; ``pos`` is the offending character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class OrderCapError(ValueError):
    pass


def max_order() -> int:
    """Enumeration cap, overridable through ``AROMATIC_MAX_ORDER``."""
    raw = os.environ.get("AROMATIC_MAX_ORDER")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_ORDER
    return int(raw)


@dataclass(frozen=True)
class AromaticForest:
    node_count: int
    successor: tuple[Optional[int], ...]

    def __post_init__(self):
        succ = tuple(self.successor)
        object.__setattr__(self, "successor", succ)
        if self.node_count < 0:
            raise ValueError("node_count must be nonnegative")
        if len(succ) != self.node_count:
            raise ValueError(
                f"successor list has {len(succ)} entries for {self.node_count} nodes"
            )
        for v, w in enumerate(succ):
            if w is not None and not 0 <= w < self.node_count:
                raise ValueError(f"arrow {v} -> {w} leaves the node range")

    @classmethod
    def from_arrows(cls, node_count: int, arrows: Iterable[tuple[int, int]]) -> "AromaticForest":
        """Build from ``(source, target)`` pairs; a repeated source is rejected."""
        succ: list[Optional[int]] = [None] * node_count
        for s, t in arrows:
            if succ[s] is not None:
                raise ValueError(f"node {s} has two outgoing arrows")
            succ[s] = t
        return cls(node_count, tuple(succ))

    @property
    def arrow_count(self) -> int:
        return sum(w is not None for w in self.successor)

    @property
    def roots(self) -> list[int]:
        return [v for v, w in enumerate(self.successor) if w is None]

    @property
    def root_count(self) -> int:
        return self.node_count - self.arrow_count

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        """In-neighbours of each node, in increasing index order."""
        preds: list[list[int]] = [[] for _ in range(self.node_count)]
        for v, w in enumerate(self.successor):
            if w is not None:
                preds[w].append(v)
        return tuple(tuple(p) for p in preds)

    def in_degree(self, v: int) -> int:
        return len(self.predecessors[v])

    @cached_property
    def cycle_nodes(self) -> frozenset[int]:
        on_cycle: set[int] = set()
        state = [0] * self.node_count  # 0 unseen, 1 on current walk, 2 done
        for start in range(self.node_count):
            walk = []
            v: Optional[int] = start
            while v is not None and state[v] == 0:
                state[v] = 1
                walk.append(v)
                v = self.successor[v]
            if v is not None and state[v] == 1:
                i = walk.index(v)
                on_cycle.update(walk[i:])
            for u in walk:
                state[u] = 2
        return frozenset(on_cycle)

    def relabel(self, perm: Sequence[int]) -> "AromaticForest":
        """Rename node ``v`` to ``perm[v]``."""
        succ: list[Optional[int]] = [None] * self.node_count
        for v, w in enumerate(self.successor):
            succ[perm[v]] = None if w is None else perm[w]
        return AromaticForest(self.node_count, tuple(succ))

    def union(self, other: "AromaticForest") -> "AromaticForest":
        shift = self.node_count
        succ = self.successor + tuple(None if w is None else w + shift for w in other.successor)
        return AromaticForest(self.node_count + other.node_count, succ)

    def __str__(self) -> str:
        return canonicalize(self)


# ---------------------------------------------------------------------------
# canonical form


def _min_rotation(items: list[str]) -> list[str]:
    best = items
    best_key = "".join(items)
    for i in range(1, len(items)):
        rot = items[i:] + items[:i]
        key = "".join(rot)
        if key < best_key:
            best, best_key = rot, key
    return best


def _components(forest: AromaticForest) -> list[tuple[str, list[int]]]:
    """Canonical string of each connected component, with its cycle order (if any)."""
    preds = forest.predecessors
    cyc = forest.cycle_nodes
    memo: dict[int, str] = {}

    def tree(v: int) -> str:
        if v not in memo:
            kids = sorted(tree(u) for u in preds[v] if u not in cyc)
            memo[v] = "[" + "".join(kids) + "]"
        return memo[v]

    def cycle_node(v: int) -> str:
        kids = sorted(tree(u) for u in preds[v] if u not in cyc)
        return "{" + "".join(kids) + "}"

    out: list[tuple[str, list[int]]] = []
    for r in forest.roots:
        out.append((tree(r), [r]))
    seen: set[int] = set()
    for v in sorted(cyc):
        if v in seen:
            continue
        order = [v]
        w = forest.successor[v]
        while w != v:
            order.append(w)
            w = forest.successor[w]
        seen.update(order)
        strings = [cycle_node(u) for u in order]
        rotated = _min_rotation(strings)
        out.append(("(" + "".join(rotated) + ")", order))
    return out


def canonicalize(forest: AromaticForest) -> str:
    """Canonical string of ``forest``; equal strings means isomorphic forests."""
    return " ".join(sorted(s for s, _ in _components(forest)))


def decompose(forest: AromaticForest) -> tuple[list[str], list[str]]:
    """Split into rooted-tree components and aroma components (canonical, sorted)."""
    trees, aromas = [], []
    for s, _ in _components(forest):
        (aromas if s.startswith("(") else trees).append(s)
    return sorted(trees), sorted(aromas)


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.depth = 0
        self.succ: list[Optional[int]] = []

    def new_node(self) -> int:
        self.succ.append(None)
        return len(self.succ) - 1

    def peek(self) -> str:
        # whitespace inside brackets is tolerated on input
        while self.depth and self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise ParseError(f"expected {ch!r}, found {found}", self.pos)
        self.pos += 1

    def children(self, parent: int, close: str) -> None:
        self.depth += 1
        while self.peek() == "[":
            child = self.tree()
            self.succ[child] = parent
        self.depth -= 1
        self.expect(close)

    def tree(self) -> int:
        self.expect("[")
        v = self.new_node()
        self.children(v, "]")
        return v

    def aroma(self) -> None:
        start = self.pos
        self.expect("(")
        self.depth += 1
        ring = []
        while self.peek() == "{":
            self.pos += 1
            v = self.new_node()
            self.children(v, "}")
            ring.append(v)
        self.depth -= 1
        if not ring:
            if self.peek() == ")":
                raise ParseError("aroma declares an empty cycle", start)
            raise ParseError(f"expected '{{', found {self.peek() or 'end of input'!r}", self.pos)
        self.expect(")")
        for a, b in zip(ring, ring[1:] + ring[:1]):
            self.succ[a] = b

    def forest(self) -> AromaticForest:
        n = len(self.text)
        while True:
            while self.pos < n and self.text[self.pos] == " ":
                self.pos += 1
            if self.pos >= n:
                break
            ch = self.peek()
            if ch == "[":
                self.tree()
            elif ch == "(":
                self.aroma()
            else:
                raise ParseError(f"unexpected character {ch!r}", self.pos)
            if self.pos < n and self.text[self.pos] != " ":
                raise ParseError("components must be separated by a space", self.pos)
        return AromaticForest(len(self.succ), tuple(self.succ))


def parse(text: str) -> AromaticForest:
    """Parse a forest string. Children and components need not be sorted.

    Nodes are numbered in order of appearance, so parsing a canonical string
    yields a canonical labelling.
    """
    return _Parser(text.strip()).forest()


def canonical(text: str) -> str:
    return canonicalize(parse(text))


# ---------------------------------------------------------------------------
# compositions


@dataclass(frozen=True, eq=False)
class Composition:
    """Finitely supported map j -> counts[j]; trailing zeros are not significant."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ValueError("composition entries must be nonnegative")
        object.__setattr__(self, "counts", counts)

    def _key(self) -> tuple[int, ...]:
        c = list(self.counts)
        while c and c[-1] == 0:
            c.pop()
        return tuple(c)

    def __eq__(self, other):
        if isinstance(other, Composition):
            return self._key() == other._key()
        if isinstance(other, tuple):
            return self._key() == Composition(other)._key()
        return NotImplemented

    def __hash__(self):
        return hash(self._key())

    def __getitem__(self, j: int) -> int:
        return self.counts[j] if 0 <= j < len(self.counts) else 0

    def __len__(self):
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    @property
    def size(self) -> int:
        return sum(self.counts)

    @property
    def derived_size(self) -> int:
        return sum(j * c for j, c in enumerate(self.counts))

    def derived(self) -> "Composition":
        return derived_composition(self)

    @property
    def is_tree_composition(self) -> bool:
        return self.size == self.derived_size + 1

    def __repr__(self):
        return "(" + ",".join(map(str, self._key() or self.counts[:1])) + ")"


def composition(forest: AromaticForest) -> Composition:
    """Count nodes by number of incoming arrows."""
    indeg = Counter(len(p) for p in forest.predecessors)
    top = max(indeg, default=0)
    if forest.node_count == 0:
        return Composition(())
    return Composition(tuple(indeg.get(j, 0) for j in range(top + 1)))


def derived_composition(c: Composition) -> Composition:
    return Composition(tuple(j * k for j, k in enumerate(c.counts)))


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple[str, ...]:
    found = set()
    for tail in itertools.product(range(n), repeat=n - 1):
        found.add(canonicalize(AromaticForest(n, (None,) + tail)))
    return tuple(sorted(found))


def enumerate_trees(n: int, cap: Optional[int] = None) -> list[str]:
    """All aromatic trees with ``n`` nodes, as sorted canonical strings.

    Brute force: node 0 is the root, every other node picks any successor.
    """
    if n < 1:
        raise ValueError("order must be at least 1")
    cap = max_order() if cap is None else cap
    if n > cap:
        raise OrderCapError(f"order {n} exceeds the enumeration cap {cap}")
    return list(_enumerate(n))


def trees_up_to(n: int, cap: Optional[int] = None) -> list[str]:
    out: list[str] = []
    for k in range(1, n + 1):
        out.extend(enumerate_trees(k, cap))
    return out


def trees_by_composition(n: int, cap: Optional[int] = None) -> dict[Composition, list[str]]:
    groups: dict[Composition, list[str]] = {}
    for s in enumerate_trees(n, cap):
        groups.setdefault(composition(parse(s)), []).append(s)
    return groups
