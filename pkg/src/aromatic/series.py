"""Truncated aromatic B-series and two linear identities between elementary differentials."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from .eldiff import eval_vector
from .graph import Composition, OrderCapError, canonical, composition, parse
from .graph import max_order as order_cap
from .polyfield import DimensionError, FieldJet, PolyVectorField

# Four trees of composition (1,2): in dimension two their combination vanishes
# identically (for a linear field it is the Cayley-Hamilton theorem).
DEGENERACY_2D: dict[str, float] = {
    "({}) ({}) []": 1.0,  # f Div(f)^2
    "[[[]]]": 2.0,  # f'f'f
    "({}) [[]]": -2.0,  # f'f Div(f)
    "({}{}) []": -1.0,  # f Tr(f'^2)
}

# Order-3 combination whose vector field is divergence free for every f:
#   f'f Div f + f''(f, f) - f <d Div f, f> - f Tr(f'^2)
DIVFREE: dict[str, float] = {
    "({}) [[]]": 1.0,
    "[[][]]": 1.0,
    "({[]}) []": -1.0,
    "({}{}) []": -1.0,
}


@dataclass
class BSeriesCoefficients:
    """Map from canonical aromatic-tree strings to coefficients; absent keys are zero."""

    coeffs: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[str, float] = {}
        for key, value in self.coeffs.items():
            forest = parse(key)
            if forest.root_count != 1:
                raise ValueError(f"{key!r} is not an aromatic tree (has {forest.root_count} roots)")
            k = canonical(key)
            clean[k] = clean.get(k, 0.0) + float(value)
        self.coeffs = clean

    def __getitem__(self, tree: str) -> float:
        return self.coeffs.get(canonical(tree), 0.0)

    def items(self) -> list[tuple[str, float]]:
        """Nonzero entries sorted by order, then canonical string."""
        return sorted(((k, v) for k, v in self.coeffs.items() if v != 0),
                      key=lambda kv: (parse(kv[0]).node_count, kv[0]))

    def dumps(self) -> str:
        return "".join(f"{k}\t{v!r}\n" for k, v in self.items())

    @classmethod
    def loads(cls, text: str) -> "BSeriesCoefficients":
        coeffs: dict[str, float] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if "\t" not in line:
                raise ValueError(f"line {lineno}: expected '<tree>\\t<coefficient>'")
            tree, value = line.rsplit("\t", 1)
            key = canonical(tree)
            coeffs[key] = coeffs.get(key, 0.0) + float(value)
        return cls(coeffs)

    @classmethod
    def load(cls, path) -> "BSeriesCoefficients":
        return cls.loads(Path(path).read_text())

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())


def eval_series(b: BSeriesCoefficients | Mapping[str, float], f: PolyVectorField, x, h: float = 1.0,
                max_order: Optional[int] = None) -> np.ndarray:
    """Sum of h^|t| b(t) F(t)(f)(x) over trees t with |t| <= max_order."""
    if not isinstance(b, BSeriesCoefficients):
        b = BSeriesCoefficients(dict(b))
    cap = order_cap()
    n = cap if max_order is None else max_order
    if n > cap:
        raise OrderCapError(f"order {n} exceeds the cap {cap}")
    jet = FieldJet(f, x)
    total = np.zeros(f.dim)
    for tree, coeff in b.items():
        order = parse(tree).node_count
        if order > n:
            continue
        total = total + (h**order * coeff) * eval_vector(tree, f, x, jet=jet)
    return total


def product_formula(kappa: Composition | tuple, f: PolyVectorField, x) -> float:
    """prod_j (f^(j)(x))^kappa(j) for a one-dimensional field."""
    if f.dim != 1:
        raise DimensionError("the product formula is one-dimensional")
    kappa = kappa if isinstance(kappa, Composition) else Composition(tuple(kappa))
    jet = FieldJet(f, x)
    out = 1.0
    for j, count in enumerate(kappa.counts):
        if count:
            out *= jet.value(0, (0,) * j) ** count
    return out


def collapse_1d(trees: Iterable[str], f: PolyVectorField, x) -> list[float]:
    """F(t)(f)(x) for each tree; in one dimension these all coincide for a fixed composition."""
    if f.dim != 1:
        raise DimensionError("collapse_1d needs a one-dimensional field")
    trees = list(trees)
    comps = {composition(parse(t)) for t in trees}
    if len(comps) > 1:
        raise ValueError(f"trees have different compositions: {sorted(map(repr, comps))}")
    jet = FieldJet(f, x)
    return [float(eval_vector(t, f, x, jet=jet)[0]) for t in trees]


def combination_terms(combo: Mapping[str, float], f: PolyVectorField, x) -> list[np.ndarray]:
    jet = FieldJet(f, x)
    return [c * eval_vector(t, f, x, jet=jet) for t, c in combo.items()]


def degeneracy_residual(f: PolyVectorField, x) -> tuple[np.ndarray, float]:
    """Value of the four-tree combination and the largest single-term magnitude."""
    terms = combination_terms(DEGENERACY_2D, f, x)
    return sum(terms), max(float(np.max(np.abs(t))) for t in terms)


def degeneracy_2d(f: PolyVectorField, x) -> np.ndarray:
    if f.dim != 2:
        raise DimensionError("the four-tree degeneracy is specific to d = 2")
    return degeneracy_residual(f, x)[0]


def divfree_combination() -> BSeriesCoefficients:
    return BSeriesCoefficients(dict(DIVFREE))


def fd_divergence(field_fn: Callable[[np.ndarray], np.ndarray], x, step: float = 1e-5) -> tuple[float, float]:
    """Central-difference divergence and the largest |field| seen on the stencil."""
    x = np.asarray(x, dtype=float)
    div = 0.0
    scale = float(np.max(np.abs(field_fn(x)))) if x.size else 0.0
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = step
        plus, minus = field_fn(x + e), field_fn(x - e)
        div += (plus[k] - minus[k]) / (2 * step)
        scale = max(scale, float(np.max(np.abs(plus))), float(np.max(np.abs(minus))))
    return div, scale

