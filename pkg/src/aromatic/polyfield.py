"""Polynomial vector fields on R^d with exact differentiation and the affine action.

A polynomial is a dict mapping exponent tuples to float coefficients; zero
coefficients are never stored.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

Poly = dict[tuple[int, ...], float]

COND_LIMIT = 1e12


class DimensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalar polynomial arithmetic


def _clean(p: Mapping[tuple[int, ...], float]) -> Poly:
    return {e: float(c) for e, c in p.items() if c != 0}


def poly_const(c: float, dim: int) -> Poly:
    return _clean({(0,) * dim: c})


def poly_add(p: Poly, q: Poly, scale: float = 1.0) -> Poly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0.0) + scale * c
    return _clean(out)


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: dict[tuple[int, ...], float] = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0.0) + c1 * c2
    return _clean(out)


def poly_diff(p: Poly, var: int) -> Poly:
    out: dict[tuple[int, ...], float] = {}
    for e, c in p.items():
        k = e[var]
        if k == 0:
            continue
        e2 = e[:var] + (k - 1,) + e[var + 1 :]
        out[e2] = out.get(e2, 0.0) + c * k
    return _clean(out)


def poly_eval(p: Poly, x: Sequence[float]) -> float:
    total = 0.0
    for e, c in p.items():
        term = c
        for xi, k in zip(x, e):
            if k:
                term *= xi**k
        total += term
    return total


def poly_degree(p: Poly) -> int:
    """Total degree; -1 for the zero polynomial."""
    return max((sum(e) for e in p), default=-1)


def monomials(dim: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree <= ``degree``, graded then lexicographic."""
    out = []
    for total in range(degree + 1):
        for e in itertools.product(range(total + 1), repeat=dim):
            if sum(e) == total:
                out.append(e)
    return out


# ---------------------------------------------------------------------------
# vector fields


@dataclass(frozen=True)
class PolyVectorField:
    dim: int
    components: tuple[Poly, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("dim must be positive")
        comps = tuple(_clean({tuple(int(k) for k in e): c for e, c in p.items()}) for p in self.components)
        if len(comps) != self.dim:
            raise DimensionError(f"expected {self.dim} components, got {len(comps)}")
        for p in comps:
            for e in p:
                if len(e) != self.dim or any(k < 0 for k in e):
                    raise DimensionError(f"bad exponent {e} for dim {self.dim}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, dim: int) -> "PolyVectorField":
        return cls(dim, tuple({} for _ in range(dim)))

    @classmethod
    def constant(cls, c: Sequence[float]) -> "PolyVectorField":
        d = len(c)
        return cls(d, tuple(poly_const(ci, d) for ci in c))

    @classmethod
    def linear(cls, A) -> "PolyVectorField":
        """The field x -> A x."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        d = A.shape[0]
        unit = [tuple(int(i == j) for i in range(d)) for j in range(d)]
        return cls(d, tuple(_clean({unit[j]: A[k, j] for j in range(d)}) for k in range(d)))

    def __call__(self, x) -> np.ndarray:
        return eval_field(self, x)

    def scaled(self, c: float) -> "PolyVectorField":
        return PolyVectorField(self.dim, tuple({e: c * v for e, v in p.items()} for p in self.components))

    @property
    def degree(self) -> int:
        return max(poly_degree(p) for p in self.components)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "components": [
                [{"coeff": c, "exponents": list(e)} for e, c in sorted(p.items())]
                for p in self.components
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "PolyVectorField":
        dim = int(data["dim"])
        comps = []
        for terms in data["components"]:
            p: dict[tuple[int, ...], float] = {}
            for t in terms:
                e = tuple(int(k) for k in t["exponents"])
                p[e] = p.get(e, 0.0) + float(t["coeff"])
            comps.append(p)
        return cls(dim, tuple(comps))


def load_field(path) -> PolyVectorField:
    return PolyVectorField.from_dict(json.loads(Path(path).read_text()))


def save_field(f: PolyVectorField, path) -> None:
    Path(path).write_text(json.dumps(f.to_dict(), indent=1) + "\n")


def _check_point(f: PolyVectorField, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != f.dim:
        raise DimensionError(f"point has dimension {x.shape[0]}, field has {f.dim}")
    return x


def eval_field(f: PolyVectorField, x) -> np.ndarray:
    x = _check_point(f, x)
    xs = x.tolist()
    return np.array([poly_eval(p, xs) for p in f.components])


def partial(f: PolyVectorField, component: int, vars: Sequence[int] = ()) -> Poly:
    """Iterated partial derivative of one component; the order of ``vars`` is irrelevant."""
    if not 0 <= component < f.dim:
        raise IndexError(f"component {component} out of range for dim {f.dim}")
    p = f.components[component]
    for v in sorted(vars):
        if not 0 <= v < f.dim:
            raise IndexError(f"variable {v} out of range for dim {f.dim}")
        p = poly_diff(p, v)
    return p


def divergence(f: PolyVectorField) -> Poly:
    out: Poly = {}
    for k in range(f.dim):
        out = poly_add(out, partial(f, k, (k,)))
    return out


def jacobian(f: PolyVectorField, x) -> np.ndarray:
    x = _check_point(f, x).tolist()
    return np.array([[poly_eval(partial(f, k, (j,)), x) for j in range(f.dim)] for k in range(f.dim)])


class FieldJet:
    """Memoized partial-derivative values of ``f`` at a fixed point ``x``.

    ``value(k, vars)`` returns d^|vars| f^k / dx_vars at x; lookups are keyed by
    the sorted variable multiset, so symmetric permutations share one entry.
    """

    def __init__(self, f: PolyVectorField, x):
        self.f = f
        self.x = _check_point(f, x)
        self._xs = self.x.tolist()
        self._polys: dict[tuple[int, tuple[int, ...]], Poly] = {}
        self._values: dict[tuple[int, tuple[int, ...]], float] = {}

    def poly(self, k: int, vars: tuple[int, ...]) -> Poly:
        key = (k, vars)
        p = self._polys.get(key)
        if p is None:
            if vars:
                p = poly_diff(self.poly(k, vars[:-1]), vars[-1])
            else:
                p = self.f.components[k]
            self._polys[key] = p
        return p

    def value(self, k: int, vars=()) -> float:
        key = (k, tuple(sorted(vars)))
        v = self._values.get(key)
        if v is None:
            v = poly_eval(self.poly(*key), self._xs)
            self._values[key] = v
        return v


# ---------------------------------------------------------------------------
# affine group


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> matrix @ x + translation."""

    matrix: np.ndarray
    translation: np.ndarray = field(default=None)

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionError(f"matrix must be square, got shape {A.shape}")
        b = np.zeros(A.shape[0]) if self.translation is None else np.asarray(self.translation, dtype=float).reshape(-1)
        if b.shape[0] != A.shape[0]:
            raise DimensionError("translation length does not match matrix")
        if not np.all(np.isfinite(A)) or np.linalg.cond(A) > COND_LIMIT:
            raise np.linalg.LinAlgError("affine matrix is singular or too ill-conditioned")
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "translation", b)

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        return cls(np.eye(dim), np.zeros(dim))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=float) + self.translation

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self o other."""
        return AffineMap(self.matrix @ other.matrix, self.matrix @ other.translation + self.translation)

    def inverse(self) -> "AffineMap":
        M = np.linalg.inv(self.matrix)
        return AffineMap(M, -M @ self.translation)


def affine_act(g: AffineMap, f: PolyVectorField) -> PolyVectorField:
    """The pushed-forward field x -> A f(A^{-1}(x - b)), by exact substitution."""
    d = f.dim
    if g.dim != d:
        raise DimensionError(f"affine map has dim {g.dim}, field has {d}")
    inv = g.inverse()
    M, c = inv.matrix, inv.translation
    unit = [tuple(int(i == j) for i in range(d)) for j in range(d)]
    # x_i  ->  sum_j M_ij x_j + c_i
    forms = [_clean({**{unit[j]: M[i, j] for j in range(d)}, (0,) * d: c[i]}) for i in range(d)]
    powers: dict[tuple[int, int], Poly] = {}

    def power(i: int, k: int) -> Poly:
        if k == 0:
            return {(0,) * d: 1.0}
        if (i, k) not in powers:
            powers[(i, k)] = poly_mul(power(i, k - 1), forms[i])
        return powers[(i, k)]

    substituted = []
    for p in f.components:
        q: Poly = {}
        for e, coeff in p.items():
            term: Poly = {(0,) * d: coeff}
            for i, k in enumerate(e):
                if k:
                    term = poly_mul(term, power(i, k))
            q = poly_add(q, term)
        substituted.append(q)

    A = g.matrix
    out = []
    for k in range(d):
        r: Poly = {}
        for m in range(d):
            if A[k, m] != 0:
                r = poly_add(r, substituted[m], A[k, m])
        out.append(r)
    return PolyVectorField(d, tuple(out))


def max_coeff_diff(f: PolyVectorField, g: PolyVectorField) -> float:
    """Largest coefficientwise difference (missing monomials count as zero)."""
    if f.dim != g.dim:
        raise DimensionError("dimension mismatch")
    worst = 0.0
    for p, q in zip(f.components, g.components):
        for e in set(p) | set(q):
            worst = max(worst, abs(p.get(e, 0.0) - q.get(e, 0.0)))
    return worst


def random_field(dim: int, degree: int, seed: int, low: int = -3, high: int = 3) -> PolyVectorField:
    """Integer-coefficient field with every monomial of degree <= ``degree`` drawn from [low, high]."""
    if dim < 1 or degree < 0:
        raise ValueError("need dim >= 1 and degree >= 0")
    rng = np.random.default_rng(seed)
    monos = monomials(dim, degree)
    comps = []
    for _ in range(dim):
        coeffs = rng.integers(low, high + 1, size=len(monos))
        comps.append({e: float(c) for e, c in zip(monos, coeffs) if c != 0})
    return PolyVectorField(dim, tuple(comps))


def random_affine(rng: np.random.Generator, dim: int, max_cond: float = 10.0) -> AffineMap:
    """Entries uniform in [-1, 1], redrawn until the condition number is <= ``max_cond``."""
    while True:
        A = rng.uniform(-1.0, 1.0, size=(dim, dim))
        if np.linalg.cond(A) <= max_cond:
            return AffineMap(A, rng.uniform(-1.0, 1.0, size=dim))
