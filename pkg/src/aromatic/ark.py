"""Aromatic Runge-Kutta methods.

Tableau entries are polynomials in aromas. A step of size h applies the
method to the scaled field h f: every aroma is evaluated on h f at the base
point y0 (picking up h^|aroma|), then the stages are solved as usual:

    K_j = h f(y0 + sum_l a_jl K_l),    y1 = y0 + sum_l b_l K_l.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .eldiff import eval_scalar
from .graph import canonical, parse
from .polyfield import DimensionError, FieldJet, PolyVectorField, eval_field

FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAXITER = 100


class NonConvergenceError(RuntimeError):
    def __init__(self, iterations: int, residual: float):
        super().__init__(f"stage fixed-point iteration did not converge after {iterations} "
                         f"iterations (last residual {residual:.3e})")
        self.iterations = iterations
        self.residual = residual


class NonFiniteError(ArithmeticError):
    pass


class StepError(RuntimeError):
    def __init__(self, step: int, cause: Exception):
        super().__init__(f"step {step}: {cause}")
        self.step = step


class UnknownMethodError(KeyError):
    pass


@dataclass(frozen=True)
class AromaticScalar:
    """Sum of coeff * (product of aromas); an empty aroma tuple is the constant term."""

    terms: tuple[tuple[float, tuple[str, ...]], ...] = ()

    def __post_init__(self):
        clean = []
        for coeff, aromas in self.terms:
            names = []
            for a in aromas:
                forest = parse(a)
                if forest.root_count != 0:
                    raise ValueError(f"{a!r} has roots; aromatic coefficients take rootless forests only")
                if forest.node_count:
                    names.append(canonical(a))
            clean.append((float(coeff), tuple(sorted(names))))
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def const(cls, c: float) -> "AromaticScalar":
        return cls(((c, ()),)) if c else cls()

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c, _ in self.terms)

    def evaluate(self, f: PolyVectorField, y, h: float, jet: FieldJet | None = None) -> float:
        return eval_scalar_coeff(self, f, y, h, jet=jet)

    def to_json(self) -> list:
        return [{"coeff": c, "aromas": list(a)} for c, a in self.terms]

    @classmethod
    def from_json(cls, data) -> "AromaticScalar":
        if isinstance(data, (int, float)):
            return cls.const(float(data))
        return cls(tuple((float(t["coeff"]), tuple(t.get("aromas", ()))) for t in data))


def eval_scalar_coeff(c: AromaticScalar, f: PolyVectorField, y, h: float, jet: FieldJet | None = None) -> float:
    """Evaluate on the scaled field h f: each aroma contributes h^(its node count)."""
    jet = jet if jet is not None else FieldJet(f, y)
    total = 0.0
    for coeff, aromas in c.terms:
        term = coeff
        for a in aromas:
            n = parse(a).node_count
            term *= h**n * eval_scalar(a, f, y, jet=jet)
        total += term
    return total


Scalarish = Union[AromaticScalar, float, int]


def _scalar(x: Scalarish) -> AromaticScalar:
    return x if isinstance(x, AromaticScalar) else AromaticScalar.const(float(x))


@dataclass(frozen=True)
class AromaticTableau:
    a: tuple[tuple[AromaticScalar, ...], ...]
    b: tuple[AromaticScalar, ...]
    name: str = ""

    def __post_init__(self):
        a = tuple(tuple(_scalar(x) for x in row) for row in self.a)
        b = tuple(_scalar(x) for x in self.b)
        s = len(b)
        if len(a) != s or any(len(row) != s for row in a):
            raise ValueError(f"tableau shape mismatch: a is {len(a)} rows, b has {s} entries")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def s(self) -> int:
        return len(self.b)

    @property
    def explicit(self) -> bool:
        return all(self.a[j][l].is_zero for j in range(self.s) for l in range(j, self.s))

    def to_json(self) -> dict:
        return {"s": self.s,
                "a": [[x.to_json() for x in row] for row in self.a],
                "b": [x.to_json() for x in self.b]}

    @classmethod
    def from_json(cls, data: Mapping, name: str = "") -> "AromaticTableau":
        s = int(data["s"])
        t = cls(tuple(tuple(AromaticScalar.from_json(x) for x in row) for row in data["a"]),
                tuple(AromaticScalar.from_json(x) for x in data["b"]), name)
        if t.s != s:
            raise ValueError(f"declared s = {s} but b has {t.s} entries")
        return t


def load_tableau(path) -> AromaticTableau:
    p = Path(path)
    return AromaticTableau.from_json(json.loads(p.read_text()), name=p.stem)


def _field(f: PolyVectorField, y: np.ndarray) -> np.ndarray:
    try:
        return eval_field(f, y)
    except OverflowError as e:
        raise NonFiniteError("field evaluation overflowed") from e


def _check_finite(v: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(v)):
        raise NonFiniteError(f"non-finite value in {what}")


def ark_step(t: AromaticTableau, f: PolyVectorField, y0, h: float) -> np.ndarray:
    y0 = np.asarray(y0, dtype=float).reshape(-1)
    if y0.shape[0] != f.dim:
        raise DimensionError(f"point has dimension {y0.shape[0]}, field has {f.dim}")
    if not np.isfinite(h):
        raise NonFiniteError("step size is not finite")
    jet = FieldJet(f, y0)
    A = np.array([[x.evaluate(f, y0, h, jet) for x in row] for row in t.a]).reshape(t.s, t.s)
    B = np.array([x.evaluate(f, y0, h, jet) for x in t.b])
    _check_finite(A, "tableau coefficients")
    _check_finite(B, "tableau weights")

    s = t.s
    K = np.zeros((s, f.dim))
    if t.explicit:
        for j in range(s):
            K[j] = h * _field(f, y0 + A[j, :j] @ K[:j])
    else:
        fy0 = h * _field(f, y0)
        K[:] = fy0
        residual = np.inf
        for it in range(1, FIXED_POINT_MAXITER + 1):
            new = np.array([h * _field(f, y0 + A[j] @ K) for j in range(s)])
            _check_finite(new, "stage values")
            residual = float(np.max(np.abs(new - K))) if new.size else 0.0
            K = new
            if residual <= FIXED_POINT_TOL:
                break
        else:
            raise NonConvergenceError(FIXED_POINT_MAXITER, residual)
    _check_finite(K, "stage values")
    y1 = y0 + B @ K
    _check_finite(y1, "step result")
    return y1


def integrate(t: AromaticTableau, f: PolyVectorField, y0, h: float, steps: int) -> list[np.ndarray]:
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    y = np.asarray(y0, dtype=float).reshape(-1)
    out = [y]
    for i in range(steps):
        try:
            y = ark_step(t, f, y, h)
        except (NonConvergenceError, NonFiniteError) as e:
            raise StepError(i, e) from e
        out.append(y)
    return out


# ---------------------------------------------------------------------------
# built-in methods

LOOP = "({})"


def euler() -> AromaticTableau:
    return AromaticTableau(((0.0,),), (1.0,), "euler")


def aromatic_euler(alpha: float) -> AromaticTableau:
    """Forward Euler with weight 1 + alpha Div(h f)(y0)."""
    b = AromaticScalar(((1.0, ()), (float(alpha), (LOOP,))))
    return AromaticTableau(((0.0,),), (b,), f"aromatic-euler({alpha:g})")


def rk4() -> AromaticTableau:
    a = ((0, 0, 0, 0), (0.5, 0, 0, 0), (0, 0.5, 0, 0), (0, 0, 1, 0))
    return AromaticTableau(a, (1 / 6, 1 / 3, 1 / 3, 1 / 6), "rk4")


def implicit_midpoint() -> AromaticTableau:
    return AromaticTableau(((0.5,),), (1.0,), "implicit-midpoint")


def builtin_methods() -> dict[str, Callable[..., AromaticTableau]]:
    """Registry of method factories; ``aromatic-euler`` takes ``alpha``."""
    return {
        "euler": euler,
        "aromatic-euler": aromatic_euler,
        "rk4": rk4,
        "implicit-midpoint": implicit_midpoint,
    }


_CALL = re.compile(r"^([a-z0-9-]+)\((.*)\)$")


def get_method(name: str, alpha: float | None = None) -> AromaticTableau:
    """Look up ``name`` (``aromatic-euler(0.5)`` style arguments allowed)."""
    registry = builtin_methods()
    m = _CALL.match(name.strip())
    base, arg = (m.group(1), m.group(2)) if m else (name.strip(), None)
    if base not in registry:
        raise UnknownMethodError(f"unknown method {name!r}; known: {', '.join(sorted(registry))}")
    if base == "aromatic-euler":
        if arg is not None:
            alpha = float(arg)
        return aromatic_euler(0.0 if alpha is None else alpha)
    if arg:
        raise ValueError(f"method {base!r} takes no parameter")
    return registry[base]()


def method_names() -> Sequence[str]:
    return ("euler", "aromatic-euler(0)", "aromatic-euler(0.5)", "aromatic-euler(1)", "rk4", "implicit-midpoint")
