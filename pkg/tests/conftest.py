import numpy as np
import pytest
import sympy as sp
from hypothesis import settings

from aromatic.polyfield import PolyVectorField

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def sympy_components(f: PolyVectorField):
    xs = sp.symbols(f"x0:{f.dim}")
    comps = []
    for p in f.components:
        expr = sp.Integer(0)
        for e, c in p.items():
            term = sp.nsimplify(c)
            for xi, k in zip(xs, e):
                term *= xi**k
            expr += term
        comps.append(sp.expand(expr))
    return xs, comps


class SympyJet:
    """Derivative tensors of a polynomial field at a point, computed symbolically."""

    def __init__(self, f: PolyVectorField, x):
        self.xs, self.comps = sympy_components(f)
        self.d = f.dim
        self.subs = dict(zip(self.xs, [sp.nsimplify(float(v)) for v in x]))

    def _val(self, expr):
        return float(expr.subs(self.subs))

    def tensor(self, order: int) -> np.ndarray:
        shape = (self.d,) * (order + 1)
        out = np.zeros(shape)
        for idx in np.ndindex(*shape):
            expr = self.comps[idx[0]]
            for i in idx[1:]:
                expr = sp.diff(expr, self.xs[i])
            out[idx] = self._val(expr)
        return out

    @property
    def f(self):
        return self.tensor(0)

    @property
    def jac(self):
        return self.tensor(1)

    @property
    def hess(self):
        return self.tensor(2)

    @property
    def div(self) -> float:
        return self._val(sum(sp.diff(c, x) for c, x in zip(self.comps, self.xs)))


@pytest.fixture
def sympy_jet():
    return SympyJet


def rel(a, b) -> float:
    a, b = np.atleast_1d(a), np.atleast_1d(b)
    return float(np.max(np.abs(a - b)) / (1 + np.max(np.abs(b))))


_ACCEPTANCE: dict[int, str] = {}


def record_acceptance(criterion: int, ok: bool, detail: str) -> None:
    _ACCEPTANCE[criterion] = f"ACCEPTANCE {criterion} {'PASS' if ok else 'FAIL'} {detail}"


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])
