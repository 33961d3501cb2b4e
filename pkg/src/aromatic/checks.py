"""Randomized pass/fail checks of the structural identities.

Each check draws its random data from ``numpy.random.default_rng([seed, trial])``
so every report is reproducible from ``(seed, parameters)``. Residuals are
relative: ``max|difference| / (1 + max|reference|)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import ark, series
from .eldiff import eval_forest
from .graph import composition, enumerate_trees, parse, trees_up_to
from .polyfield import FieldJet, PolyVectorField, affine_act, random_affine, random_field
from .tensormap import orbit_classes

EQUIVARIANCE_TOL = 1e-8


@dataclass(frozen=True)
class CheckReport:
    name: str
    trials: int
    max_residual: float
    tol: float
    seed: int
    expect_fail: bool = False

    @property
    def passed(self) -> bool:
        ok = self.max_residual <= self.tol
        return not ok if self.expect_fail else ok

    def line(self) -> str:
        status = "pass" if self.passed else "fail"
        return f"CHECK {self.name} {status} {self.max_residual:.6e} {self.tol:.1e} {self.seed}"


def relative_residual(value, reference) -> float:
    value = np.atleast_1d(np.asarray(value, dtype=float))
    reference = np.atleast_1d(np.asarray(reference, dtype=float))
    return float(np.max(np.abs(value - reference)) / (1.0 + np.max(np.abs(reference))))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def _field_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(2**31))


# ---------------------------------------------------------------------------
# equivariance

Target = Union[str, Sequence[str], ark.AromaticTableau]


def _resolve_target(target: Target):
    if isinstance(target, ark.AromaticTableau):
        return "method", target
    if isinstance(target, str):
        if target == "trees":
            return "trees", trees_up_to(4)
        stripped = target.strip()
        if stripped[:1] in "[(" or stripped == "":
            return "trees", [stripped]
        return "method", ark.get_method(target)
    return "trees", list(target)


def check_equivariance(target: Target = "trees", dims: Iterable[int] = (1, 2, 3), trials: int = 50,
                       tol: float = EQUIVARIANCE_TOL, seed: int = 0, broken: bool = False,
                       max_degree: int = 3, h: float = 0.02) -> CheckReport:
    """Compare F(g.f)(g x) with g.F(f)(x) (trees) or step(g.f)(g y) with g step(f)(y) (methods).

    ``broken=True`` translates the evaluation point twice, a negative control
    that must fail.
    """
    kind, obj = _resolve_target(target)
    dims = list(dims)
    worst = 0.0
    count = 0
    for d in dims:
        for trial in range(trials):
            rng = trial_rng(seed, 1000 * d + trial)
            f = random_field(d, int(rng.integers(1, max_degree + 1)), _field_seed(rng))
            g = random_affine(rng, d)
            x = rng.uniform(-1.0, 1.0, size=d)
            gf = affine_act(g, f)
            gx = g(x) + (g.translation if broken else 0.0)
            count += 1
            if kind == "trees":
                jet, gjet = FieldJet(f, x), FieldJet(gf, gx)
                for tree in obj:
                    forest = parse(tree)
                    lhs = eval_forest(forest, gf, gx, jet=gjet)
                    base = eval_forest(forest, f, x, jet=jet)
                    rhs = base if forest.root_count == 0 else g.matrix @ base
                    worst = max(worst, relative_residual(lhs, rhs))
            else:
                lhs = ark.ark_step(obj, gf, gx, h)
                rhs = g(ark.ark_step(obj, f, x, h))
                worst = max(worst, relative_residual(lhs, rhs))
    label = obj.name if kind == "method" else ("trees" if len(obj) > 1 else obj[0] or "empty")
    name = f"equivariance[{label};d={','.join(map(str, dims))}]"
    if broken:
        name = "equivariance-negative-control"
    return CheckReport(name, count, worst, tol, seed, expect_fail=broken)


# ---------------------------------------------------------------------------
# degeneracies


def check_collapse_1d(max_order: int = 5, seed: int = 0, trials: int = 20, tol: float = 1e-9,
                      constant: bool = False) -> CheckReport:
    """All trees of one composition agree with prod_j (f^(j))^kappa(j) in d = 1."""
    groups: dict = {}
    for n in range(1, max_order + 1):
        for t in enumerate_trees(n):
            groups.setdefault(composition(parse(t)), []).append(t)
    worst = 0.0
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        if constant:
            f = PolyVectorField.constant([float(rng.integers(1, 4))])
        else:
            f = random_field(1, max_order, _field_seed(rng))
        x = rng.uniform(-1.0, 1.0, size=1)
        for kappa, trees in groups.items():
            ref = series.product_formula(kappa, f, x)
            for v in series.collapse_1d(trees, f, x):
                worst = max(worst, relative_residual(v, ref))
    return CheckReport(f"collapse1d[order<={max_order}]", trials, worst, tol, seed)


def check_degeneracy_2d(trials: int = 50, seed: int = 0, tol: float = 1e-8, dim: int = 2,
                        max_degree: int = 3, linear: bool = False) -> CheckReport:
    """Four-tree combination relative to its largest term; ``dim=3`` is a control expected to fail."""
    worst = 0.0
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        if linear:
            f = PolyVectorField.linear(rng.integers(-3, 4, size=(dim, dim)).astype(float))
        else:
            f = random_field(dim, int(rng.integers(1, max_degree + 1)), _field_seed(rng))
        x = rng.uniform(-1.0, 1.0, size=dim)
        value, scale = series.degeneracy_residual(f, x)
        worst = max(worst, float(np.max(np.abs(value))) / (1.0 + scale))
    name = "degeneracy2d" if dim == 2 else f"degeneracy2d-control[d={dim}]"
    return CheckReport(name, trials, worst, tol, seed, expect_fail=dim != 2)


def check_divfree(trials: int = 20, dims: Iterable[int] = (2, 3), seed: int = 0, points: int = 20,
                  tol: float = 1e-6, step: float = 1e-5, max_degree: int = 3) -> CheckReport:
    """Finite-difference divergence of the divergence-free four-tree series field."""
    b = series.divfree_combination()
    dims = list(dims)
    worst = 0.0
    for d in dims:
        for trial in range(trials):
            rng = trial_rng(seed, 1000 * d + trial)
            f = random_field(d, max_degree, _field_seed(rng))

            def F(y, f=f):
                return series.eval_series(b, f, y, 1.0, 3)

            for _ in range(points):
                x = rng.uniform(-1.0, 1.0, size=d)
                div, scale = series.fd_divergence(F, x, step)
                worst = max(worst, abs(div) / (1.0 + scale))
    return CheckReport(f"divfree[d={','.join(map(str, dims))}]", trials * len(dims), worst, tol, seed)


def check_table3() -> CheckReport:
    """kappa = (2,0,1): two orbit classes of sizes 4 and 2, (2,3,1) in the two-children class."""
    classes = orbit_classes((2, 0, 1))
    sizes = sorted(len(v) for v in classes.values())
    two_children = [k for k, v in classes.items() if any(p.image == (2, 3, 1) for p in v)]
    ok = sizes == [2, 4] and two_children == ["[[][]]"] and set(classes) == {"[[][]]", "({[]}) []"}
    return CheckReport("table3", 1, 0.0 if ok else 1.0, 0.0, 0)


# ---------------------------------------------------------------------------
# convergence order

PROBLEMS = {
    # name: (field, y0, exact solution at t = 1)
    "linear": (PolyVectorField.linear([[1.0]]), np.array([1.0]), np.array([math.e])),
    "quadratic": (PolyVectorField(1, ({(2,): 1.0},)), np.array([0.5]), np.array([1.0])),
}

EXPECTED_ORDER = {"euler": 1, "aromatic-euler": 1, "rk4": 4, "implicit-midpoint": 2}


def global_errors(method: ark.AromaticTableau, problem: str, hs: Sequence[float]) -> np.ndarray:
    f, y0, exact = PROBLEMS[problem]
    errs = []
    for h in hs:
        steps = int(round(1.0 / h))
        y = ark.integrate(method, f, y0, 1.0 / steps, steps)[-1]
        errs.append(float(np.max(np.abs(y - exact))))
    return np.array(errs)


def fitted_slope(hs, errs) -> float:
    return float(np.polyfit(np.log(hs), np.log(errs), 1)[0])


def default_hs(method_name: str) -> list[float]:
    if method_name.startswith("rk4"):
        return [2.0**-k for k in range(2, 7)]
    return [2.0**-k for k in range(3, 10)]


def check_order(method_name: str, problem: str = "linear", hs: Optional[Sequence[float]] = None,
                expected: Optional[float] = None, tol: Optional[float] = None) -> CheckReport:
    """Least-squares log-log slope of the global error at t = 1 against the expected order."""
    method = ark.get_method(method_name)
    base = method_name.split("(")[0]
    expected = EXPECTED_ORDER[base] if expected is None else expected
    tol = (0.2 if expected >= 4 else 0.1) if tol is None else tol
    hs = default_hs(method_name) if hs is None else list(hs)
    slope = fitted_slope(hs, global_errors(method, problem, hs))
    return CheckReport(f"order[{method.name};{problem};slope={slope:.3f};expected={expected:g}]",
                       len(hs), abs(slope - expected), tol, 0)


# ---------------------------------------------------------------------------


def run_all(seed: int = 42, trials: int = 50) -> list[CheckReport]:
    reports = [
        check_equivariance("trees", (1, 2, 3), trials, seed=seed),
        check_equivariance("[]", (1, 2, 3), trials, seed=seed, broken=True),
    ]
    for name in ("euler", "aromatic-euler(1)", "rk4", "implicit-midpoint"):
        reports.append(check_equivariance(name, (1, 2, 3), trials, seed=seed))
    reports += [
        check_collapse_1d(5, seed),
        check_degeneracy_2d(trials, seed),
        check_degeneracy_2d(5, seed, dim=3),
        check_divfree(20, (2, 3), seed),
        check_table3(),
        check_order("euler"),
        check_order("aromatic-euler(1)"),
        check_order("rk4"),
        check_order("implicit-midpoint"),
    ]
    return reports
