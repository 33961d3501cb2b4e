import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aromatic.eldiff import eval_vector
from aromatic.graph import OrderCapError, composition, parse, trees_by_composition
from aromatic.polyfield import DimensionError, PolyVectorField, random_field
from aromatic.series import (
    DEGENERACY_2D,
    DIVFREE,
    BSeriesCoefficients,
    collapse_1d,
    degeneracy_2d,
    degeneracy_residual,
    divfree_combination,
    eval_series,
    fd_divergence,
    product_formula,
)

from conftest import SympyJet, rel

SQUARE = PolyVectorField(1, ({(2,): 1.0},))
CUBE = PolyVectorField(1, ({(3,): 1.0},))

# exact-flow coefficients 1 / (sigma gamma) of the classical trees
EXACT_FLOW = {
    "[]": 1.0,
    "[[]]": 1 / 2,
    "[[][]]": 1 / 6,
    "[[[]]]": 1 / 6,
    "[[][][]]": 1 / 24,
    "[[[]][]]": 1 / 8,
    "[[[][]]]": 1 / 24,
    "[[[[]]]]": 1 / 24,
}


class TestCoefficients:
    def test_canonicalizes_keys(self):
        b = BSeriesCoefficients({"[] ({})": 2.0, "[[] []]": 1.0})
        assert b["({}) []"] == 2.0
        assert b["[[][]]"] == 1.0
        assert b["[[]]"] == 0.0

    def test_rejects_non_trees(self):
        with pytest.raises(ValueError):
            BSeriesCoefficients({"({})": 1.0})
        with pytest.raises(ValueError):
            BSeriesCoefficients({"[] []": 1.0})

    def test_items_sorted_by_order(self):
        b = BSeriesCoefficients({"[[][]]": 1.0, "[]": 2.0, "({}) []": 3.0, "[[]]": 0.0})
        assert [k for k, _ in b.items()] == ["[]", "({}) []", "[[][]]"]

    def test_file_roundtrip(self, tmp_path):
        b = BSeriesCoefficients({"[]": 1.0, "[[]]": 0.5, "({}{}) []": -1 / 3})
        path = tmp_path / "b.tsv"
        b.save(path)
        assert BSeriesCoefficients.load(path) == b

    def test_loads_skips_comments(self):
        b = BSeriesCoefficients.loads("# header\n\n[]\t1\n[[] []]\t0.25\n")
        assert b["[[][]]"] == 0.25

    def test_loads_bad_line(self):
        with pytest.raises(ValueError, match="line 1"):
            BSeriesCoefficients.loads("[] 1\n")


class TestEvalSeries:
    def test_two_terms(self):
        # f + f'f for f = x^2 at 1
        assert eval_series({"[]": 1.0, "[[]]": 1.0}, SQUARE, [1.0])[0] == 3.0

    def test_aromatic_term(self):
        # f + f'f/2 + f Div(f)/2 for f = x^2 at 1
        b = {"[]": 1.0, "[[]]": 0.5, "({}) []": 0.5}
        assert eval_series(b, SQUARE, [1.0])[0] == 1.0 + 1.0 + 1.0

    def test_h_grading(self):
        b = {"[]": 1.0, "[[]]": 1.0}
        assert eval_series(b, SQUARE, [1.0], h=0.5)[0] == 0.5 + 0.25 * 2.0

    def test_truncation(self):
        b = {"[]": 1.0, "[[]]": 1.0, "[[][]]": 1.0}
        assert eval_series(b, SQUARE, [1.0], max_order=2)[0] == 3.0

    def test_cap(self):
        with pytest.raises(OrderCapError):
            eval_series({"[]": 1.0}, SQUARE, [1.0], max_order=99)

    def test_empty(self):
        assert not eval_series({}, random_field(3, 2, 0), [0.1, 0.2, 0.3]).any()

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_exact_flow_truncation_slope(self, n):
        # y' = y^2, y(0) = 1/2 has y(h) = y0 / (1 - h y0)
        y0 = 0.5
        hs = np.array([2.0**-k for k in range(3, 8)])
        errs = [abs(y0 + eval_series(EXACT_FLOW, SQUARE, [y0], h, n)[0] - y0 / (1 - h * y0)) for h in hs]
        slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        assert slope >= n + 0.9


class TestCollapse1d:
    def test_cherry_cube(self):
        # both trees of composition (2,0,1) reduce to f^2 f'' in one dimension
        trees = trees_by_composition(3)[(2, 0, 1)]
        assert sorted(trees) == ["({[]}) []", "[[][]]"]
        assert collapse_1d(trees, CUBE, [1.0]) == [6.0, 6.0]
        assert product_formula((2, 0, 1), CUBE, [1.0]) == 6.0

    def test_mixed_compositions_rejected(self):
        with pytest.raises(ValueError):
            collapse_1d(["[[]]", "[[][]]"], SQUARE, [1.0])

    def test_dimension(self):
        with pytest.raises(DimensionError):
            collapse_1d(["[]"], random_field(2, 1, 0), [0.0, 0.0])
        with pytest.raises(DimensionError):
            product_formula((1,), random_field(2, 1, 0), [0.0, 0.0])

    @settings(max_examples=25)
    @given(st.integers(1, 5), st.integers(0, 10_000), st.floats(-1, 1))
    def test_all_trees_agree(self, n, seed, x):
        f = random_field(1, 4, seed)
        for kappa, trees in trees_by_composition(n).items():
            values = collapse_1d(trees, f, [x])
            ref = product_formula(kappa, f, [x])
            for v in values:
                assert abs(v - ref) <= 1e-9 * (1 + abs(ref))


class TestDegeneracy:
    def test_combination_shape(self):
        assert len(DEGENERACY_2D) == 4
        assert {composition(parse(t)) for t in DEGENERACY_2D} == {(1, 2)}

    def test_linear_field_is_cayley_hamilton(self):
        A = np.array([[1.0, 2.0], [-3.0, 0.5]])
        f = PolyVectorField.linear(A)
        x = np.array([0.7, -1.1])
        v = A @ x
        expected = v * np.trace(A) ** 2 + 2 * A @ A @ v - 2 * (A @ v) * np.trace(A) - v * np.trace(A @ A)
        assert rel(expected, np.zeros(2)) <= 1e-12
        assert rel(degeneracy_2d(f, x), np.zeros(2)) <= 1e-12

    def test_constant_field(self):
        assert not degeneracy_2d(PolyVectorField.constant([1.0, 2.0]), [0.0, 0.0]).any()

    @pytest.mark.parametrize("seed", range(10))
    def test_random_cubic(self, seed):
        f = random_field(2, 3, seed)
        x = np.random.default_rng(seed).uniform(-1, 1, 2)
        value, scale = degeneracy_residual(f, x)
        assert np.max(np.abs(value)) <= 1e-8 * (1 + scale)

    def test_fails_in_three_dimensions(self):
        f = random_field(3, 2, 0)
        value, scale = degeneracy_residual(f, [0.3, 0.2, -0.4])
        assert np.max(np.abs(value)) > 1e-3 * (1 + scale)

    def test_requires_2d(self):
        with pytest.raises(DimensionError):
            degeneracy_2d(random_field(3, 1, 0), [0.0, 0.0, 0.0])


class TestDivfree:
    def test_structure(self):
        b = divfree_combination()
        assert len(b.items()) == 4
        assert sum(v for _, v in b.items()) == 0
        assert {parse(t).node_count for t in DIVFREE} == {3}

    @pytest.mark.parametrize("seed", range(4))
    def test_exact_divergence_via_sympy(self, seed):
        # symbolic divergence of the four-term field
        import sympy as sp

        from conftest import sympy_components

        d = 2 + seed % 2
        f = random_field(d, 3, seed)
        xs, comps = sympy_components(f)
        F = sp.Matrix(comps)
        J = F.jacobian(xs)
        div = sum(J[i, i] for i in range(d))
        grad_div = sp.Matrix([sp.diff(div, xi) for xi in xs])
        hess_ff = sp.Matrix([sum(sp.diff(comps[k], xs[i], xs[j]) * comps[i] * comps[j]
                                 for i in range(d) for j in range(d)) for k in range(d)])
        G = (J * F) * div + hess_ff - F * (grad_div.T * F)[0] - F * (J * J).trace()
        total = sp.expand(sum(sp.diff(G[k], xs[k]) for k in range(d)))
        assert total == 0

    @pytest.mark.parametrize("seed", range(4))
    def test_finite_difference(self, seed):
        d = 2 + seed % 2
        f = random_field(d, 3, seed)
        b = divfree_combination()
        x = np.random.default_rng(seed).uniform(-1, 1, d)
        div, scale = fd_divergence(lambda y: eval_series(b, f, y), x)
        assert abs(div) <= 1e-6 * (1 + scale)

    def test_single_term_is_not_divfree(self):
        f = random_field(2, 3, 1)
        div, scale = fd_divergence(lambda y: eval_vector("[[][]]", f, y), np.array([0.3, -0.2]))
        assert abs(div) > 1e-3 * (1 + scale)


def test_fd_divergence_linear():
    A = np.array([[1.0, 2.0], [3.0, -4.0]])
    div, _ = fd_divergence(lambda y: A @ y, np.array([0.1, 0.2]))
    assert div == pytest.approx(-3.0, abs=1e-8)


def test_series_uses_sympy_values():
    f = random_field(2, 3, 8)
    x = np.array([0.2, 0.9])
    jet = SympyJet(f, x)
    b = {"[]": 2.0, "({}) []": -1.0}
    assert rel(eval_series(b, f, x, h=0.5), 2 * 0.5 * jet.f - 0.25 * jet.f * jet.div) <= 1e-12
