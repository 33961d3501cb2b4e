import re

import numpy as np
import pytest

from aromatic.ark import aromatic_euler
from aromatic.checks import (
    CheckReport,
    check_collapse_1d,
    check_degeneracy_2d,
    check_divfree,
    check_equivariance,
    check_order,
    check_table3,
    relative_residual,
    run_all,
    trial_rng,
)


def test_report_line():
    r = CheckReport("x", 3, 1.5e-10, 1e-8, 7)
    assert r.passed
    assert r.line() == "CHECK x pass 1.500000e-10 1.0e-08 7"


def test_expect_fail_inverts():
    assert not CheckReport("x", 1, 0.0, 1e-8, 0, expect_fail=True).passed
    assert CheckReport("x", 1, 1.0, 1e-8, 0, expect_fail=True).passed


def test_relative_residual():
    assert relative_residual([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert relative_residual([3.0], [1.0]) == 1.0


def test_trial_rng_independent_streams():
    a = trial_rng(0, 1).random()
    assert a == trial_rng(0, 1).random()
    assert a != trial_rng(0, 2).random()
    assert a != trial_rng(1, 1).random()


class TestEquivariance:
    def test_single_node_exact(self):
        r = check_equivariance("[]", (1, 2), trials=5)
        assert r.max_residual <= 1e-12

    def test_trees(self):
        assert check_equivariance("trees", (2,), trials=5).passed

    def test_negative_control(self):
        r = check_equivariance("[]", (1, 2, 3), trials=5, broken=True)
        assert r.max_residual > 1e-2
        assert r.passed

    @pytest.mark.parametrize("name", ["euler", "aromatic-euler(1)", "rk4", "implicit-midpoint"])
    def test_methods(self, name):
        assert check_equivariance(name, (1, 2, 3), trials=10).passed

    def test_tableau_target(self):
        assert check_equivariance(aromatic_euler(0.3), (2,), trials=5).passed

    def test_reproducible(self):
        a = check_equivariance("trees", (2,), trials=3, seed=5)
        b = check_equivariance("trees", (2,), trials=3, seed=5)
        assert a == b


def test_collapse():
    assert check_collapse_1d(4, trials=5).passed
    assert check_collapse_1d(3, trials=3, constant=True).passed


class TestDegeneracy:
    def test_two_dimensions(self):
        assert check_degeneracy_2d(10).passed

    def test_linear(self):
        assert check_degeneracy_2d(10, linear=True).passed

    def test_three_dimensional_control(self):
        r = check_degeneracy_2d(5, dim=3)
        assert r.expect_fail and r.max_residual > 1e-3 and r.passed


def test_divfree():
    r = check_divfree(trials=3, points=3)
    assert r.passed and r.trials == 6


def test_table3():
    assert check_table3().passed


class TestOrder:
    @pytest.mark.parametrize("name", ["euler", "aromatic-euler(1)", "rk4", "implicit-midpoint"])
    def test_expected(self, name):
        assert check_order(name).passed

    def test_wrong_expectation_fails(self):
        assert not check_order("euler", expected=2).passed

    def test_name_carries_slope(self):
        r = check_order("euler")
        slope = float(re.search(r"slope=([0-9.]+)", r.name).group(1))
        assert abs(slope - 1) == pytest.approx(r.max_residual, abs=1e-3)


@pytest.mark.slow
def test_run_all_passes():
    reports = run_all(seed=42, trials=10)
    assert all(r.passed for r in reports), [r.line() for r in reports if not r.passed]
    assert np.all([r.seed in (0, 42) for r in reports])
