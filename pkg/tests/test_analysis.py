import math

import numpy as np
import pytest

import oracles
from hexfourier.analysis import (
    ExperimentReport,
    Row,
    builtin_test_functions,
    cesaro_bound_argument,
    default_kernel_grid,
    evaluation_points,
    experiment_cesaro,
    experiment_poisson,
    get_test_function,
    kernel_moment,
    lebesgue_constant,
    lebesgue_sweep,
    make_row,
    modulus_of_continuity,
    moment_sweep,
    poisson_moment,
    poisson_moment_sweep,
    poisson_scale,
    safe_ratio,
    sup_error,
    unit_shifts,
    verify_lemma1,
)
from hexfourier.basis import phi
from hexfourier.hexcoord import hex_norm
from hexfourier.means import CoefficientTable, partial_sum


def const(t):
    return np.full(np.shape(t)[:-1], 2.5)


# -- reports ------------------------------------------------------------------

def test_safe_ratio_and_rows():
    assert safe_ratio(1.0, 2.0) == 0.5
    assert safe_ratio(0.0, 0.0) == 0.0
    assert safe_ratio(1.0, 0.0) == math.inf
    r = make_row(3, 1, 4, u=0.5)
    assert r == Row(3, 1.0, 4.0, 0.25, {"u": 0.5})
    rep = ExperimentReport([make_row(5, 1, 1), make_row(2, 1, 2), make_row(2, 1, 1, u=0.1)])
    assert list(rep.params) == [2, 2, 5]
    assert rep.max_over_min() == pytest.approx(2)


# -- test functions -----------------------------------------------------------

def test_catalog_and_periodicity(rng):
    fns = builtin_test_functions()
    names = [f.name for f in fns]
    assert {"f1", "f2", "f3", "f4"} <= set(names)
    pts = rng.uniform(-1, 1, (200, 2))
    pts = np.column_stack([pts, -pts.sum(axis=1)])
    s = 2 * np.array([1, 1, -2]) - np.array([2, -1, -1])
    for f in fns:
        np.testing.assert_allclose(f(pts + s), f(pts), atol=1e-9)
    with pytest.raises(KeyError):
        get_test_function("nope")


def test_catalog_values():
    o = (0.0, 0.0, 0.0)
    assert get_test_function("f2")(np.array([o]))[0] == pytest.approx(math.e ** 3)
    assert get_test_function("f3")(np.array([o]))[0] == 0
    t = np.array([[0.3, -0.1, -0.2]])
    assert get_test_function("f4", 0.5)(t)[0] == pytest.approx(0.3 ** 0.5)
    f1 = get_test_function("f1")
    want = phi((1, 0, -1), t).real + 0.5 * phi((2, -1, -1), t).real
    assert f1(t)[0] == pytest.approx(want[0])
    table = CoefficientTable.from_function(f1, 2)
    pts = evaluation_points(8)
    np.testing.assert_allclose(partial_sum(table, 2, pts).real, f1(pts), atol=1e-12)


# -- kernel functionals ---------------------------------------------------------

@pytest.mark.parametrize("n, d, v", [
    (2, 0.5, 1.5555751211778197),
    (4, 1.0, 1.1844343067174123),
    (3, 2.0, 0.999999999999997),
])
def test_lebesgue_against_brute_force(n, d, v):
    # frozen from tests/oracles.py: ring-sum kernel, plain loop over nodes
    assert lebesgue_constant(n, d, default_kernel_grid(n)) == pytest.approx(v, abs=1e-11)


def test_lebesgue_and_moment_basics():
    for d in (0.3, 1.0, 2.0):
        assert lebesgue_constant(0, d, 16) == pytest.approx(1)
        assert kernel_moment(0, d, 64) == pytest.approx(2 / 3, abs=1e-12)
        for n in (1, 5, 9):
            assert lebesgue_constant(n, d) >= 1 - 1e-12
    assert poisson_moment(0.0) == pytest.approx(2 / 3, abs=1e-12)
    lam = [poisson_moment(r) for r in (0.5, 0.9, 0.99)]
    assert lam[0] > lam[1] > lam[2] > 0
    with pytest.raises(ValueError):
        poisson_moment(1.0)


def test_grid_stability_under_doubling():
    rep = lebesgue_sweep(0.5, [1, 4, 8], stability=True)
    assert max(r.extra["rel_change"] for r in rep.rows) < 0.01
    rep = moment_sweep(1.0, [1, 4, 8], stability=True)
    assert max(r.extra["rel_change"] for r in rep.rows) < 0.01
    rep = poisson_moment_sweep([0.5, 0.9], stability=True)
    assert max(r.extra["rel_change"] for r in rep.rows) < 0.01


def test_sweeps_metadata():
    rep = lebesgue_sweep(1.0, [2, 1], grid_n=40)
    assert list(rep.params) == [1, 2]
    assert rep.metadata["grid_n"] == [40, 40]
    assert rep.bounds.tolist() == [1.0, 1.0]
    rep = moment_sweep(0.5, [3])
    assert rep.bounds[0] == pytest.approx(math.log(5) / 2)
    with pytest.raises(ValueError):
        poisson_moment_sweep([0.5, 1.0])


# -- modulus of continuity and sup errors ---------------------------------------

def test_unit_shifts():
    d = unit_shifts(12)
    np.testing.assert_allclose(hex_norm(d), 1)
    np.testing.assert_allclose(d.sum(axis=1), 0, atol=1e-15)


def test_modulus_examples():
    assert modulus_of_continuity(const, 0.3, n_dirs=8, eval_n=4) == 0
    f3 = get_test_function("f3")
    for u in (0.05, 0.2, 0.5, 1.0):
        w = modulus_of_continuity(f3, u, n_dirs=60, eval_n=12)
        assert 0.9 * u <= w <= u + 1e-12
    j = (2, -1, -1)
    for u in (0.01, 0.03):
        w = modulus_of_continuity(lambda t: phi(j, t), u, n_dirs=60, eval_n=12)
        assert 0 < w <= 2 * math.pi / 3 * 4 * u
    with pytest.raises(ValueError):
        modulus_of_continuity(f3, 0.0)


def test_modulus_monotone_and_subadditive():
    f4 = get_test_function("f4")
    us = np.array([0.02, 0.05, 0.1, 0.2, 0.4])
    w = modulus_of_continuity(f4, us, n_dirs=48, eval_n=12)
    assert np.all(np.diff(w) >= 0)
    for lam in (2.0, 3.0):
        wl = modulus_of_continuity(f4, lam * us[:3], n_dirs=48, eval_n=12)
        assert np.all(wl <= (1 + lam) * w[:3] * 1.05)


def test_sup_error_examples():
    f1 = get_test_function("f1")
    pts = evaluation_points(16)
    assert sup_error(f1, f1, pts) == 0
    table = CoefficientTable.from_function(f1, 3)
    assert sup_error(f1, lambda t: partial_sum(table, 3, t), pts) < 1e-10
    f2 = get_test_function("f2")
    rep = experiment_cesaro(f2, 1.0, [2, 4, 8, 16], eval_n=8, n_dirs=24)
    assert np.all(np.diff(rep.measured) < 0)


# -- experiments ----------------------------------------------------------------

def test_cesaro_bound_argument():
    assert cesaro_bound_argument(3, 0.5) == (math.log(5), math.log(5) / 2)
    assert cesaro_bound_argument(3, 2.0) == (1.0, math.log(5) ** 2 / 4)


def test_cesaro_experiment_trig_poly():
    f1 = get_test_function("f1")
    rep = experiment_cesaro(f1, 1.0, [2, 3, 4], eval_n=8, n_dirs=24)
    assert np.all(rep.measured > 1e-3)
    assert np.all(np.isfinite(rep.ratios))
    assert rep.metadata["function"] == "f1"


def test_cesaro_experiment_lipschitz_small():
    f3 = get_test_function("f3")
    rep = experiment_cesaro(f3, 0.5, [4, 8, 16], eval_n=12, n_dirs=48)
    assert np.all(np.diff(rep.measured) < 0)
    assert rep.max_over_median() < 10
    w = np.array([r.extra["omega"] for r in rep.rows])
    assert np.all(np.diff(w) <= 0)


def test_poisson_experiment():
    rep = experiment_poisson(const, [0.5, 0.9], n_dirs=8)
    np.testing.assert_allclose(rep.measured, 0, atol=1e-12)
    f2 = get_test_function("f2")
    rep = experiment_poisson(f2, [0.5, 0.7, 0.9], n_dirs=24)
    assert np.all(np.diff(rep.measured) < 0)
    assert poisson_scale(0.9) == pytest.approx(0.1 * math.log(10))
    with pytest.raises(ValueError):
        experiment_poisson(f2, [1.0])


def test_verify_lemma1():
    u = np.linspace(0.05, math.pi - 0.05, 20)
    rep = verify_lemma1(range(9), 0.5, u)
    assert len(rep.rows) == 9 * 20
    n0 = [r for r in rep.rows if r.param == 0]
    for r in n0:
        assert r.measured == pytest.approx(abs(math.cos(r.extra["u"])))
        assert r.measured <= r.bound
    assert np.isfinite(rep.ratios.max())
    # the u grid is symmetric about pi/2 and so are the sums
    for n in range(9):
        m = np.array([r.measured for r in rep.rows if r.param == n])
        np.testing.assert_allclose(m, m[::-1], atol=1e-12)
    with pytest.raises(ValueError):
        verify_lemma1([1], 1.0, u)
