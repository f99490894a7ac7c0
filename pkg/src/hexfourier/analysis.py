"""Kernel functionals, moduli of continuity and approximation experiments.

Bound expressions use ``log(n + 2)`` wherever the estimates are stated with
``log(n + 1)``, so that rows with n = 0 stay finite.  Sup norms and moduli of
continuity are lower estimates taken over finite point and shift sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .basis import phi
from .hexcoord import from_plane, hex_distance_to_lattice, hex_norm
from .kernels import CesaroOrder
from .means import CoefficientTable, cesaro_mean
from .quadrature import GridFunction, build_grid, convolve_nodes, sample


# ---------------------------------------------------------------------------
# reports

@dataclass
class Row:
    param: float
    measured: float
    bound: float
    ratio: float
    extra: dict = field(default_factory=dict)


def safe_ratio(measured: float, bound: float) -> float:
    if bound > 0:
        return measured / bound
    return 0.0 if measured == 0 else math.inf


def make_row(param, measured, bound, **extra) -> Row:
    measured, bound = float(measured), float(bound)
    return Row(param, measured, bound, safe_ratio(measured, bound), dict(extra))


@dataclass
class ExperimentReport:
    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: (r.param, tuple(sorted(r.extra.items()))))

    @property
    def params(self) -> np.ndarray:
        return np.array([r.param for r in self.rows])

    @property
    def measured(self) -> np.ndarray:
        return np.array([r.measured for r in self.rows])

    @property
    def bounds(self) -> np.ndarray:
        return np.array([r.bound for r in self.rows])

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.rows])

    def max_over_median(self) -> float:
        ratios = self.ratios
        med = float(np.median(ratios))
        return safe_ratio(float(ratios.max()), med)

    def max_over_min(self) -> float:
        ratios = self.ratios
        return safe_ratio(float(ratios.max()), float(ratios.min()))


# ---------------------------------------------------------------------------
# test functions

@dataclass(frozen=True)
class TestFunction:
    """An H-periodic continuous function with a smoothness tag.

    ``smoothness`` is one of ``trig_poly``, ``smooth``, ``lipschitz`` or
    ``hoelder``; ``degree`` and ``alpha`` carry the class parameter.
    """

    __test__ = False  # keep pytest from collecting this class

    name: str
    evaluator: Callable
    smoothness: str
    degree: int | None = None
    alpha: float | None = None

    def __call__(self, t):
        return self.evaluator(np.asarray(t, dtype=float))


def _f1(t):
    return phi((1, 0, -1), t).real + 0.5 * phi((2, -1, -1), t).real


def _f2(t):
    t1, t2, t3 = t[..., 0], t[..., 1], t[..., 2]
    c = 2 * np.pi / 3
    return np.exp(np.cos(c * (t1 - t2)) + np.cos(c * (t2 - t3)) + np.cos(c * (t3 - t1)))


def _character(j):
    return lambda t: phi(j, t)


def builtin_test_functions(alpha: float = 0.5) -> list:
    """Catalogue: two characters, f1 (degree 2), f2 (smooth), f3 (Lipschitz), f4 (Hoelder)."""
    f3 = hex_distance_to_lattice
    return [
        TestFunction("phi_1_0_-1", _character((1, 0, -1)), "trig_poly", degree=1),
        TestFunction("phi_2_-1_-1", _character((2, -1, -1)), "trig_poly", degree=2),
        TestFunction("f1", _f1, "trig_poly", degree=2),
        TestFunction("f2", _f2, "smooth"),
        TestFunction("f3", f3, "lipschitz", alpha=1.0),
        TestFunction("f4", lambda t: f3(t) ** alpha, "hoelder", alpha=alpha),
    ]


def get_test_function(name: str, alpha: float = 0.5) -> TestFunction:
    for f in builtin_test_functions(alpha):
        if f.name == name:
            return f
    names = ", ".join(f.name for f in builtin_test_functions(alpha))
    raise KeyError(f"unknown test function {name!r}; choose from {names}")


# ---------------------------------------------------------------------------
# kernel functionals

def default_kernel_grid(n: int) -> int:
    return 8 * (n + 1)


def default_poisson_grid(r: float) -> int:
    return max(64, math.ceil(12 / (1 - r)))


def cesaro_kernel_on_grid(n: int, delta, N: int | None = None) -> GridFunction:
    grid = build_grid(N or default_kernel_grid(n))
    values = kernels.cesaro_kernel(n, delta, grid.nodes).astype(complex)
    values.setflags(write=False)
    return GridFunction(grid, values)


def poisson_on_grid(r: float, N: int | None = None) -> GridFunction:
    grid = build_grid(N or default_poisson_grid(r))
    values = kernels.poisson_compact(r, grid.nodes).astype(complex)
    values.setflags(write=False)
    return GridFunction(grid, values)


def lebesgue_constant(n: int, delta, N: int | None = None) -> float:
    """(1/|Omega|) int |K_n^delta| by the lattice rule (default N = 8(n+1))."""
    g = cesaro_kernel_on_grid(n, delta, N)
    return float(np.mean(np.abs(g.values)))


def kernel_moment(n: int, delta, N: int | None = None) -> float:
    """d_n^delta = (1/|Omega|) int ||t|| |K_n^delta(t)| dt."""
    g = cesaro_kernel_on_grid(n, delta, N)
    return float(np.mean(hex_norm(g.grid.nodes) * np.abs(g.values)))


def poisson_moment(r: float, N: int | None = None) -> float:
    """lambda^(r) = (1/|Omega|) int ||t|| P_r(t) dt."""
    kernels._check_r(r)
    g = poisson_on_grid(r, N)
    return float(np.mean(hex_norm(g.grid.nodes) * g.values.real))


def lebesgue_bound(n: int, delta: float) -> float:
    return math.log(n + 2) if delta < 1 else 1.0


def moment_bound(n: int, delta: float) -> float:
    if delta < 1:
        return math.log(n + 2) / (n + 1) ** delta
    return math.log(n + 2) ** 2 / (n + 1)


def poisson_scale(r: float) -> float:
    """(1 - r) |log(1 - r)|."""
    return (1 - r) * abs(math.log(1 - r))


def _rel_change(a: float, b: float) -> float:
    return abs(b - a) / abs(a) if a else abs(b - a)


def lebesgue_sweep(delta: float, n_values, grid_n: int = 0,
                   stability: bool = False) -> ExperimentReport:
    """L_n^delta over ``n_values``; ``stability`` adds the relative change at 2N."""
    rows, grids = [], []
    for n in n_values:
        N = max(grid_n, default_kernel_grid(n))
        grids.append(N)
        val = lebesgue_constant(n, delta, N)
        extra = {"rel_change": _rel_change(val, lebesgue_constant(n, delta, 2 * N))} \
            if stability else {}
        rows.append(make_row(n, val, lebesgue_bound(n, delta), **extra))
    return ExperimentReport(rows, {"quantity": "lebesgue_constant", "delta": delta,
                                   "grid_n": grids, "bound": _lebesgue_bound_name(delta)})


def moment_sweep(delta: float, n_values, grid_n: int = 0,
                 stability: bool = False) -> ExperimentReport:
    rows, grids = [], []
    for n in n_values:
        N = max(grid_n, default_kernel_grid(n))
        grids.append(N)
        val = kernel_moment(n, delta, N)
        extra = {"rel_change": _rel_change(val, kernel_moment(n, delta, 2 * N))} \
            if stability else {}
        rows.append(make_row(n, val, moment_bound(n, delta), **extra))
    return ExperimentReport(rows, {"quantity": "kernel_moment", "delta": delta,
                                   "grid_n": grids, "bound": _moment_bound_name(delta)})


def poisson_moment_sweep(r_values, grid_n: int = 0,
                         stability: bool = False) -> ExperimentReport:
    rows, grids = [], []
    for r in r_values:
        kernels._check_r(r)
        N = max(grid_n, default_poisson_grid(r))
        grids.append(N)
        val = poisson_moment(r, N)
        extra = {"rel_change": _rel_change(val, poisson_moment(r, 2 * N))} \
            if stability else {}
        rows.append(make_row(r, val, poisson_scale(r), **extra))
    return ExperimentReport(rows, {"quantity": "poisson_moment", "grid_n": grids,
                                   "bound": "(1-r)|log(1-r)|"})


def _lebesgue_bound_name(delta):
    return "log(n+2)" if delta < 1 else "1"


def _moment_bound_name(delta):
    return "log(n+2)/(n+1)^delta" if delta < 1 else "log(n+2)^2/(n+1)"


# ---------------------------------------------------------------------------
# moduli of continuity and sup errors

def evaluation_points(eval_n: int) -> np.ndarray:
    return build_grid(eval_n).nodes


def unit_shifts(n_dirs: int) -> np.ndarray:
    """``n_dirs`` equally spaced directions scaled to hex norm 1."""
    ang = 2 * np.pi * np.arange(n_dirs) / n_dirs
    d = from_plane(np.stack([np.cos(ang), np.sin(ang)], axis=-1))
    return d / hex_norm(d)[:, None]


def modulus_of_continuity(f, u, n_dirs: int = 200, points=None, eval_n: int = 32,
                          fractions=(0.25, 0.5, 0.75, 1.0)):
    """Lower estimate of omega_f(u) = sup_{0 < ||s|| <= u} ||f - f(. + s)||.

    Shifts of hex norm ``fraction * u`` in ``n_dirs`` directions are tried at
    every evaluation point.  For an array of u the shift sets are pooled, so
    the estimate is non-decreasing in u by construction.
    """
    us = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(us <= 0):
        raise ValueError("u must be positive")
    pts = evaluation_points(eval_n) if points is None else np.asarray(points, dtype=float)
    f0 = np.asarray(f(pts))
    dirs = unit_shifts(n_dirs)
    radii = np.unique(np.concatenate([us * fr for fr in fractions]))
    osc = np.empty(len(radii))
    for i, rho in enumerate(radii):
        shifted = pts[None, :, :] + rho * dirs[:, None, :]
        osc[i] = np.max(np.abs(np.asarray(f(shifted)) - f0[None, :]))
    running = np.maximum.accumulate(osc)
    pos = np.searchsorted(radii, us * (1 + 1e-12), side="right") - 1
    out = running[pos]
    return float(out[0]) if np.ndim(u) == 0 else out


def sup_error(f, approximant, points) -> float:
    """max |f - approximant| over the given points."""
    pts = np.asarray(points, dtype=float)
    a = approximant(pts) if callable(approximant) else np.asarray(approximant)
    return float(np.max(np.abs(np.asarray(f(pts)) - a)))


# ---------------------------------------------------------------------------
# approximation experiments

# sweeps pool the shift sets of all their u values, so two fractions suffice
SWEEP_FRACTIONS = (0.5, 1.0)


def cesaro_bound_argument(n: int, delta: float) -> tuple:
    """(prefactor, u) with bound = prefactor * omega_f(u) for the Cesaro estimate."""
    L = math.log(n + 2)
    if delta < 1:
        return L, L / (n + 1) ** delta
    return 1.0, L * L / (n + 1)


def experiment_cesaro(f, delta: float, n_values, N: int | None = None, eval_n: int = 32,
                      n_dirs: int = 200, coeffs: CoefficientTable | None = None
                      ) -> ExperimentReport:
    """Sup error of S_n^delta f against the Cesaro degree-of-approximation bound."""
    order = CesaroOrder(float(delta))
    n_values = sorted(int(n) for n in n_values)
    n_max = n_values[-1]
    N = N or default_kernel_grid(n_max)
    if coeffs is None:
        coeffs = CoefficientTable.from_function(f, n_max, N)
    pts = evaluation_points(eval_n)
    fvals = np.asarray(f(pts))
    args = [cesaro_bound_argument(n, order.delta) for n in n_values]
    omega = modulus_of_continuity(f, np.array([u for _, u in args]), n_dirs=n_dirs,
                                  points=pts, fractions=SWEEP_FRACTIONS)
    rows = []
    for n, (pre, u), w in zip(n_values, args, omega):
        approx = cesaro_mean(coeffs, n, order, pts)
        err = float(np.max(np.abs(fvals - approx)))
        rows.append(make_row(n, err, pre * w, omega=float(w)))
    meta = {"experiment": "cesaro", "function": getattr(f, "name", "custom"),
            "delta": order.delta, "grid_n": N, "eval_n": eval_n, "n_dirs": n_dirs,
            "bound": ("log(n+2)*omega(log(n+2)/(n+1)^delta)" if order.delta < 1
                      else "omega(log(n+2)^2/(n+1))")}
    return ExperimentReport(rows, meta)


def poisson_grid_for(r: float, N: int, eval_n: int) -> int:
    """Smallest multiple of eval_n that is at least max(N, 8 / (1 - r))."""
    target = max(N, math.ceil(8 / (1 - r)))
    return eval_n * math.ceil(target / eval_n)


def experiment_poisson(f, r_values, N: int = 64, eval_n: int = 8, tol: float = 1e-5,
                       n_dirs: int = 200) -> ExperimentReport:
    """Sup error of U_r f against omega_f((1 - r)|log(1 - r)|).

    U_r f is the lattice-rule convolution of f with the closed-form kernel,
    taken at evaluation nodes that are also quadrature nodes.  The grid for
    each r resolves the kernel peak of width about 1 - r and is refined until
    the discrete kernel mass is within ``tol`` of 1; the samples are then
    divided by that mass.
    """
    r_values = sorted(float(r) for r in r_values)
    for r in r_values:
        kernels._check_r(r)
    pts = evaluation_points(eval_n)
    fvals = np.asarray(f(pts))
    scales = np.array([poisson_scale(r) for r in r_values])
    omega = np.zeros(len(r_values))
    if np.any(scales > 0):
        omega[scales > 0] = modulus_of_continuity(f, scales[scales > 0], n_dirs=n_dirs,
                                                  points=pts, fractions=SWEEP_FRACTIONS)
    rows, grids = [], []
    for r, w in zip(r_values, omega):
        M = poisson_grid_for(r, N, eval_n)
        kern = poisson_on_grid(r, M)
        while abs(np.mean(kern.values.real) - 1) > tol:
            M *= 2
            kern = poisson_on_grid(r, M)
        grids.append(M)
        grid = kern.grid
        g = sample(f, grid)
        index = grid.lookup[(pts[:, 0] * M).round().astype(int) + M,
                            (pts[:, 1] * M).round().astype(int) + M]
        # dividing by the discrete mass makes the rule reproduce constants exactly
        weights = kern.values.real / np.mean(kern.values.real)
        approx = convolve_nodes(g, weights, index)
        err = float(np.max(np.abs(fvals - approx)))
        rows.append(make_row(r, err, w, omega=float(w)))
    meta = {"experiment": "poisson", "function": getattr(f, "name", "custom"),
            "grid_n": grids, "eval_n": eval_n, "n_dirs": n_dirs,
            "bound": "omega((1-r)|log(1-r)|)"}
    return ExperimentReport(rows, meta)


def verify_lemma1(n_values, delta: float, u_values) -> ExperimentReport:
    """Cesaro-weighted cosine sums against 1/((n+1)^d sin^d u) + 1/((n+1) sin u)."""
    if not 0 < delta < 1:
        raise ValueError("the cosine-sum estimate is stated for 0 < delta < 1")
    u_values = np.asarray(u_values, dtype=float)
    rows = []
    for n in n_values:
        meas = np.atleast_1d(kernels.cesaro_cos_sum(n, delta, u_values))
        bnd = np.atleast_1d(kernels.lemma1_bound(n, delta, u_values))
        for u, m, b in zip(u_values, meas, bnd):
            rows.append(make_row(int(n), m, b, u=float(u)))
    return ExperimentReport(rows, {"experiment": "lemma1", "delta": delta,
                                   "bound": "1/((n+1)^delta sin(u)^delta) + 1/((n+1) sin u)"})
