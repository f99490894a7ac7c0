"""Partial sums, Cesaro means and Abel-Poisson means.

Spectral paths act on a :class:`CoefficientTable` through per-ring
multipliers: ring k of the expansion is scaled by 1 (partial sums, k <= n),
by A_{n-k}^delta / A_n^delta (Cesaro) or by r^k (Abel-Poisson).  The
convolution paths integrate samples against the corresponding kernel with
the lattice rule and are kept as independent cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .basis import HexIndex, degree_grid, hn_mask, trig_eval
from .kernels import CesaroOrder, binom_A, binom_table
from .quadrature import GridFunction, build_grid, coefficient_matrix, convolve_at, sample


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    """Fourier coefficients over H_{n_max}.

    ``matrix[j1 + n_max, j2 + n_max]`` holds the coefficient of phi_j; entries
    outside H_{n_max} are zero.  The table is treated as the whole spectrum:
    frequencies beyond n_max count as zero.
    """

    n_max: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.matrix.shape != (2 * self.n_max + 1,) * 2:
            raise ValueError("coefficient matrix has the wrong shape")

    @classmethod
    def from_grid_function(cls, g: GridFunction, n_max: int) -> "CoefficientTable":
        return cls(n_max, coefficient_matrix(g, n_max))

    @classmethod
    def from_function(cls, f, n_max: int, N: int | None = None) -> "CoefficientTable":
        """Coefficients of a point function by the lattice rule (default N = 2 n_max + 2)."""
        grid = build_grid(N or 2 * n_max + 2)
        return cls.from_grid_function(sample(f, grid), n_max)

    @classmethod
    def from_dict(cls, entries: dict, n_max: int | None = None) -> "CoefficientTable":
        keys = [tuple(j) for j in entries]
        if n_max is None:
            n_max = max((max(abs(c) for c in k) for k in keys), default=0)
        m = np.zeros((2 * n_max + 1,) * 2, dtype=complex)
        for j, c in entries.items():
            j = HexIndex(*j)
            if max(abs(j.j1), abs(j.j2), abs(j.j3)) > n_max:
                raise ValueError(f"index {tuple(j)} lies outside H_{n_max}")
            m[j.j1 + n_max, j.j2 + n_max] = c
        return cls(n_max, m)

    def __getitem__(self, j) -> complex:
        j1, j2, j3 = (int(c) for c in j)
        if max(abs(j1), abs(j2), abs(j3)) > self.n_max:
            return 0j
        return complex(self.matrix[j1 + self.n_max, j2 + self.n_max])

    def entries(self) -> dict:
        n = self.n_max
        out = {}
        for a, b in zip(*np.nonzero(hn_mask(n))):
            j = HexIndex.from_pair(a - n, b - n)
            out[j] = complex(self.matrix[a, b])
        return out

    def is_conjugate_symmetric(self, tol: float = 1e-12) -> bool:
        # c_{-j} sits at the point reflection of the matrix
        return bool(np.allclose(self.matrix[::-1, ::-1], self.matrix.conj(), atol=tol, rtol=0))

    def ring_weighted(self, weights) -> np.ndarray:
        """Coefficient matrix with ring k scaled by weights[k] (zero beyond)."""
        w = np.asarray(weights)
        deg = degree_grid(self.n_max)
        scale = np.zeros(deg.shape, dtype=w.dtype)
        inside = deg < len(w)
        scale[inside] = w[deg[inside]]
        return self.matrix * scale


def _check_n(coeffs: CoefficientTable, n: int):
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n > coeffs.n_max:
        raise ValueError(f"n = {n} exceeds the table radius {coeffs.n_max}")


def _out(values, t):
    return complex(values) if np.ndim(values) == 0 else values


def partial_sum(coeffs: CoefficientTable, n: int, t):
    _check_n(coeffs, n)
    return _out(trig_eval(coeffs.ring_weighted(np.ones(n + 1)), t), t)


def partial_sum_conv(f: GridFunction, n: int, t):
    """S_n f by integrating the samples of f against D_n."""
    return _out(convolve_at(f, lambda s: kernels.dirichlet(n, s), t), t)


def cesaro_multiplier(n: int, delta, k: int) -> float:
    """A_{n-k}^delta / A_n^delta, the factor applied to ring k by S_n^delta."""
    order = kernels._order(delta)
    if not 0 <= k <= n:
        raise ValueError(f"ring index must satisfy 0 <= k <= n, got k={k}, n={n}")
    return binom_A(n - k, order.delta) / binom_A(n, order.delta)


def cesaro_mean(coeffs: CoefficientTable, n: int, delta, t):
    _check_n(coeffs, n)
    m = kernels._order(delta).multipliers(n)
    return _out(trig_eval(coeffs.ring_weighted(m), t), t)


def cesaro_mean_conv(f: GridFunction, n: int, delta, t):
    order = kernels._order(delta)
    return _out(convolve_at(f, lambda s: kernels.cesaro_kernel(n, order, s), t), t)


def abel_poisson(source, r: float, t, tol: float = 1e-10):
    """U_r f, from a coefficient table or (by convolution) from grid samples.

    With a table, rings 0..K are summed where K is the first index whose tail
    bound max|c_j| * 6 K r^K / (1 - r) drops below ``tol``, capped at n_max.
    """
    if isinstance(source, GridFunction):
        return abel_poisson_conv(source, r, t)
    kernels._check_r(r)
    scale = float(np.abs(source.matrix).max()) if source.matrix.size else 0.0
    K = min(kernels.poisson_truncation(r, tol, scale), source.n_max)
    w = float(r) ** np.arange(K + 1)
    return _out(trig_eval(source.ring_weighted(w), t), t)


def abel_poisson_conv(f: GridFunction, r: float, t):
    kernels._check_r(r)
    return _out(convolve_at(f, lambda s: kernels.poisson_compact(r, s), t), t)


def ulyanov_identity_check(coeffs: CoefficientTable, n: int, delta: float, t):
    """Both sides of S_n^delta = (1/A_n^delta) sum_k A_{n-k}^{delta-2} A_k^1 S_k^(1).

    The left side is the ring-multiplier Cesaro mean; the right side is built
    from Fejer-type means S_k^(1), k = 0..n.
    """
    if delta < 1:
        raise ValueError(f"the identity is used for delta >= 1, got {delta}")
    _check_n(coeffs, n)
    lhs = cesaro_mean(coeffs, n, delta, t)
    outer = binom_table(n, delta - 2)[::-1]  # A_{n-k}^{delta-2}
    rhs = 0
    for k in range(n + 1):
        if outer[k] != 0:
            rhs = rhs + outer[k] * (k + 1) * cesaro_mean(coeffs, k, 1.0, t)
    rhs = rhs / binom_A(n, delta)
    return lhs, rhs


__all__ = [
    "CesaroOrder",
    "CoefficientTable",
    "abel_poisson",
    "abel_poisson_conv",
    "cesaro_mean",
    "cesaro_mean_conv",
    "cesaro_multiplier",
    "partial_sum",
    "partial_sum_conv",
    "ulyanov_identity_check",
]
