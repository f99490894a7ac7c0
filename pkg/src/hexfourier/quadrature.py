"""Equal-weight lattice quadrature on the hexagon.

The grid of refinement N consists of the 3 N^2 points k / N, k in Z^3_H,
that fall in Omega.  They represent the finite group (Z^3_H / N) modulo the
translation lattice, so the normalised integral of phi_j is computed exactly
(1 if j = 0, else 0) for every j of degree below 2N.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import TWO_PI_3, degree, phi
from .hexcoord import as_points


@dataclass(frozen=True, eq=False)
class HexGrid:
    N: int
    k: np.ndarray = field(repr=False)      # (3N^2, 2) integer coordinates (k1, k2)
    nodes: np.ndarray = field(repr=False)  # (3N^2, 3) homogeneous points k / N
    lookup: np.ndarray = field(repr=False)  # [k1 + N, k2 + N] -> node index or -1

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def cell_weight(self) -> float:
        return 1.0 / self.N ** 2

    def fold_indices(self, k1, k2) -> np.ndarray:
        """Node indices of the integer points (k1, k2) reduced modulo N * lattice."""
        return self.lookup[_fold_int(np.asarray(k1), np.asarray(k2), self.N)]


def _fold_int(k1, k2, N):
    """Exact integer version of :func:`hexcoord.fold_to_omega` for points k / N.

    Returns the pair of shifted array indices (k1 + N, k2 + N) of the
    representative inside the half-open hexagon of radius N.
    """
    M = 3 * N
    # k = N * (a * (1, 1) + b * (2, -1)); round a and b to nearest integers
    a = np.floor_divide(2 * (k1 + 2 * k2) + M, 2 * M)
    b = np.floor_divide(2 * (k1 - k2) + M, 2 * M)
    r1 = k1 - N * (a + 2 * b)
    r2 = k2 - N * (a - b)
    out1 = np.empty_like(r1)
    out2 = np.empty_like(r2)
    todo = np.ones(r1.shape, dtype=bool)
    for da in (0, -1, 1):
        for db in (0, -1, 1):
            c1 = r1 - N * (da + 2 * db)
            c2 = r2 - N * (da - db)
            s = c1 + c2
            ok = todo & (-N <= c1) & (c1 < N) & (-N <= c2) & (c2 < N) & (-N <= s) & (s < N)
            out1[ok] = c1[ok]
            out2[ok] = c2[ok]
            todo &= ~ok
    if todo.any():  # pragma: no cover
        raise ArithmeticError("integer lattice reduction failed")
    return out1 + N, out2 + N


def build_grid(N: int) -> HexGrid:
    if int(N) != N or N < 1:
        raise ValueError(f"grid refinement must be a positive integer, got {N}")
    N = int(N)
    k1, k2 = np.meshgrid(np.arange(-N, N), np.arange(-N, N), indexing="ij")
    k1, k2 = k1.ravel(), k2.ravel()
    s = k1 + k2
    keep = (-N <= s) & (s < N)
    k = np.stack([k1[keep], k2[keep]], axis=-1)
    nodes = np.stack([k[:, 0], k[:, 1], -k[:, 0] - k[:, 1]], axis=-1) / N
    lookup = np.full((2 * N, 2 * N), -1, dtype=np.int64)
    lookup[k[:, 0] + N, k[:, 1] + N] = np.arange(len(k))
    for arr in (k, nodes, lookup):
        arr.setflags(write=False)
    return HexGrid(N, k, nodes, lookup)


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: HexGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.values) != self.grid.node_count:
            raise ValueError("values must align with the grid nodes")


class SampleError(RuntimeError):
    pass


def sample(f, grid: HexGrid) -> GridFunction:
    """Evaluate a vectorised point function on every node."""
    try:
        values = np.asarray(f(grid.nodes), dtype=complex)
    except Exception:
        values = None
    if values is None or values.shape != (grid.node_count,):
        values = np.empty(grid.node_count, dtype=complex)
        for i, node in enumerate(grid.nodes):
            try:
                values[i] = f(node)
            except Exception as exc:
                raise SampleError(f"evaluation failed at node {i} ({node.tolist()})") from exc
    values.setflags(write=False)
    return GridFunction(grid, values)


def mean_integral(g: GridFunction) -> complex:
    """(1 / |Omega|) * integral of g over Omega."""
    return complex(np.mean(g.values))


def fourier_coeff(g: GridFunction, j) -> complex:
    """Discrete coefficient (1 / |Omega|) int g conj(phi_j), by direct summation."""
    return complex(np.mean(g.values * np.conj(phi(j, g.grid.nodes))))


def weighted_abs_integral(g: GridFunction, weight) -> float:
    w = weight(g.grid.nodes) if callable(weight) else np.asarray(weight)
    return float(np.mean(w * np.abs(g.values)))


def _phase_matrix(freqs, N):
    # exp(-2 pi i f k / (3N)) for k in [-N, N); integer reduction keeps phases exact
    k = np.arange(-N, N)
    m = np.mod(np.outer(freqs, k), 3 * N)
    return np.exp(-2j * np.pi * m / (3 * N))


def coefficient_matrix(g: GridFunction, n: int) -> np.ndarray:
    """All discrete coefficients over H_n as a (2n+1, 2n+1) matrix.

    On the node k / N, <j, t> = (k1 (2 j1 + j2) + k2 (j1 + 2 j2)) / N, so the
    coefficient sum separates into two matrix products over k1 and k2.
    The result matches :func:`fourier_coeff` entry by entry.
    """
    grid = g.grid
    N = grid.N
    F = np.zeros((2 * N, 2 * N), dtype=complex)
    F[grid.k[:, 0] + N, grid.k[:, 1] + N] = g.values
    p = np.arange(-3 * n, 3 * n + 1)
    E = _phase_matrix(p, N)
    G = E @ F @ E.T / grid.node_count
    j = np.arange(-n, n + 1)
    j1, j2 = j[:, None], j[None, :]
    out = G[2 * j1 + j2 + 3 * n, j1 + 2 * j2 + 3 * n]
    out[np.abs(j1 + j2) > n] = 0
    return out


def convolve_at(g: GridFunction, kernel, t, chunk: int = 1 << 22) -> np.ndarray:
    """(1 / |Omega|) int g(s) K(t - s) ds by the lattice rule, for arbitrary t.

    Equal to the integral of g(t - s) K(s) by translation invariance of the
    integral of H-periodic functions.
    """
    pts = as_points(t)
    flat = pts.reshape(-1, 3)
    nodes = g.grid.nodes
    out = np.empty(len(flat), dtype=complex)
    per = max(1, chunk // len(nodes))
    for lo in range(0, len(flat), per):
        diff = flat[lo:lo + per, None, :] - nodes[None, :, :]
        out[lo:lo + per] = (kernel(diff) * g.values[None, :]).mean(axis=1)
    return out.reshape(pts.shape[:-1])


def convolve_nodes(g: GridFunction, kernel_values, index, chunk: int = 1 << 22) -> np.ndarray:
    """Discrete group convolution at grid nodes.

    ``kernel_values`` are kernel samples on the same grid.  For the node with
    integer coordinates k, returns mean over s of g(k - s) K(s) where k - s
    is reduced back onto the grid exactly.
    """
    grid = g.grid
    K = np.asarray(kernel_values)
    index = np.atleast_1d(np.asarray(index))
    kt = grid.k[index]
    ks = grid.k
    N = grid.N
    # differences of two nodes stay inside [-2N, 2N)^2; fold that square once
    d = np.arange(-2 * N, 2 * N)
    table = grid.fold_indices(d[:, None], d[None, :])
    out = np.empty(len(index), dtype=complex)
    per = max(1, chunk // grid.node_count)
    for lo in range(0, len(index), per):
        d1 = kt[lo:lo + per, 0, None] - ks[None, :, 0] + 2 * N
        d2 = kt[lo:lo + per, 1, None] - ks[None, :, 1] + 2 * N
        out[lo:lo + per] = (g.values[table[d1, d2]] * K[None, :]).mean(axis=1)
    return out


def min_alias_free_grid(n: int) -> int:
    """Conservative grid size for alias-free coefficients on H_n."""
    return 2 * n + 2


def degree_of_alias(N: int) -> int:
    """Smallest degree of a nonzero frequency integrated as 1 by the rule."""
    return degree((2 * N, -N, -N))
