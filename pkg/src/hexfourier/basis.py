"""Integer frequencies, hexagonal index sets and the characters phi_j."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hexcoord import as_points

TWO_PI_3 = 2 * np.pi / 3


@dataclass(frozen=True, order=True)
class HexIndex:
    j1: int
    j2: int
    j3: int

    def __post_init__(self):
        if self.j1 + self.j2 + self.j3 != 0:
            raise ValueError(f"index ({self.j1}, {self.j2}, {self.j3}) does not sum to zero")

    @classmethod
    def from_pair(cls, j1: int, j2: int) -> "HexIndex":
        return cls(int(j1), int(j2), -int(j1) - int(j2))

    def __iter__(self):
        return iter((self.j1, self.j2, self.j3))

    def __neg__(self):
        return HexIndex(-self.j1, -self.j2, -self.j3)

    def __array__(self, dtype=None, copy=None):
        return np.array([self.j1, self.j2, self.j3], dtype=dtype)


@dataclass(frozen=True)
class IndexSet:
    """The frequencies of H_n, ordered lexicographically by (j1, j2)."""

    n: int
    members: tuple

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, j):
        return degree(j) <= self.n

    @property
    def array(self) -> np.ndarray:
        return _hn_array(self.n).copy()


@lru_cache(maxsize=64)
def _hn_array(n: int) -> np.ndarray:
    j1, j2 = np.meshgrid(np.arange(-n, n + 1), np.arange(-n, n + 1), indexing="ij")
    j1, j2 = j1.ravel(), j2.ravel()
    keep = np.abs(j1 + j2) <= n
    j1, j2 = j1[keep], j2[keep]
    return np.stack([j1, j2, -j1 - j2], axis=-1)


def _check_radius(n):
    if int(n) != n or n < 0:
        raise ValueError(f"radius must be a non-negative integer, got {n}")
    return int(n)


def enumerate_Hn(n: int) -> IndexSet:
    n = _check_radius(n)
    members = tuple(HexIndex(int(a), int(b), int(c)) for a, b, c in _hn_array(n))
    return IndexSet(n, members)


def ring_Jk(k: int) -> list:
    """J_k = H_k minus H_{k-1}, in the same order as :func:`enumerate_Hn`."""
    k = _check_radius(k)
    return [j for j in enumerate_Hn(k) if degree(j) == k]


def degree(j) -> int:
    a = np.asarray(j)
    out = np.max(np.abs(a), axis=-1)
    return int(out) if out.ndim == 0 else out


def inner(j, t):
    """<j, t> computed as (j1 - j3) t1 + (j2 - j3) t2."""
    j = np.asarray(j)
    t = as_points(t)
    return (j[..., 0] - j[..., 2]) * t[..., 0] + (j[..., 1] - j[..., 2]) * t[..., 1]


def phi(j, t):
    """The character exp(2 pi i <j, t> / 3); broadcasts over j and t."""
    out = np.exp(1j * TWO_PI_3 * inner(j, t))
    return complex(out) if np.ndim(out) == 0 else out


def coefficient_matrix_shape(n: int) -> tuple:
    return (2 * n + 1, 2 * n + 1)


def hn_mask(n: int) -> np.ndarray:
    """Boolean (2n+1, 2n+1) mask of H_n, indexed by [j1 + n, j2 + n]."""
    j = np.arange(-n, n + 1)
    return np.abs(j[:, None] + j[None, :]) <= n


def degree_grid(n: int) -> np.ndarray:
    """Degrees of (j1, j2) on the (2n+1, 2n+1) square, indexed like :func:`hn_mask`."""
    j = np.arange(-n, n + 1)
    j1, j2 = j[:, None], j[None, :]
    return np.maximum(np.maximum(np.abs(j1), np.abs(j2)), np.abs(j1 + j2))


def trig_eval(coeffs: np.ndarray, t, chunk: int = 4096) -> np.ndarray:
    """Evaluate sum_j c_j phi_j(t) for a dense coefficient matrix.

    ``coeffs[j1 + n, j2 + n]`` holds c_j.  Since
    ``<j, t> = j1 (t1 - t3) + j2 (t2 - t3)``, each character factors as
    ``X**j1 * Y**j2`` and the sum is a bilinear form, evaluated here with a
    matrix product per chunk of points.
    """
    coeffs = np.asarray(coeffs)
    n = (coeffs.shape[0] - 1) // 2
    pts = as_points(t)
    flat = pts.reshape(-1, 3)
    a = flat[:, 0] - flat[:, 2]
    b = flat[:, 1] - flat[:, 2]
    freqs = np.arange(-n, n + 1)
    out = np.empty(len(flat), dtype=complex)
    for lo in range(0, len(flat), chunk):
        sl = slice(lo, lo + chunk)
        u = np.exp(1j * TWO_PI_3 * np.outer(a[sl], freqs))
        v = np.exp(1j * TWO_PI_3 * np.outer(b[sl], freqs))
        out[sl] = np.einsum("pi,pi->p", u @ coeffs, v)
    return out.reshape(pts.shape[:-1])


def radial_eval(ring_weights, t) -> np.ndarray:
    """Evaluate sum_{j in H_n} w[degree(j)] phi_j(t), real part.

    With real ring weights the sum is real because H_n and every ring are
    closed under negation.
    """
    w = np.asarray(ring_weights, dtype=float)
    n = len(w) - 1
    c = np.where(hn_mask(n), w[np.minimum(degree_grid(n), n)], 0.0)
    return trig_eval(c, t).real
