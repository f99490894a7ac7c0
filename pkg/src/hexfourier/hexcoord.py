"""Homogeneous coordinates on the hexagonal plane.

Points live on the plane ``t1 + t2 + t3 = 0``.  Every vectorised function in
this package accepts either a :class:`HomogeneousPoint` or an array whose last
axis has length 3.

The fundamental hexagon is

    Omega = {t : -1 <= t1 < 1, -1 <= t2 < 1, -1 <= -t3 < 1}

and H-periodicity means invariance under the translation lattice
``LATTICE = {s in Z^3_H : s1 = s2 = s3 (mod 3)}``, generated by
``(1, 1, -2)`` and ``(2, -1, -1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT3 = math.sqrt(3.0)
SUM_TOL = 1e-12

# generators of the translation lattice, as (t1, t2, t3)
LATTICE_GENERATORS = np.array([[1.0, 1.0, -2.0], [2.0, -1.0, -1.0]])


@dataclass(frozen=True)
class PlanePoint:
    x1: float
    x2: float

    def __post_init__(self):
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise ValueError("plane point must have finite coordinates")

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x1, self.x2], dtype=dtype)


@dataclass(frozen=True)
class HomogeneousPoint:
    """A point of the plane t1 + t2 + t3 = 0.

    All three coordinates are stored.  Construction rejects triples whose sum
    differs from zero by more than ``SUM_TOL`` (scaled by the magnitude of the
    coordinates); use :meth:`from_pair` to derive ``t3`` exactly.
    """

    t1: float
    t2: float
    t3: float

    def __post_init__(self):
        scale = max(1.0, abs(self.t1), abs(self.t2), abs(self.t3))
        if abs(self.t1 + self.t2 + self.t3) > SUM_TOL * scale:
            raise ValueError(
                f"coordinates ({self.t1}, {self.t2}, {self.t3}) do not sum to zero"
            )

    @classmethod
    def from_pair(cls, t1: float, t2: float) -> "HomogeneousPoint":
        return cls(float(t1), float(t2), -float(t1) - float(t2))

    def __iter__(self):
        return iter((self.t1, self.t2, self.t3))

    def __array__(self, dtype=None, copy=None):
        return np.array([self.t1, self.t2, self.t3], dtype=dtype)


def as_points(t) -> np.ndarray:
    """Return ``t`` as a float array of shape (..., 3) with t3 = -t1 - t2.

    The third coordinate is recomputed from the first two so that downstream
    formulas see an exactly consistent triple.
    """
    arr = np.array(t, dtype=float)
    if arr.shape[-1:] != (3,):
        raise ValueError(f"expected trailing axis of length 3, got shape {arr.shape}")
    arr[..., 2] = -arr[..., 0] - arr[..., 1]
    return arr


def _wrap(arr: np.ndarray, like):
    if isinstance(like, HomogeneousPoint):
        return HomogeneousPoint(float(arr[0]), float(arr[1]), float(arr[2]))
    return arr


def from_plane(x):
    """Map Cartesian (x1, x2) to homogeneous coordinates."""
    x = np.asarray(x, dtype=float)
    x1, x2 = x[..., 0], x[..., 1]
    t1 = -x2 / 2 + SQRT3 * x1 / 2
    t2 = x2
    t3 = -x2 / 2 - SQRT3 * x1 / 2
    out = np.stack([t1, t2, t3], axis=-1)
    if out.ndim == 1:
        return HomogeneousPoint(float(out[0]), float(out[1]), float(out[2]))
    return out


def to_plane(t):
    """Inverse of :func:`from_plane`."""
    t = as_points(t)
    x1 = (t[..., 0] - t[..., 2]) / SQRT3
    x2 = t[..., 1]
    if t.ndim == 1:
        return PlanePoint(float(x1), float(x2))
    return np.stack([x1, x2], axis=-1)


def _max_abs(t1, t2, t3):
    return np.maximum(np.maximum(np.abs(t1), np.abs(t2)), np.abs(t3))


def hex_norm(t):
    """``max(|t1|, |t2|, |t3|)``."""
    t = as_points(t)
    out = _max_abs(t[..., 0], t[..., 1], t[..., 2])
    return float(out) if out.ndim == 0 else out


def in_omega(t):
    """Membership in the half-open hexagon Omega."""
    t = np.asarray(t, dtype=float)
    t1, t2 = t[..., 0], t[..., 1]
    mt3 = -t[..., 2]
    out = (-1 <= t1) & (t1 < 1) & (-1 <= t2) & (t2 < 1) & (-1 <= mt3) & (mt3 < 1)
    return bool(out) if out.ndim == 0 else out


BOUNDARY_TOL = 1e-12


def _snap(x):
    # rounding can leave a boundary point a few ulps inside; treat it as on the boundary
    x = np.where(np.abs(x - 1) < BOUNDARY_TOL, 1.0, x)
    return np.where(np.abs(x + 1) < BOUNDARY_TOL, -1.0, x)


_NEIGHBOURS = np.array([(a, b) for a in (0, -1, 1) for b in (0, -1, 1)], dtype=float)


def fold_to_omega(t):
    """Translate ``t`` by a lattice vector into Omega.

    Coarse reduction rounds the lattice coordinates of ``t``; the remaining
    offset is fixed by trying the nine neighbouring translates.  Coordinates
    within ``BOUNDARY_TOL`` of the hexagon boundary are treated as lying on
    it, so ties follow the half-open convention.
    """
    pts = as_points(t)
    flat = pts.reshape(-1, 3)
    t1, t2 = flat[:, 0], flat[:, 1]
    # t = a*(1, 1, -2) + b*(2, -1, -1)
    a = np.rint((t1 + 2 * t2) / 3)
    b = np.rint((t1 - t2) / 3)
    r1 = t1 - a - 2 * b
    r2 = t2 - a + b

    out = np.full_like(flat, np.nan)
    todo = np.arange(len(flat))
    for da, db in _NEIGHBOURS:
        c1 = r1[todo] - da - 2 * db
        c2 = r2[todo] - da + db
        s1, s2, s3 = _snap(c1), _snap(c2), _snap(c1 + c2)
        ok = (-1 <= s1) & (s1 < 1) & (-1 <= s2) & (s2 < 1) & (-1 <= s3) & (s3 < 1)
        hit = todo[ok]
        out[hit, 0] = c1[ok]
        out[hit, 1] = c2[ok]
        out[hit, 2] = -c1[ok] - c2[ok]
        todo = todo[~ok]
        if not len(todo):
            break
    if len(todo):  # pragma: no cover - the hexagon tiles the plane
        raise ArithmeticError("lattice reduction failed to land in Omega")
    out = out.reshape(pts.shape)
    return _wrap(out, t)


def hex_distance_to_lattice(t):
    """Hex-norm distance from ``t`` to the nearest translation-lattice point.

    After folding into Omega the nearest lattice point is the origin or one of
    its six neighbours.
    """
    f = np.asarray(fold_to_omega(as_points(t)))
    f1, f2, f3 = f[..., 0], f[..., 1], f[..., 2]
    best = _max_abs(f1, f2, f3)
    for g1, g2, g3 in _NEAREST:
        best = np.minimum(best, _max_abs(f1 - g1, f2 - g2, f3 - g3))
    return float(best) if best.ndim == 0 else best


# the six lattice points adjacent to the origin
_NEAREST = [(1, 1, -2), (-1, -1, 2), (2, -1, -1), (-2, 1, 1), (1, -2, 1), (-1, 2, -1)]
