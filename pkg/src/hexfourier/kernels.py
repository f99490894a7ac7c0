"""Dirichlet, Cesaro and Poisson kernels on the hexagonal lattice.

Each kernel has a closed form and a direct character sum.  The closed forms
are used for evaluation; the direct sums serve as the fallback on the
singular lines of the Dirichlet closed form and as independent checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import radial_eval
from .hexcoord import as_points, fold_to_omega

PI_3 = math.pi / 3


@dataclass(frozen=True)
class SingularityPolicy:
    """Points where some |sin(pi (ti - tj) / 3)| < threshold use direct sums."""

    threshold: float = 1e-8

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")


DEFAULT_POLICY = SingularityPolicy()


def binom_table(n: int, delta: float) -> np.ndarray:
    """A_0^delta, ..., A_n^delta by the running product prod (delta + k) / k.

    Defined for delta >= -1; ``A_m^{-1}`` is 1 for m = 0 and 0 otherwise,
    which is the value the generating function (1 - x)^{-delta-1} gives.
    """
    if delta < -1:
        raise ValueError(f"delta must be >= -1, got {delta}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    k = np.arange(1, n + 1, dtype=float)
    return np.concatenate([[1.0], np.cumprod((delta + k) / k)])


def binom_A(n: int, delta: float) -> float:
    """A_n^delta = binomial(n + delta, delta), for delta > -1."""
    if not delta > -1:
        raise ValueError(f"delta must be > -1, got {delta}")
    return float(binom_table(n, delta)[-1])


@dataclass(frozen=True)
class CesaroOrder:
    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"Cesaro order must be positive, got {self.delta}")

    def kernel_weights(self, n: int) -> np.ndarray:
        """A_{n-k}^{delta-1} / A_n^delta for k = 0..n (weights of D_k)."""
        lower = binom_table(n, self.delta - 1)
        return lower[::-1] / binom_A(n, self.delta)

    def multipliers(self, n: int) -> np.ndarray:
        """A_{n-k}^delta / A_n^delta for k = 0..n (weights of ring k)."""
        table = binom_table(n, self.delta)
        return table[::-1] / table[-1]


def _order(delta) -> CesaroOrder:
    return delta if isinstance(delta, CesaroOrder) else CesaroOrder(float(delta))


def _scalar(out, t):
    return float(out) if np.ndim(out) == 0 else out


def _half_angles(pts):
    """pi (ti - tj) / 3 for the pairs (1, 2), (2, 3), (3, 1)."""
    t1, t2, t3 = pts[..., 0], pts[..., 1], pts[..., 2]
    return np.stack([(t1 - t2) * PI_3, (t2 - t3) * PI_3, (t3 - t1) * PI_3])


def _prepare(t, policy):
    pts = np.asarray(fold_to_omega(as_points(t)))
    ang = _half_angles(pts)
    den = np.sin(ang)
    singular = np.any(np.abs(den) < policy.threshold, axis=0)
    return pts, ang, den, singular


def _theta_closed(k, ang, den):
    return np.prod(np.sin((k + 1) * ang) / den, axis=0)


def dirichlet_direct(n: int, t):
    """D_n(t) as the sum of phi_j over H_n."""
    out = radial_eval(np.ones(n + 1), t)
    return _scalar(out, t)


def theta(n: int, t, policy: SingularityPolicy = DEFAULT_POLICY):
    """Theta_n = D_0 + ... + D_n, via the product of three sine ratios.

    ``Theta_{-1}`` is identically zero.
    """
    if n < -1:
        raise ValueError(f"n must be >= -1, got {n}")
    pts, ang, den, singular = _prepare(t, policy)
    if n == -1:
        return _scalar(np.zeros(pts.shape[:-1]), t)
    out = np.empty(pts.shape[:-1])
    ok = ~singular
    out[ok] = _theta_closed(n, ang[:, ok], den[:, ok])
    if singular.any():
        # Theta_n = sum_{j in H_n} (n + 1 - degree j) phi_j
        out[singular] = radial_eval(n + 1 - np.arange(n + 1.0), pts[singular])
    return _scalar(out, t)


def dirichlet(n: int, t, policy: SingularityPolicy = DEFAULT_POLICY):
    """D_n = Theta_n - Theta_{n-1}; constant cost in n off the singular lines."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    pts, ang, den, singular = _prepare(t, policy)
    out = np.empty(pts.shape[:-1])
    ok = ~singular
    a, d = ang[:, ok], den[:, ok]
    prev = _theta_closed(n - 1, a, d) if n > 0 else 0.0
    out[ok] = _theta_closed(n, a, d) - prev
    if singular.any():
        out[singular] = radial_eval(np.ones(n + 1), pts[singular])
    return _scalar(out, t)


def cesaro_kernel(n: int, delta, t, policy: SingularityPolicy = DEFAULT_POLICY,
                  chunk: int = 65536):
    """K_n^delta = (1 / A_n^delta) sum_k A_{n-k}^{delta-1} D_k.

    Summation by parts turns this into sum_k (w_k - w_{k+1}) Theta_k, so each
    point costs n + 1 closed-form Theta evaluations.
    """
    order = _order(delta)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    pts, ang, den, singular = _prepare(t, policy)
    w = order.kernel_weights(n)
    c = w - np.append(w[1:], 0.0)
    out = np.empty(pts.shape[:-1])
    ok = ~singular
    a_ok, d_ok = ang[:, ok], den[:, ok]
    vals = np.empty(a_ok.shape[1])
    for lo in range(0, a_ok.shape[1], chunk):
        a = a_ok[:, lo:lo + chunk]
        d = d_ok[:, lo:lo + chunk]
        acc = np.zeros(a.shape[1])
        for k in range(n + 1):
            acc += c[k] * _theta_closed(k, a, d)
        vals[lo:lo + chunk] = acc
    out[ok] = vals
    if singular.any():
        out[singular] = radial_eval(order.multipliers(n), pts[singular])
    return _scalar(out, t)


def cesaro_cos_sum(n: int, delta, u):
    """|(1 / A_n^delta) sum_k A_{n-k}^{delta-1} cos((2k + 1) u)| for 0 < u < pi."""
    order = _order(delta)
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= math.pi)):
        raise ValueError("u must lie in the open interval (0, pi)")
    w = order.kernel_weights(n)
    k = np.arange(n + 1)
    out = np.abs(np.cos(np.multiply.outer(u, 2 * k + 1)) @ w)
    return _scalar(out, u)


def lemma1_bound(n: int, delta: float, u):
    """1 / ((n+1)^delta sin(u)^delta) + 1 / ((n+1) sin u)."""
    s = np.sin(np.asarray(u, dtype=float))
    out = 1 / ((n + 1) ** delta * s ** delta) + 1 / ((n + 1) * s)
    return _scalar(out, u)


def _check_r(r):
    if not 0 <= r < 1:
        raise ValueError(f"r must satisfy 0 <= r < 1, got {r}")


def q(r: float, x):
    """q_r(x) = 1 - 2 r cos x + r^2."""
    _check_r(r)
    out = 1 - 2 * r * np.cos(x) + r * r
    return _scalar(out, x)


def classical_poisson(r: float, x):
    """p_r(x) = (1 - r^2) / q_r(x)."""
    _check_r(r)
    out = (1 - r * r) / (1 - 2 * r * np.cos(x) + r * r)
    return _scalar(out, x)


def poisson_truncation(r: float, tol: float, scale: float = 1.0) -> int:
    """Smallest K >= 1 with scale * 6 K r^K / (1 - r) < tol."""
    _check_r(r)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if r == 0 or scale == 0:
        return 1
    k = 1
    while scale * 6 * k * r ** k / (1 - r) >= tol:
        k += 1
    return k


def poisson_series(r: float, t, tol: float = 1e-10):
    """P_r as the ring-weighted character sum, truncated by the 6K tail bound."""
    K = poisson_truncation(r, tol)
    weights = float(r) ** np.arange(K + 1)
    out = radial_eval(weights, t)
    return _scalar(out, t)


def _q_pairs(r, t):
    pts = as_points(t)
    ang = 2 * _half_angles(pts)  # 2 pi (ti - tj) / 3
    return 1 - 2 * r * np.cos(ang) + r * r


def poisson_compact(r: float, t):
    """Closed rational-trigonometric form of P_r."""
    _check_r(r)
    qa, qb, qc = _q_pairs(r, t)
    s = 1 - r
    out = (s ** 3 * (1 - r ** 3) / (qa * qb * qc)
           + r * s * s * (1 / (qa * qb) + 1 / (qb * qc) + 1 / (qc * qa)))
    return _scalar(out, t)


def poisson_majorant(r: float, t):
    """Three-term upper bound Q_r >= P_r built from pairwise products of q_r."""
    _check_r(r)
    qa, qb, qc = _q_pairs(r, t)
    s2 = 2 * (1 - r) ** 2
    out = s2 / (qa * qb) + s2 / (qb * qc) + s2 / (qc * qa)
    return _scalar(out, t)
