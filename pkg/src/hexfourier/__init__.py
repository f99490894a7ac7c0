"""Fourier analysis on the hexagonal lattice.

Kernels (Dirichlet, Cesaro, Poisson), partial sums and summability means,
equal-weight lattice quadrature, and numerical experiments comparing
approximation errors with moduli of continuity.
"""

from .analysis import (
    ExperimentReport,
    Row,
    TestFunction,
    builtin_test_functions,
    experiment_cesaro,
    experiment_poisson,
    kernel_moment,
    lebesgue_constant,
    modulus_of_continuity,
    poisson_moment,
    sup_error,
    verify_lemma1,
)
from .basis import HexIndex, IndexSet, degree, enumerate_Hn, inner, phi, ring_Jk
from .hexcoord import (
    HomogeneousPoint,
    PlanePoint,
    fold_to_omega,
    from_plane,
    hex_distance_to_lattice,
    hex_norm,
    in_omega,
    to_plane,
)
from .kernels import (
    CesaroOrder,
    SingularityPolicy,
    binom_A,
    cesaro_cos_sum,
    cesaro_kernel,
    dirichlet,
    dirichlet_direct,
    poisson_compact,
    poisson_majorant,
    poisson_series,
    theta,
)
from .means import (
    CoefficientTable,
    abel_poisson,
    cesaro_mean,
    partial_sum,
    ulyanov_identity_check,
)
from .quadrature import GridFunction, HexGrid, build_grid, fourier_coeff, sample

__version__ = "0.1.0"
