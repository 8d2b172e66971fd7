"""Toeplitz and localization operators on weighted Bergman and Fock spaces.

The package builds these operators as truncated matrices in the monomial
orthonormal bases, using matrix elements of the Moebius and Weyl unitary
families evaluated by stable polynomial recurrences, and checks orthogonality
relations, Bergman-to-Fock limits, sharp norm bounds, Berezin convergence and
eigenvalue distribution laws.
"""

from .berezin import BerezinRequest, berezin_lp_distance, windowed_berezin_eval
from .geometry import IDENTITY, GroupElement, compose, inverse, mobius_eval
from .operators import (
    OperatorMatrix,
    SpectralSummary,
    localization_matrix,
    radial_localization_diagonal,
    radial_toeplitz_diagonal,
    spectral_summary,
    toeplitz_matrix,
)
from .quadrature import QuadratureGrid, disc_grid, integrate, plane_grid
from .spaces import (
    BERGMAN,
    FOCK,
    CoefficientVector,
    SpaceMismatchError,
    SpaceParams,
    inner_product,
    kernel_eval,
    v_alpha_transform,
)
from .special import StableExponent, log_gamma, reg_inc_beta, reg_inc_gamma_p
from .symbols import DISC, PLANE, SymbolSpec
from .unitaries import apply_unitary, u_matrix_element, w_matrix_element

__version__ = "0.1.0"

__all__ = [
    "BERGMAN",
    "DISC",
    "FOCK",
    "IDENTITY",
    "PLANE",
    "BerezinRequest",
    "CoefficientVector",
    "GroupElement",
    "OperatorMatrix",
    "QuadratureGrid",
    "SpaceMismatchError",
    "SpaceParams",
    "SpectralSummary",
    "StableExponent",
    "SymbolSpec",
    "apply_unitary",
    "berezin_lp_distance",
    "compose",
    "disc_grid",
    "integrate",
    "inner_product",
    "inverse",
    "kernel_eval",
    "localization_matrix",
    "log_gamma",
    "mobius_eval",
    "plane_grid",
    "radial_localization_diagonal",
    "radial_toeplitz_diagonal",
    "reg_inc_beta",
    "reg_inc_gamma_p",
    "spectral_summary",
    "toeplitz_matrix",
    "u_matrix_element",
    "v_alpha_transform",
    "w_matrix_element",
    "windowed_berezin_eval",
]
