"""Dimension-free polynomial interpolation on product sets in the polydisc."""

__version__ = "0.1.0"

from .interp import (
    CoefficientTable,
    InterpolationPlan,
    block_plan,
    build_plan,
    coefficients,
    expectation,
    interpolate,
    residual_curve,
)
from .poly import Polynomial, fourier_from_grid, homogeneous_part, random_polynomial
from .scheme import NodeScheme, build_r, build_w, compute_L, moment, split
from .smallset import BlockDesign, assemble, choose_k, det_P, lambda_set, search_block
from .vander import NodeVector, elimination_weights, inverse_entry_bound, solve_moments
from .estimator import BlockInterpolator, ProductGridInterpolator

__all__ = [
    "BlockDesign",
    "BlockInterpolator",
    "CoefficientTable",
    "InterpolationPlan",
    "NodeScheme",
    "NodeVector",
    "Polynomial",
    "ProductGridInterpolator",
    "assemble",
    "block_plan",
    "build_plan",
    "build_r",
    "build_w",
    "choose_k",
    "coefficients",
    "compute_L",
    "det_P",
    "elimination_weights",
    "expectation",
    "fourier_from_grid",
    "homogeneous_part",
    "interpolate",
    "inverse_entry_bound",
    "lambda_set",
    "moment",
    "random_polynomial",
    "residual_curve",
    "search_block",
    "solve_moments",
    "split",
]
