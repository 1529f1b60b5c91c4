"""First-order XVA pricing of a European call under CIR default intensities."""

from ._accel import backend
from .blackscholes import MarketParams, bs_call, d12, expected_bs, gauss_exp_cdf, norm_cdf
from .cir import (
    AffineCoeffs,
    CirParams,
    fwd_cov_lambda_bm,
    fwd_mean_lambda,
    fwd_mean_lambda_32,
    fwd_mean_sqrt_lambda,
    fwd_third_moment_split,
    riccati,
    survival,
    survival_single,
)
from .curves import RateCurve
from .mc import McConfig, McEstimate, error_grid, estimate_price, simulate_paths
from .xva import (
    ApproxSettings,
    CreditParams,
    XvaBreakdown,
    XvaCoefficients,
    coefficients,
    g0,
    g1,
    g2,
    price_const_intensity,
    price_first_order,
)

__version__ = "0.1.0"

__all__ = [
    "AffineCoeffs",
    "ApproxSettings",
    "CirParams",
    "CreditParams",
    "MarketParams",
    "McConfig",
    "McEstimate",
    "RateCurve",
    "XvaBreakdown",
    "XvaCoefficients",
    "backend",
    "bs_call",
    "coefficients",
    "d12",
    "error_grid",
    "estimate_price",
    "expected_bs",
    "fwd_cov_lambda_bm",
    "fwd_mean_lambda",
    "fwd_mean_lambda_32",
    "fwd_mean_sqrt_lambda",
    "fwd_third_moment_split",
    "g0",
    "g1",
    "g2",
    "gauss_exp_cdf",
    "norm_cdf",
    "price_const_intensity",
    "price_first_order",
    "riccati",
    "simulate_paths",
    "survival",
    "survival_single",
]
