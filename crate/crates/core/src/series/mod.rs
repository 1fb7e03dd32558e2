//! Exact arithmetic for the moment generating functions of `L^0` under
//! `N_0(· e^{-sigma/2})` and `N_0(· e^{-sigma_+/2})`: the field Q(sqrt 2),
//! truncated power series, fixed-point series solutions, closed-form
//! coefficients, and the gamma and hypergeometric identities linking them.

pub mod coefficients;
pub mod quadext;
pub mod solve;
pub mod truncated;

pub use coefficients::{
    bailey_check, bailey_values, coef_f, coef_fplus, coef_fplus_from_products,
    coef_rational_product, conditional_moment, gamma_ratio_half, hypergeom_2f1_half,
    rational_product_hypergeometric, weighted_moment_sigma, weighted_moment_sigma_plus,
    BaileyValues, Conditioning,
};
pub use quadext::{format_rational, parse_rational, QuadExt};
pub use solve::{
    f_squared_residual, fplus_cubic_residual, q_branches, q_r_identity_check, q_r_identity_holds,
    series_solve_f, series_solve_fplus, series_solve_gamma_tilde, Branch, QuadSeries,
    RationalSeries,
};
pub use truncated::{Coeff, TruncatedSeries};

/// Default truncation order for the exact checks.
pub const DEFAULT_ORDER: usize = 40;
