//! Numerical evaluation of the intrinsic anisotropic seminorms by difference quotients.
//!
//! Only the difference-quotient side is computed; no equivalence constants with
//! the Fourier-analytic norms are assumed.

mod grid;
mod probe;
mod quad;

pub use grid::{Gaussian, GridFunction};
pub use probe::{check_product_estimate, check_reduced_product_estimate, dilation_scaling, log_log_slope, RatioStats, ScalingFit, LAMBDAS};
pub use quad::{full_norm, seminorm, seminorm_besov, seminorm_slobodeckij, QuadratureMeta, SeminormResult, MIN_DECADES, NODES_PER_DECADE};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NormlabError {
    #[error("wrong scale: {0}")]
    WrongScale(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("instance not covered: {0}")]
    NotCovered(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Engine(#[from] aniso_core::Error),
}
