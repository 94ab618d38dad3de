//! Numerical kernels shared by the rest of the crate: adaptive 1-D quadrature,
//! tensor Gauss-Legendre 2-D quadrature, bisection, finite differences and the
//! seeded random stream used for sampling.
//!
//! Every reduction here sums in a fixed order, so results do not depend on
//! the number of worker threads.

mod diff;
mod gauss;
mod quadrature;
mod rng;
mod root;
mod sum;

pub use diff::{central_difference, second_difference, FD_STEP};
pub use gauss::{gauss_legendre, TensorRule};
pub use quadrature::{
    integrate_1d, integrate_1d_with_breaks, integrate_2d, integrate_tensor, QuadratureConfig,
};
pub use rng::{rng_stream, SplitMix64, UniformStream};
pub use root::{bisect, bisect_with_cap, BISECT_MAX_ITER};
pub use sum::pairwise_sum;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("adaptive quadrature exceeded max depth {max_depth} on [{a}, {b}]")]
    MaxDepthExceeded { a: f64, b: f64, max_depth: u32 },
    #[error("quadrature produced a non-finite value on [{a}, {b}]")]
    NonFinite { a: f64, b: f64 },
    #[error("bracket violation: target {target} not within [f(lo)={f_lo}, f(hi)={f_hi}]")]
    BracketViolation { f_lo: f64, f_hi: f64, target: f64 },
    #[error("bisection did not converge after {iterations} iterations (last midpoint {last}, width {width})")]
    IterationCap { iterations: u32, last: f64, width: f64 },
}

/// Number of worker threads requested through `COPULA_FORGE_THREADS`, if set
/// to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("COPULA_FORGE_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}
