//! Semiparametric bivariate copulas `C(u, v) = uv + theta * phi(u) * phi(v)`.
//!
//! The crate validates generators `phi`, evaluates the copula, its density and
//! conditionals, draws exact samples, computes Kendall's tau, Spearman's rho
//! and the normalised L1 distance sigma by closed form and by independent
//! quadrature, and classifies symmetry and dependence properties from
//! conditions on `phi`, cross-checked against grid oracles.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`). The type
//! aliases at the crate root fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod copula;
pub mod exprlang;
pub mod generator;
pub mod measures;
pub mod numerics;
pub mod properties;
mod scalar;

pub use scalar::Scalar;

pub use exprlang::{parse, Expression};
pub use generator::Family;
pub use measures::Method;
pub use properties::{Status, Witness};

pub type Generator = generator::Generator<f64>;
pub type ValidationReport = generator::ValidationReport<f64>;
pub type Copula = copula::Copula<f64>;
pub type SamplePairs = copula::SamplePairs<f64>;
pub type AssociationMeasures = measures::AssociationMeasures<f64>;
pub type Verdict = properties::Verdict<f64>;
pub type PropertyReport = properties::PropertyReport<f64>;
pub type QuadratureConfig = numerics::QuadratureConfig<f64>;
