//! The copula `C(u, v) = uv + theta * phi(u) * phi(v)` and its exact sampler.

use thiserror::Error;

use crate::generator::{Generator, ValidationReport};
use crate::numerics::{bisect, NumericsError, SplitMix64};
use crate::Scalar;

pub const QUANTILE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CopulaError {
    #[error("theta = {0} is outside [-1, 1]")]
    ThetaOutOfRange(f64),
    #[error("generator `{}` is not admissible", .0.generator)]
    InvalidGenerator(Box<ValidationReport<f64>>),
    #[error("argument ({u}, {v}) is outside the unit square")]
    OutOfUnitSquare { u: f64, v: f64 },
    #[error("density undefined at kink x = {0}")]
    UndefinedAtKink(f64),
    #[error("rectangle [{u1}, {u2}] x [{v1}, {v2}] has unordered corners")]
    UnorderedRectangle { u1: f64, u2: f64, v1: f64, v2: f64 },
    #[error("conditional quantile did not converge: {0}")]
    Quantile(#[from] NumericsError),
    #[error("sample size must be >= 1")]
    EmptySample,
}

/// A member of the family: an admissible generator with `theta in [-1, 1]`.
#[derive(Debug, Clone)]
pub struct Copula<T: Scalar> {
    gen: Generator<T>,
    theta: T,
}

fn in_unit<T: Scalar>(x: T) -> bool {
    x >= T::zero() && x <= T::one()
}

impl<T: Scalar> Copula<T> {
    /// Validates the generator on the default grid and checks `theta`.
    pub fn new(gen: Generator<T>, theta: T) -> Result<Self, CopulaError> {
        if !(theta >= -T::one() && theta <= T::one()) {
            return Err(CopulaError::ThetaOutOfRange(theta.as_f64()));
        }
        let report = gen.validate_default();
        if !report.passed() {
            return Err(CopulaError::InvalidGenerator(Box::new(report_to_f64(&report))));
        }
        Ok(Self { gen, theta })
    }

    pub fn generator(&self) -> &Generator<T> {
        &self.gen
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    /// Same generator, different `theta`.
    pub fn with_theta(&self, theta: T) -> Result<Self, CopulaError> {
        if !(theta >= -T::one() && theta <= T::one()) {
            return Err(CopulaError::ThetaOutOfRange(theta.as_f64()));
        }
        Ok(Self {
            gen: self.gen.clone(),
            theta,
        })
    }

    fn check_point(u: T, v: T) -> Result<(), CopulaError> {
        if in_unit(u) && in_unit(v) {
            Ok(())
        } else {
            Err(CopulaError::OutOfUnitSquare {
                u: u.as_f64(),
                v: v.as_f64(),
            })
        }
    }

    fn check_kink(&self, x: T) -> Result<(), CopulaError> {
        if self.gen.is_kink(x) {
            Err(CopulaError::UndefinedAtKink(x.as_f64()))
        } else {
            Ok(())
        }
    }

    pub fn cdf(&self, u: T, v: T) -> Result<T, CopulaError> {
        Self::check_point(u, v)?;
        Ok(u * v + self.theta * self.gen.phi(u) * self.gen.phi(v))
    }

    /// `c(u, v) = 1 + theta * phi'(u) * phi'(v)`; an error at declared kinks.
    pub fn density(&self, u: T, v: T) -> Result<T, CopulaError> {
        Self::check_point(u, v)?;
        self.check_kink(u)?;
        self.check_kink(v)?;
        Ok(T::one() + self.theta * self.gen.derivative(u) * self.gen.derivative(v))
    }

    /// `P(V <= v | U = u) = v + theta * phi'(u) * phi(v)`.
    pub fn conditional_cdf(&self, u: T, v: T) -> Result<T, CopulaError> {
        Self::check_point(u, v)?;
        self.check_kink(u)?;
        Ok(v + self.theta * self.gen.derivative(u) * self.gen.phi(v))
    }

    /// Inverts [`Copula::conditional_cdf`] in `v` by bisection on `[0, 1]`.
    pub fn conditional_quantile(&self, u: T, w: T, tol: T) -> Result<T, CopulaError> {
        Self::check_point(u, w)?;
        self.check_kink(u)?;
        let slope = self.theta * self.gen.derivative(u);
        if slope == T::zero() {
            return Ok(w);
        }
        let gen = &self.gen;
        Ok(bisect(|v| v + slope * gen.phi(v), T::zero(), T::one(), w, tol)?)
    }

    /// C-volume of `[u1, u2] x [v1, v2]`.
    pub fn rectangle_volume(&self, u1: T, u2: T, v1: T, v2: T) -> Result<T, CopulaError> {
        let ordered = in_unit(u1) && in_unit(u2) && in_unit(v1) && in_unit(v2) && u1 <= u2 && v1 <= v2;
        if !ordered {
            return Err(CopulaError::UnorderedRectangle {
                u1: u1.as_f64(),
                u2: u2.as_f64(),
                v1: v1.as_f64(),
                v2: v2.as_f64(),
            });
        }
        let g = &self.gen;
        Ok((u2 - u1) * (v2 - v1) + self.theta * (g.phi(u2) - g.phi(u1)) * (g.phi(v2) - g.phi(v1)))
    }

    /// Draws `n` pairs by the conditional-inverse method: `u` and `w` come
    /// from a [`SplitMix64`] stream seeded with `seed` (in that order per
    /// pair) and `v = conditional_quantile(u, w)`. A `u` landing exactly on a
    /// kink is moved up by one ulp.
    pub fn sample(&self, n: usize, seed: u64) -> Result<SamplePairs<T>, CopulaError> {
        if n == 0 {
            return Err(CopulaError::EmptySample);
        }
        let kinks: Vec<f64> = self.gen.kinks().iter().map(|k| k.as_f64()).collect();
        let tol = T::lit(QUANTILE_TOL);
        let mut rng = SplitMix64::new(seed);
        let mut pairs = Vec::with_capacity(n);
        for _ in 0..n {
            let mut u = rng.next_f64();
            let w = rng.next_f64();
            if kinks.contains(&u) {
                u = u.next_up();
            }
            let mut ut = T::lit(u);
            if self.gen.is_kink(ut) {
                ut = ut + ut * T::epsilon();
            }
            let v = self.conditional_quantile(ut, T::lit(w), tol)?;
            pairs.push((ut, v));
        }
        Ok(SamplePairs { pairs, seed, n })
    }
}

fn report_to_f64<T: Scalar>(r: &ValidationReport<T>) -> ValidationReport<f64> {
    use crate::generator::{CheckStatus, ConditionCheck};
    let conv = |c: &ConditionCheck<T>| ConditionCheck {
        condition: c.condition,
        status: match &c.status {
            CheckStatus::Pass => CheckStatus::Pass,
            CheckStatus::PassGrid => CheckStatus::PassGrid,
            CheckStatus::Fail { witness, value } => CheckStatus::Fail {
                witness: witness.as_f64(),
                value: value.as_f64(),
            },
            CheckStatus::Inconclusive { reason } => CheckStatus::Inconclusive {
                reason: reason.clone(),
            },
        },
        grid_points: c.grid_points,
        tol: c.tol.as_f64(),
    };
    ValidationReport {
        generator: r.generator.clone(),
        endpoints: conv(&r.endpoints),
        lipschitz: conv(&r.lipschitz),
        envelope: conv(&r.envelope),
    }
}

/// Reproducible draws on the unit square together with the seed used.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePairs<T> {
    pub pairs: Vec<(T, T)>,
    pub seed: u64,
    pub n: usize,
}

impl<T: Scalar> SamplePairs<T> {
    /// Wraps externally supplied pairs (seed 0).
    pub fn from_pairs(pairs: Vec<(T, T)>) -> Self {
        let n = pairs.len();
        Self { pairs, seed: 0, n }
    }

    pub fn us(&self) -> impl Iterator<Item = T> + '_ {
        self.pairs.iter().map(|p| p.0)
    }

    pub fn vs(&self) -> impl Iterator<Item = T> + '_ {
        self.pairs.iter().map(|p| p.1)
    }
}
