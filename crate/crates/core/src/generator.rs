//! Generators `phi` of the copula family and their validity checks.
//!
//! A generator is admissible iff `phi(0) = phi(1) = 0` and `phi` is
//! 1-Lipschitz; equivalently `|phi'| <= 1` almost everywhere together with
//! the envelope `|phi(x)| <= min(x, 1 - x)`. Validation checks these on a
//! uniform grid and reports per-condition verdicts.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::exprlang::{EvalError, Expression};
use crate::numerics::{central_difference, SplitMix64, FD_STEP};
use crate::Scalar;

pub const DEFAULT_GRID_POINTS: usize = 4097;
pub const DEFAULT_TOL: f64 = 1e-9;

/// The built-in generator catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `min(x, 1 - x)`, the envelope itself.
    Phi1,
    /// `x (1 - x)`, the FGM family.
    Phi2,
    /// `x (1 - x)(1 - 2x)`, cubic sections.
    Phi3,
    /// `sin(pi x) / pi`.
    Phi4,
    /// C1 smoothing of `Phi1` with a parabolic cap on `|x - 1/2| < 1/n`.
    Phi5,
    /// `1 - (x^n + (1 - x)^n)^(1/n)`.
    Phi6,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Phi1,
        Family::Phi2,
        Family::Phi3,
        Family::Phi4,
        Family::Phi5,
        Family::Phi6,
    ];

    /// Smallest admissible family parameter `n`, or `None` for families that
    /// take no parameter.
    pub fn min_parameter(self) -> Option<u32> {
        match self {
            Family::Phi5 => Some(1),
            Family::Phi6 => Some(2),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Phi1 => "phi1",
            Family::Phi2 => "phi2",
            Family::Phi3 => "phi3",
            Family::Phi4 => "phi4",
            Family::Phi5 => "phi5",
            Family::Phi6 => "phi6",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GeneratorError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("unknown generator family `{0}`")]
    UnknownFamily(String),
    #[error("{family} requires a parameter n >= {min}")]
    MissingParameter { family: Family, min: u32 },
    #[error("{family} requires n >= {min}, got {n}")]
    InvalidParameter { family: Family, n: u32, min: u32 },
    #[error("{family} takes no parameter, got n = {n}")]
    UnexpectedParameter { family: Family, n: u32 },
    #[error("generator expression fails at probe x = {x}: {source}")]
    ProbeDomain { x: f64, source: EvalError },
    #[error("validation grid needs at least 3 points, got {0}")]
    InvalidGrid(usize),
}

type RealFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone)]
enum Source<T> {
    Builtin {
        family: Family,
        n: u32,
    },
    Expression {
        phi: Expression,
        d1: Expression,
        d2: Expression,
    },
    Function {
        phi: RealFn<T>,
        d1: Option<RealFn<T>>,
        d2: Option<RealFn<T>>,
    },
}

/// A generator `phi` on `[0, 1]` with optional first and second derivatives.
///
/// Derivatives follow the left-branch convention at kinks. Builtins declare
/// their kinks (where `phi'` jumps) and curvature breaks (where only `phi''`
/// jumps) so that density evaluation, quadrature and concavity scans can
/// treat them explicitly.
#[derive(Clone)]
pub struct Generator<T> {
    source: Source<T>,
    label: String,
    parameter: Option<u32>,
    kinks: Vec<T>,
    curvature_breaks: Vec<T>,
}

impl<T: Scalar> fmt::Debug for Generator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("label", &self.label)
            .field("parameter", &self.parameter)
            .field("kinks", &self.kinks)
            .field("curvature_breaks", &self.curvature_breaks)
            .finish()
    }
}

impl<T: Scalar> Generator<T> {
    /// One of the six catalog generators. `n` is required for `Phi5`
    /// (`n >= 1`) and `Phi6` (`n >= 2`) and rejected otherwise.
    pub fn builtin(family: Family, n: Option<u32>) -> Result<Self, GeneratorError> {
        let n = match (family.min_parameter(), n) {
            (None, None) => 0,
            (None, Some(n)) => return Err(GeneratorError::UnexpectedParameter { family, n }),
            (Some(min), None) => return Err(GeneratorError::MissingParameter { family, min }),
            (Some(min), Some(n)) if n < min => {
                return Err(GeneratorError::InvalidParameter { family, n, min })
            }
            (Some(_), Some(n)) => n,
        };
        let half = T::lit(0.5);
        let (kinks, curvature_breaks) = match family {
            Family::Phi1 => (vec![half], vec![]),
            Family::Phi5 => {
                let w = T::one() / T::count(n as usize);
                let joins = [half - w, half + w]
                    .into_iter()
                    .filter(|&x| x > T::zero() && x < T::one())
                    .collect();
                (vec![], joins)
            }
            _ => (vec![], vec![]),
        };
        let label = match family.min_parameter() {
            Some(_) => format!("{family}[n={n}]"),
            None => family.to_string(),
        };
        Ok(Self {
            source: Source::Builtin { family, n },
            label,
            parameter: family.min_parameter().map(|_| n),
            kinks,
            curvature_breaks,
        })
    }

    /// Generator backed by a parsed expression; derivatives are symbolic.
    /// Only probed at `{0, 1/2, 1}` here; call [`Generator::validate`] before use.
    pub fn from_expression(expr: Expression) -> Result<Self, GeneratorError> {
        for x in [0.0, 0.5, 1.0] {
            expr.evaluate(T::lit(x))
                .map_err(|source| GeneratorError::ProbeDomain { x, source })?;
        }
        let d1 = expr.differentiate();
        let d2 = d1.differentiate();
        Ok(Self {
            source: Source::Expression { phi: expr, d1, d2 },
            label: "expr".to_string(),
            parameter: None,
            kinks: vec![],
            curvature_breaks: vec![],
        })
    }

    /// Generator backed by closures. Without `phi_prime`, derivative queries
    /// fall back to central finite differences.
    pub fn from_fn<F>(label: impl Into<String>, phi: F, phi_prime: Option<RealFn<T>>, phi_second: Option<RealFn<T>>) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self {
            source: Source::Function {
                phi: Arc::new(phi),
                d1: phi_prime,
                d2: phi_second,
            },
            label: label.into(),
            parameter: None,
            kinks: vec![],
            curvature_breaks: vec![],
        }
    }

    /// The degenerate generator `phi = 0`, which yields the independence
    /// copula for every `theta`.
    pub fn zero() -> Self {
        let mut g = Self::from_expression(Expression::Const(0.0)).expect("constant expression");
        g.label = "zero".to_string();
        g
    }

    /// Declares points where `phi'` is undefined.
    pub fn with_kinks(mut self, kinks: Vec<T>) -> Self {
        self.kinks = kinks;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn parameter(&self) -> Option<u32> {
        self.parameter
    }

    pub fn family(&self) -> Option<Family> {
        match self.source {
            Source::Builtin { family, .. } => Some(family),
            _ => None,
        }
    }

    pub fn expression(&self) -> Option<&Expression> {
        match &self.source {
            Source::Expression { phi, .. } => Some(phi),
            _ => None,
        }
    }

    /// Builtins whose admissibility is known analytically.
    pub fn known_valid(&self) -> bool {
        match self.source {
            Source::Builtin { family, n } => match family {
                Family::Phi5 => n >= 2,
                _ => true,
            },
            _ => false,
        }
    }

    pub fn kinks(&self) -> &[T] {
        &self.kinks
    }

    pub fn curvature_breaks(&self) -> &[T] {
        &self.curvature_breaks
    }

    /// Kinks and curvature breaks together, sorted.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut all: Vec<T> = self.kinks.iter().chain(&self.curvature_breaks).copied().collect();
        all.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        all.dedup();
        all
    }

    pub fn is_kink(&self, x: T) -> bool {
        self.kinks.contains(&x)
    }

    pub fn has_symbolic_derivative(&self) -> bool {
        match &self.source {
            Source::Builtin { .. } | Source::Expression { .. } => true,
            Source::Function { d1, .. } => d1.is_some(),
        }
    }

    pub fn try_phi(&self, x: T) -> Result<T, EvalError> {
        match &self.source {
            Source::Builtin { family, n } => Ok(builtin_phi(*family, *n, x)),
            Source::Expression { phi, .. } => phi.evaluate(x),
            Source::Function { phi, .. } => Ok(phi(x)),
        }
    }

    /// `phi(x)`; NaN where an expression-backed generator is undefined.
    #[inline]
    pub fn phi(&self, x: T) -> T {
        self.try_phi(x).unwrap_or_else(|_| T::nan())
    }

    /// Symbolic `phi'(x)` when available (`None` otherwise or where the
    /// derivative expression is undefined).
    pub fn phi_prime(&self, x: T) -> Option<T> {
        match &self.source {
            Source::Builtin { family, n } => Some(builtin_d1(*family, *n, x)),
            Source::Expression { d1, .. } => d1.evaluate(x).ok(),
            Source::Function { d1, .. } => d1.as_ref().map(|d| d(x)),
        }
    }

    /// `phi'(x)`, symbolic when possible, central finite difference otherwise.
    pub fn derivative(&self, x: T) -> T {
        self.phi_prime(x)
            .unwrap_or_else(|| central_difference(|t| self.phi(t), x, T::lit(FD_STEP)))
    }

    pub fn phi_second(&self, x: T) -> Option<T> {
        match &self.source {
            Source::Builtin { family, n } => Some(builtin_d2(*family, *n, x)),
            Source::Expression { d2, .. } => d2.evaluate(x).ok(),
            Source::Function { d2, .. } => d2.as_ref().map(|d| d(x)),
        }
    }

    /// Checks the admissibility conditions on a uniform grid of
    /// `grid_points` points with tolerance `tol`.
    pub fn validate(&self, grid_points: usize, tol: T) -> Result<ValidationReport<T>, GeneratorError> {
        validate(self, grid_points, tol)
    }

    pub fn validate_default(&self) -> ValidationReport<T> {
        validate(self, DEFAULT_GRID_POINTS, T::lit(DEFAULT_TOL)).expect("default grid is valid")
    }
}

fn builtin_phi<T: Scalar>(family: Family, n: u32, x: T) -> T {
    let one = T::one();
    let half = T::lit(0.5);
    match family {
        Family::Phi1 => x.min(one - x),
        Family::Phi2 => x * (one - x),
        Family::Phi3 => x * (one - x) * (one - x - x),
        Family::Phi4 => {
            if x == T::zero() || x == one {
                T::zero()
            } else {
                (T::PI() * x).sin() / T::PI()
            }
        }
        Family::Phi5 => {
            let nf = T::count(n as usize);
            let w = one / nf;
            if x <= half - w {
                x
            } else if x >= half + w {
                one - x
            } else {
                let t = x - half;
                half * (one - w) - nf * half * t * t
            }
        }
        Family::Phi6 => {
            let ni = n as i32;
            let s = x.powi(ni) + (one - x).powi(ni);
            one - s.powf(one / T::count(n as usize))
        }
    }
}

fn builtin_d1<T: Scalar>(family: Family, n: u32, x: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    match family {
        Family::Phi1 => {
            if x <= half {
                one
            } else {
                -one
            }
        }
        Family::Phi2 => one - two * x,
        Family::Phi3 => one - T::lit(6.0) * x + T::lit(6.0) * x * x,
        Family::Phi4 => (T::PI() * x).cos(),
        Family::Phi5 => {
            let nf = T::count(n as usize);
            let w = one / nf;
            if x <= half - w {
                one
            } else if x >= half + w {
                -one
            } else {
                -nf * (x - half)
            }
        }
        Family::Phi6 => {
            let ni = n as i32;
            let nf = T::count(n as usize);
            let s = x.powi(ni) + (one - x).powi(ni);
            let d = x.powi(ni - 1) - (one - x).powi(ni - 1);
            -s.powf(one / nf - one) * d
        }
    }
}

fn builtin_d2<T: Scalar>(family: Family, n: u32, x: T) -> T {
    let one = T::one();
    let half = T::lit(0.5);
    match family {
        Family::Phi1 => T::zero(),
        Family::Phi2 => -T::lit(2.0),
        Family::Phi3 => T::lit(12.0) * x - T::lit(6.0),
        Family::Phi4 => -T::PI() * (T::PI() * x).sin(),
        Family::Phi5 => {
            let nf = T::count(n as usize);
            let w = one / nf;
            if x <= half - w || x >= half + w {
                T::zero()
            } else {
                -nf
            }
        }
        Family::Phi6 => {
            let ni = n as i32;
            let nf = T::count(n as usize);
            let s = x.powi(ni) + (one - x).powi(ni);
            let d = x.powi(ni - 1) - (one - x).powi(ni - 1);
            let e = x.powi(ni - 2) + (one - x).powi(ni - 2);
            (nf - one) * s.powf(one / nf - T::lit(2.0)) * (d * d - s * e)
        }
    }
}

/// Which admissibility condition a check covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `phi(0) = phi(1) = 0`
    Endpoints,
    /// `|phi'| <= 1`
    Lipschitz,
    /// `|phi(x)| <= min(x, 1 - x)`
    Envelope,
}

impl Condition {
    pub fn code(self) -> &'static str {
        match self {
            Condition::Endpoints => "a",
            Condition::Lipschitz => "ii",
            Condition::Envelope => "iii",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Condition::Endpoints => "phi(0) = phi(1) = 0",
            Condition::Lipschitz => "|phi'(x)| <= 1",
            Condition::Envelope => "|phi(x)| <= min(x, 1-x)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CheckStatus<T> {
    /// Holds analytically (catalog generator) and on the grid.
    Pass,
    /// Holds at every grid point; not a proof.
    PassGrid,
    /// Violated at `witness`, where the checked quantity equals `value`.
    Fail { witness: T, value: T },
    Inconclusive { reason: String },
}

impl<T> CheckStatus<T> {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckStatus::Pass | CheckStatus::PassGrid)
    }

    pub fn label(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::PassGrid => "pass (grid)",
            CheckStatus::Fail { .. } => "fail",
            CheckStatus::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck<T> {
    pub condition: Condition,
    pub status: CheckStatus<T>,
    pub grid_points: usize,
    pub tol: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<T> {
    pub generator: String,
    pub endpoints: ConditionCheck<T>,
    pub lipschitz: ConditionCheck<T>,
    pub envelope: ConditionCheck<T>,
}

impl<T: Scalar> ValidationReport<T> {
    pub fn checks(&self) -> [&ConditionCheck<T>; 3] {
        [&self.endpoints, &self.lipschitz, &self.envelope]
    }

    /// Overall verdict: every condition passes.
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.status.is_pass())
    }

    /// First failing or inconclusive check, if any.
    pub fn first_problem(&self) -> Option<&ConditionCheck<T>> {
        self.checks().into_iter().find(|c| !c.status.is_pass())
    }
}

/// Tracks the violating grid point with the largest magnitude; NaN counts as
/// the worst possible value, ties keep the first point.
struct Worst<T> {
    hit: Option<(T, T)>,
}

impl<T: Scalar> Worst<T> {
    fn new() -> Self {
        Self { hit: None }
    }

    fn offer(&mut self, x: T, value: T) {
        let score = |v: T| if v.is_nan() { T::infinity() } else { v.abs() };
        match self.hit {
            Some((_, best)) if score(value) <= score(best) => {}
            _ => self.hit = Some((x, value)),
        }
    }

    fn into_status(self, pass: CheckStatus<T>) -> CheckStatus<T> {
        match self.hit {
            Some((witness, value)) => CheckStatus::Fail { witness, value },
            None => pass,
        }
    }
}

/// Grid validation of the admissibility conditions.
///
/// A failing entry names the violating grid point with the largest checked
/// magnitude (`|phi|` or `|phi'|`).
pub fn validate<T: Scalar>(
    gen: &Generator<T>,
    grid_points: usize,
    tol: T,
) -> Result<ValidationReport<T>, GeneratorError> {
    if grid_points < 3 {
        return Err(GeneratorError::InvalidGrid(grid_points));
    }
    let certified = gen.known_valid();
    let pass = || {
        if certified {
            CheckStatus::Pass
        } else {
            CheckStatus::PassGrid
        }
    };
    let last = T::count(grid_points - 1);
    let grid = (0..grid_points).map(|i| T::count(i) / last);

    let mut endpoints = Worst::new();
    for x in [T::zero(), T::one()] {
        let v = gen.phi(x);
        if !(v.abs() <= tol) {
            endpoints.offer(x, v);
        }
    }

    let one_plus = T::one() + tol;
    let fd_margin = T::lit(1e-6);
    let mut lipschitz = Worst::new();
    let mut marginal = None;
    let mut envelope = Worst::new();
    let mut used_fd = false;
    for x in grid {
        let v = gen.phi(x);
        let bound = x.min(T::one() - x) + tol;
        if !(v.abs() <= bound) {
            envelope.offer(x, v);
        }
        let (d, fd) = match gen.phi_prime(x) {
            Some(d) => (d, false),
            None => (central_difference(|t| gen.phi(t), x, T::lit(FD_STEP)), true),
        };
        used_fd |= fd;
        if !(d.abs() <= one_plus) {
            if fd && d.abs() <= one_plus + fd_margin {
                marginal.get_or_insert(x);
            } else {
                lipschitz.offer(x, d);
            }
        }
    }

    let lipschitz_pass = if used_fd {
        match marginal {
            Some(x) => CheckStatus::Inconclusive {
                reason: format!(
                    "finite-difference slope within {} of the bound at x = {x}",
                    fd_margin
                ),
            },
            None => CheckStatus::PassGrid,
        }
    } else {
        pass()
    };

    let check = |condition, status, points| ConditionCheck {
        condition,
        status,
        grid_points: points,
        tol,
    };
    Ok(ValidationReport {
        generator: gen.label().to_string(),
        endpoints: check(Condition::Endpoints, endpoints.into_status(pass()), 2),
        lipschitz: check(Condition::Lipschitz, lipschitz.into_status(lipschitz_pass), grid_points),
        envelope: check(Condition::Envelope, envelope.into_status(pass()), grid_points),
    })
}

/// Admissible building blocks: each vanishes at 0 and 1, has `|phi'| <= 1`
/// and stays under `min(x, 1-x)`.
pub const ADMISSIBLE_TERMS: [&str; 6] = [
    "x*(1-x)",
    "x*(1-x)*(1-2*x)",
    "sin(pi*x)/pi",
    "x^2*(1-x)",
    "x*(1-x)^2",
    "min(x, 1-x)",
];

/// Expression text for a random admissible generator: a combination of
/// [`ADMISSIBLE_TERMS`] whose coefficients have absolute sum at most 1.
pub fn random_admissible_expression(rng: &mut SplitMix64) -> String {
    let raw: Vec<f64> = ADMISSIBLE_TERMS.iter().map(|_| 2.0 * rng.next_f64() - 1.0).collect();
    let total: f64 = raw.iter().map(|c| c.abs()).sum();
    let scale = rng.next_f64() / total.max(f64::MIN_POSITIVE);
    raw.iter()
        .zip(ADMISSIBLE_TERMS)
        .map(|(c, term)| format!("({:?})*({term})", c * scale))
        .collect::<Vec<_>>()
        .join(" + ")
}
