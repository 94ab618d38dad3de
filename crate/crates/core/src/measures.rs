//! Association measures: Kendall's tau, Spearman's rho and the normalised L1
//! distance sigma to independence.
//!
//! Two independent routes are provided. The closed form only needs the
//! one-dimensional integrals `I = int phi` and `J = int |phi|`:
//!
//! ```text
//! sigma = 12 |theta| J^2      tau = 8 theta I^2      rho = 12 theta I^2
//! ```
//!
//! The quadrature route integrates the definitions over the unit square
//! directly from `C` and `c`.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::copula::{Copula, SamplePairs};
use crate::generator::{Family, Generator};
use crate::numerics::{integrate_1d_with_breaks, integrate_tensor, NumericsError, QuadratureConfig, TensorRule};
use crate::Scalar;

pub const DEFAULT_RESOLUTION: usize = 512;
pub const MIN_RESOLUTION: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
    Empirical,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::Empirical => "empirical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationMeasures<T> {
    pub sigma: T,
    pub tau: T,
    pub rho: T,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasuresError {
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] NumericsError),
    #[error("resolution must be >= {MIN_RESOLUTION}, got {0}")]
    Resolution(usize),
    #[error("need at least 2 pairs, got {0}")]
    TooFewPairs(usize),
    #[error("sample contains a non-finite coordinate")]
    NonFinite,
    #[error("ranks of {0} have zero variance")]
    ZeroVariance(&'static str),
}

/// Exact `(int phi, int |phi|)` for the polynomial and piecewise-linear
/// catalog generators.
pub fn exact_integrals(family: Family) -> Option<(Ratio<i64>, Ratio<i64>)> {
    match family {
        Family::Phi1 => Some((Ratio::new(1, 4), Ratio::new(1, 4))),
        Family::Phi2 => Some((Ratio::new(1, 6), Ratio::new(1, 6))),
        // phi3 is odd about 1/2; int_0^{1/2} phi3 = 1/32
        Family::Phi3 => Some((Ratio::new(0, 1), Ratio::new(1, 16))),
        _ => None,
    }
}

fn ratio_to<T: Scalar>(r: Ratio<i64>) -> T {
    T::lit(r.to_f64().expect("small rational"))
}

/// Interior zeros of `phi` where it changes sign, located by bisection from
/// a 1024-cell scan. These are kinks of `|phi|`.
pub fn sign_changes<T: Scalar>(gen: &Generator<T>) -> Vec<T> {
    const CELLS: usize = 1024;
    let last = T::count(CELLS);
    let xs: Vec<T> = (0..=CELLS).map(|i| T::count(i) / last).collect();
    let fs: Vec<T> = xs.iter().map(|&x| gen.phi(x)).collect();
    let mut zeros = Vec::new();
    for i in 0..CELLS {
        let (fa, fb) = (fs[i], fs[i + 1]);
        if i > 0 && fa == T::zero() && fs[i - 1] * fb < T::zero() {
            zeros.push(xs[i]);
        } else if fa * fb < T::zero() {
            let (mut a, mut b) = (xs[i], xs[i + 1]);
            let neg_left = fa < T::zero();
            for _ in 0..100 {
                let m = a + (b - a) / T::lit(2.0);
                if m <= a || m >= b {
                    break;
                }
                if (gen.phi(m) < T::zero()) == neg_left {
                    a = m;
                } else {
                    b = m;
                }
            }
            zeros.push(a + (b - a) / T::lit(2.0));
        }
    }
    zeros
}

/// `(int_0^1 phi, int_0^1 |phi|)`, exact for phi1 to phi3 and by adaptive
/// Simpson (absolute tolerance 1e-12, split at kinks, joins and sign
/// changes) otherwise.
pub fn generator_integrals<T: Scalar>(gen: &Generator<T>) -> Result<(T, T), MeasuresError> {
    if let Some((i, j)) = gen.family().and_then(exact_integrals) {
        return Ok((ratio_to(i), ratio_to(j)));
    }
    let cfg = QuadratureConfig::default();
    let breaks = gen.breakpoints();
    let signed = integrate_1d_with_breaks(|x| gen.phi(x), T::zero(), T::one(), &breaks, &cfg)?;
    let mut abs_breaks = breaks;
    abs_breaks.extend(sign_changes(gen));
    let absolute = integrate_1d_with_breaks(|x| gen.phi(x).abs(), T::zero(), T::one(), &abs_breaks, &cfg)?;
    Ok((signed, absolute))
}

/// Closed-form measures from the integrals of `phi`. `rho = 1.5 tau` holds
/// exactly in floating point.
pub fn closed_form_measures<T: Scalar>(cop: &Copula<T>) -> Result<AssociationMeasures<T>, MeasuresError> {
    let (i, j) = generator_integrals(cop.generator())?;
    let theta = cop.theta();
    let k = theta * i * i;
    Ok(AssociationMeasures {
        sigma: T::lit(12.0) * (theta.abs() * j * j),
        tau: T::lit(8.0) * k,
        rho: T::lit(12.0) * k,
        method: Method::ClosedForm,
    })
}

/// Definitional measures on a tensor Gauss-Legendre grid with
/// `resolution` nodes per axis (composite over the generator's kinks, joins
/// and sign changes):
///
/// ```text
/// sigma = 12 int int |C - uv|   tau = 4 int int C c - 1   rho = 12 int int C - 3
/// ```
pub fn quadrature_measures<T: Scalar>(
    cop: &Copula<T>,
    resolution: usize,
) -> Result<AssociationMeasures<T>, MeasuresError> {
    if resolution < MIN_RESOLUTION {
        return Err(MeasuresError::Resolution(resolution));
    }
    let gen = cop.generator();
    let mut breaks = gen.breakpoints();
    breaks.extend(sign_changes(gen));
    let rule = TensorRule::composite(resolution, &breaks)?;
    let nan = T::nan();
    let cdf = |u: T, v: T| cop.cdf(u, v).unwrap_or(nan);
    let mass_c = integrate_tensor(&cdf, &rule, &rule);
    let c_times_density = integrate_tensor(
        &|u: T, v: T| cdf(u, v) * cop.density(u, v).unwrap_or(nan),
        &rule,
        &rule,
    );
    let l1 = integrate_tensor(&|u: T, v: T| (cdf(u, v) - u * v).abs(), &rule, &rule);
    Ok(AssociationMeasures {
        sigma: T::lit(12.0) * l1,
        tau: T::lit(4.0) * c_times_density - T::one(),
        rho: T::lit(12.0) * mass_c - T::lit(3.0),
        method: Method::Quadrature,
    })
}

/// Kendall's tau for the smoothed-cap family:
/// `8 theta (1/4 - 1/(3 n^2))^2`.
pub fn tau_phi5<T: Scalar>(n: u32, theta: T) -> T {
    let nf = T::count(n as usize);
    let a = T::lit(0.25) - T::one() / (T::lit(3.0) * nf * nf);
    T::lit(8.0) * theta * a * a
}

fn checked_pairs<T: Scalar>(pairs: &SamplePairs<T>) -> Result<&[(T, T)], MeasuresError> {
    let p = pairs.pairs.as_slice();
    if p.len() < 2 {
        return Err(MeasuresError::TooFewPairs(p.len()));
    }
    if p.iter().any(|&(u, v)| !u.is_finite() || !v.is_finite()) {
        return Err(MeasuresError::NonFinite);
    }
    Ok(p)
}

fn cmp<T: Scalar>(a: &T, b: &T) -> std::cmp::Ordering {
    a.partial_cmp(b).expect("finite values")
}

/// Sum of `t (t - 1) / 2` over runs of equal values in a sorted sequence.
fn tied_pairs<T: PartialEq>(sorted: impl Iterator<Item = T>) -> u64 {
    let mut total = 0u64;
    let mut run = 0u64;
    let mut prev: Option<T> = None;
    for x in sorted {
        if prev.as_ref() == Some(&x) {
            run += 1;
        } else {
            total += run * (run + 1) / 2;
            run = 0;
        }
        prev = Some(x);
    }
    total + run * (run + 1) / 2
}

/// Sorts `v` and returns the number of strict inversions.
fn merge_count<T: Scalar>(v: &mut [T], buf: &mut [T]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (l, r) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(l, bl) + merge_count(r, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Kendall's tau-a in `O(n log n)`: pairs are sorted by `(u, v)` and the
/// discordant pairs counted as inversions of the `v` sequence. Tied pairs
/// count as neither concordant nor discordant.
pub fn empirical_tau<T: Scalar>(pairs: &SamplePairs<T>) -> Result<T, MeasuresError> {
    let p = checked_pairs(pairs)?;
    let n = p.len() as u64;
    let mut sorted: Vec<(T, T)> = p.to_vec();
    sorted.sort_by(|a, b| cmp(&a.0, &b.0).then(cmp(&a.1, &b.1)));
    let ties_u = tied_pairs(sorted.iter().map(|p| p.0));
    let ties_joint = tied_pairs(sorted.iter().copied());
    let mut vs: Vec<T> = sorted.iter().map(|p| p.1).collect();
    let mut buf = vs.clone();
    let discordant = merge_count(&mut vs, &mut buf);
    let ties_v = tied_pairs(vs.iter().copied());
    let total = n * (n - 1) / 2;
    let net = total as i128 - ties_u as i128 - ties_v as i128 + ties_joint as i128 - 2 * discordant as i128;
    Ok(T::lit(net as f64) / T::lit(total as f64))
}

/// Ranks starting at 1, ties receiving the average of their positions.
fn average_ranks<T: Scalar>(xs: &[T]) -> Vec<T> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| cmp(&xs[a], &xs[b]));
    let mut ranks = vec![T::zero(); xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = T::lit((i + j) as f64 / 2.0 + 1.0);
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rho: Pearson correlation of average ranks.
pub fn empirical_rho<T: Scalar>(pairs: &SamplePairs<T>) -> Result<T, MeasuresError> {
    let p = checked_pairs(pairs)?;
    let ru = average_ranks(&p.iter().map(|p| p.0).collect::<Vec<_>>());
    let rv = average_ranks(&p.iter().map(|p| p.1).collect::<Vec<_>>());
    let n = T::count(p.len());
    let mean = (n + T::one()) / T::lit(2.0);
    let (mut suv, mut suu, mut svv) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in ru.iter().zip(&rv) {
        let (da, db) = (a - mean, b - mean);
        suv = suv + da * db;
        suu = suu + da * da;
        svv = svv + db * db;
    }
    if suu == T::zero() {
        return Err(MeasuresError::ZeroVariance("u"));
    }
    if svv == T::zero() {
        return Err(MeasuresError::ZeroVariance("v"));
    }
    Ok(suv / (suu * svv).sqrt())
}
