use rayon::prelude::*;

use crate::Scalar;

use super::gauss::{panel_edges, TensorRule};
use super::sum::pairwise_sum;
use super::NumericsError;

/// Initial subdivision of every panel before adaptive refinement starts, so
/// that integrands vanishing on the first five Simpson points are not taken
/// for zero.
const INITIAL_SPLITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub abs_tol: T,
    pub max_depth: u32,
    pub nodes_per_axis: usize,
}

impl<T: Scalar> QuadratureConfig<T> {
    pub fn new(abs_tol: T, max_depth: u32, nodes_per_axis: usize) -> Result<Self, NumericsError> {
        let cfg = Self {
            abs_tol,
            max_depth,
            nodes_per_axis,
        };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn with_nodes(nodes_per_axis: usize) -> Result<Self, NumericsError> {
        Self::new(Self::default().abs_tol, Self::default().max_depth, nodes_per_axis)
    }

    fn check(&self) -> Result<(), NumericsError> {
        if !(self.abs_tol > T::zero()) {
            return Err(NumericsError::InvalidConfig(format!(
                "abs_tol must be > 0, got {}",
                self.abs_tol
            )));
        }
        if self.max_depth > 60 {
            return Err(NumericsError::InvalidConfig(format!(
                "max_depth must be <= 60, got {}",
                self.max_depth
            )));
        }
        if self.nodes_per_axis < 2 {
            return Err(NumericsError::InvalidConfig(format!(
                "nodes_per_axis must be >= 2, got {}",
                self.nodes_per_axis
            )));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-12),
            max_depth: 50,
            nodes_per_axis: 512,
        }
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate_1d<T, F>(f: F, a: T, b: T, cfg: &QuadratureConfig<T>) -> Result<T, NumericsError>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    integrate_1d_with_breaks(f, a, b, &[], cfg)
}

/// Adaptive Simpson quadrature with the interval split at the declared
/// breakpoints (kinks, jumps). Each panel receives a share of `abs_tol`
/// proportional to its width.
pub fn integrate_1d_with_breaks<T, F>(
    f: F,
    a: T,
    b: T,
    breaks: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<T, NumericsError>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    cfg.check()?;
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(NumericsError::InvalidInterval {
            a: a.as_f64(),
            b: b.as_f64(),
        });
    }
    if a == b {
        return Ok(T::zero());
    }
    let total = b - a;
    let mut parts = Vec::new();
    for edge in panel_edges(a, b, breaks).windows(2) {
        let (pa, pb) = (edge[0], edge[1]);
        let step = (pb - pa) / T::count(INITIAL_SPLITS);
        for k in 0..INITIAL_SPLITS {
            let lo = pa + step * T::count(k);
            let hi = if k + 1 == INITIAL_SPLITS {
                pb
            } else {
                pa + step * T::count(k + 1)
            };
            let tol = cfg.abs_tol * (hi - lo) / total;
            parts.push(simpson_panel(&f, lo, hi, tol, cfg.max_depth)?);
        }
    }
    Ok(pairwise_sum(&parts))
}

fn simpson_panel<T: Scalar, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    tol: T,
    max_depth: u32,
) -> Result<T, NumericsError> {
    let fa = f(a);
    let fb = f(b);
    let m = mid(a, b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    adapt(f, [a, m, b], [fa, fm, fb], whole, tol, max_depth, 0)
}

#[inline]
fn mid<T: Scalar>(a: T, b: T) -> T {
    a + (b - a) / T::lit(2.0)
}

#[inline]
fn simpson<T: Scalar>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

fn adapt<T: Scalar, F: Fn(T) -> T>(
    f: &F,
    [a, m, b]: [T; 3],
    [fa, fm, fb]: [T; 3],
    whole: T,
    tol: T,
    max_depth: u32,
    depth: u32,
) -> Result<T, NumericsError> {
    let lm = mid(a, m);
    let rm = mid(m, b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(NumericsError::NonFinite {
            a: a.as_f64(),
            b: b.as_f64(),
        });
    }
    let fifteen = T::lit(15.0);
    // rounding floor: below this the Richardson estimate is pure noise
    let floor = T::lit(64.0) * T::epsilon() * (left.abs() + right.abs());
    if delta.abs() <= fifteen * tol || delta.abs() <= floor {
        return Ok(left + right + delta / fifteen);
    }
    if depth >= max_depth {
        return Err(NumericsError::MaxDepthExceeded {
            a: a.as_f64(),
            b: b.as_f64(),
            max_depth,
        });
    }
    let half = tol / T::lit(2.0);
    let l = adapt(f, [a, lm, m], [fa, flm, fm], left, half, max_depth, depth + 1)?;
    let r = adapt(f, [m, rm, b], [fm, frm, fb], right, half, max_depth, depth + 1)?;
    Ok(l + r)
}

/// Tensor Gauss-Legendre quadrature of `f` over the unit square with
/// `cfg.nodes_per_axis` nodes on each axis.
pub fn integrate_2d<T, F>(f: F, cfg: &QuadratureConfig<T>) -> Result<T, NumericsError>
where
    T: Scalar,
    F: Fn(T, T) -> T + Sync,
{
    cfg.check()?;
    let rule = TensorRule::gauss_legendre(cfg.nodes_per_axis)?;
    Ok(integrate_tensor(&f, &rule, &rule))
}

/// Applies the tensor product of two axis rules to `f(u, v)`.
///
/// Rows (fixed `u`) may be evaluated on different threads; each row is summed
/// sequentially and the row totals are combined pairwise in row order, so the
/// result is bit-identical for any thread count.
pub fn integrate_tensor<T, F>(f: &F, u_rule: &TensorRule<T>, v_rule: &TensorRule<T>) -> T
where
    T: Scalar,
    F: Fn(T, T) -> T + Sync,
{
    let vs = v_rule.nodes();
    let vw = v_rule.weights();
    let rows: Vec<T> = u_rule
        .nodes()
        .par_iter()
        .zip(u_rule.weights().par_iter())
        .map(|(&u, &wu)| {
            let terms: Vec<T> = vs.iter().zip(vw).map(|(&v, &wv)| wv * f(u, v)).collect();
            wu * pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&rows)
}
