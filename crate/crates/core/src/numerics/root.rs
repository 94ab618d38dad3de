use crate::Scalar;

use super::NumericsError;

pub const BISECT_MAX_ITER: u32 = 200;

/// Solves `f(x) = target` for nondecreasing `f` on `[lo, hi]`.
///
/// Stops once `|f(x) - target| <= tol` or the bracket is no wider than `tol`.
pub fn bisect<T, F>(f: F, lo: T, hi: T, target: T, tol: T) -> Result<T, NumericsError>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    bisect_with_cap(f, lo, hi, target, tol, BISECT_MAX_ITER)
}

pub fn bisect_with_cap<T, F>(
    f: F,
    mut lo: T,
    mut hi: T,
    target: T,
    tol: T,
    max_iter: u32,
) -> Result<T, NumericsError>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo <= target && target <= f_hi) {
        return Err(NumericsError::BracketViolation {
            f_lo: f_lo.as_f64(),
            f_hi: f_hi.as_f64(),
            target: target.as_f64(),
        });
    }
    if (f_lo - target).abs() <= tol {
        return Ok(lo);
    }
    if (f_hi - target).abs() <= tol {
        return Ok(hi);
    }
    let two = T::lit(2.0);
    let mut mid = lo + (hi - lo) / two;
    for _ in 0..max_iter {
        mid = lo + (hi - lo) / two;
        let fm = f(mid);
        if (fm - target).abs() <= tol || hi - lo <= tol {
            return Ok(mid);
        }
        if fm < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(NumericsError::IterationCap {
        iterations: max_iter,
        last: mid.as_f64(),
        width: (hi - lo).as_f64(),
    })
}
