use crate::Scalar;

/// Step used for finite-difference derivative checks.
pub const FD_STEP: f64 = 1e-6;

/// Central difference `(f(x+h) - f(x-h)) / 2h`, falling back to a one-sided
/// difference when the stencil would leave `[0, 1]`.
pub fn central_difference<T: Scalar, F: Fn(T) -> T>(f: F, x: T, h: T) -> T {
    let lo = x - h;
    let hi = x + h;
    if lo < T::zero() {
        (f(hi) - f(x)) / h
    } else if hi > T::one() {
        (f(x) - f(lo)) / h
    } else {
        (f(hi) - f(lo)) / (h + h)
    }
}

/// Unscaled second difference `f(x-h) - 2 f(x) + f(x+h)`.
pub fn second_difference<T: Scalar, F: Fn(T) -> T>(f: F, x: T, h: T) -> T {
    f(x - h) - (f(x) + f(x)) + f(x + h)
}
