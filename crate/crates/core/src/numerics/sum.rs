use crate::Scalar;

const BLOCK: usize = 8;

/// Pairwise (cascade) summation with a fixed split pattern, so the result only
/// depends on the order of `values`.
pub fn pairwise_sum<T: Scalar>(values: &[T]) -> T {
    if values.len() <= BLOCK {
        return values.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_small_and_large() {
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
        assert_eq!(pairwise_sum(&[1.0, 2.0, 3.0]), 6.0);
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
    }

    #[test]
    fn better_than_naive_on_many_small_terms() {
        let v = vec![0.1f32; 1 << 20];
        let exact = 0.1f64 * (1u64 << 20) as f64;
        let pairwise = pairwise_sum(&v) as f64;
        let naive = v.iter().fold(0.0f32, |a, &b| a + b) as f64;
        assert!((pairwise - exact).abs() < (naive - exact).abs());
    }
}
