use crate::Scalar;

use super::NumericsError;

/// Gauss-Legendre nodes and weights mapped onto `[0, 1]`, in increasing node
/// order.
///
/// Roots of `P_n` are found by Newton iteration in `f64` starting from the
/// usual `cos(pi (i - 1/4) / (n + 1/2))` guesses, then converted to `T`.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let nf = n as f64;
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 {
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        // z is the i-th largest root on [-1, 1]
        nodes[n - 1 - i] = 0.5 * (1.0 + z);
        nodes[i] = 0.5 * (1.0 - z);
        weights[n - 1 - i] = 0.5 * w;
        weights[i] = 0.5 * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    (
        nodes.into_iter().map(T::lit).collect(),
        weights.into_iter().map(T::lit).collect(),
    )
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// One axis of a tensor-product rule on `[0, 1]`: a Gauss-Legendre rule,
/// optionally composite over panels split at caller-declared breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> TensorRule<T> {
    pub fn gauss_legendre(nodes_per_axis: usize) -> Result<Self, NumericsError> {
        Self::composite(nodes_per_axis, &[])
    }

    /// Splits `[0, 1]` at every breakpoint strictly inside the interval and
    /// gives each panel a share of `nodes_per_axis` proportional to its width
    /// (at least two nodes per panel). No node ever lands on a breakpoint.
    pub fn composite(nodes_per_axis: usize, breaks: &[T]) -> Result<Self, NumericsError> {
        if nodes_per_axis < 2 {
            return Err(NumericsError::InvalidConfig(format!(
                "nodes_per_axis must be >= 2, got {nodes_per_axis}"
            )));
        }
        let edges = panel_edges(T::zero(), T::one(), breaks);
        let mut nodes = Vec::with_capacity(nodes_per_axis + edges.len() * 2);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let width = b - a;
            let share = (width * T::count(nodes_per_axis)).round().to_usize().unwrap_or(2);
            let m = share.max(2);
            let (xs, ws) = gauss_legendre::<T>(m);
            for (x, wt) in xs.into_iter().zip(ws) {
                nodes.push(a + width * x);
                weights.push(width * wt);
            }
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Sorted, deduplicated panel edges `a = e_0 < e_1 < ... < e_k = b` using the
/// breakpoints strictly inside `(a, b)`.
pub(crate) fn panel_edges<T: Scalar>(a: T, b: T, breaks: &[T]) -> Vec<T> {
    let mut edges = vec![a];
    let mut inner: Vec<T> = breaks
        .iter()
        .copied()
        .filter(|&x| x.is_finite() && x > a && x < b)
        .collect();
    inner.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    inner.dedup();
    edges.extend(inner);
    edges.push(b);
    edges
}
