//! Symmetry, positive dependence and dependence orderings.
//!
//! Every property of `C(u, v) = uv + theta phi(u) phi(v)` reduces to a
//! condition on `phi` alone:
//!
//! | property | condition on `phi` |
//! |---|---|
//! | radial symmetry | `phi(u) = phi(1-u)` for all `u`, or `phi(u) = -phi(1-u)` for all `u` |
//! | joint symmetry | `phi(u) = -phi(1-u)` for all `u` |
//! | PFD | always (`theta >= 0`) |
//! | PQD, concordance ordering | `phi` has constant sign |
//! | LTD = LCSD | `phi(u)/u` monotone, `phi'(0)` at `u = 0` |
//! | RTI = RCSI | `phi(u)/(u-1)` monotone, `phi'(1)` at `u = 1` |
//! | SI = TP2, SI ordering | `phi` concave or convex (`phi'` monotone) |
//!
//! These are evaluated on a uniform grid with a tolerance. Failures carry a
//! witness that violates the defining inequality of the property itself, so
//! it can be re-checked against the copula. The `oracle_*` functions test the
//! defining inequalities directly.
//!
//! For `theta < 0` the same conditions decide the negative-dependence
//! counterparts (NQD, LTI, RTD, SD, RR2, ...), and the report is flagged.

use std::fmt;

use rayon::prelude::*;

use crate::copula::Copula;
use crate::generator::Generator;
use crate::numerics::{integrate_1d_with_breaks, integrate_tensor, NumericsError, QuadratureConfig, TensorRule};
use crate::Scalar;

pub const DEFAULT_GRID: usize = 1001;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const PQD_ORACLE_GRID: usize = 201;
pub const TP2_ORACLE_GRID: usize = 101;
pub const ORACLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a condition fails. Coordinates are listed in the order of the
/// defining inequality of the property:
///
/// * `Point(u)`: a generator abscissa (symmetry identities).
/// * `Pair(a, b)`: a point `(u, v)` of the square, or for radial symmetry the
///   abscissae where the even and the odd identity fail.
/// * `Triple(u1, u2, v)`: `u1 < u2` at fixed `v` (tail and stochastic
///   monotonicity).
/// * `Quad(u1, u2, v1, v2)`: a 2x2 minor of the density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness<T> {
    Point(T),
    Pair(T, T),
    Triple(T, T, T),
    Quad(T, T, T, T),
}

impl<T: Copy> Witness<T> {
    pub fn coordinates(&self) -> Vec<T> {
        match *self {
            Witness::Point(a) => vec![a],
            Witness::Pair(a, b) => vec![a, b],
            Witness::Triple(a, b, c) => vec![a, b, c],
            Witness::Quad(a, b, c, d) => vec![a, b, c, d],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMethod {
    PhiCondition,
    DefinitionOracle,
}

impl CheckMethod {
    pub fn name(self) -> &'static str {
        match self {
            CheckMethod::PhiCondition => "phi_condition",
            CheckMethod::DefinitionOracle => "definition_oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict<T> {
    pub status: Status,
    pub witness: Option<Witness<T>>,
    pub note: String,
    pub method: CheckMethod,
}

impl<T> Verdict<T> {
    fn holds(method: CheckMethod, note: impl Into<String>) -> Self {
        Self { status: Status::Holds, witness: None, note: note.into(), method }
    }

    fn fails(method: CheckMethod, witness: Witness<T>, note: impl Into<String>) -> Self {
        Self { status: Status::Fails, witness: Some(witness), note: note.into(), method }
    }

    fn inconclusive(method: CheckMethod, note: impl Into<String>) -> Self {
        Self { status: Status::Inconclusive, witness: None, note: note.into(), method }
    }

    fn noted(mut self, extra: &str) -> Self {
        if !extra.is_empty() {
            self.note = format!("{}; {}", self.note, extra);
        }
        self
    }

    pub fn holds_p(&self) -> bool {
        self.status == Status::Holds
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport<T> {
    pub generator: String,
    pub theta: T,
    pub grid: usize,
    pub tol: T,
    /// `theta < 0`: verdicts refer to the negative-dependence counterparts.
    pub negative_dependence: bool,
    pub radial_symmetry: Verdict<T>,
    pub joint_symmetry: Verdict<T>,
    pub pfd: Verdict<T>,
    pub pqd: Verdict<T>,
    pub ltd: Verdict<T>,
    pub rti: Verdict<T>,
    pub si: Verdict<T>,
    pub lcsd: Verdict<T>,
    pub rcsi: Verdict<T>,
    pub tp2: Verdict<T>,
    pub concordance_ordered: Verdict<T>,
    pub si_ordered: Verdict<T>,
}

impl<T> PropertyReport<T> {
    pub const NAMES: [&'static str; 12] = [
        "radial_symmetry",
        "joint_symmetry",
        "pfd",
        "pqd",
        "ltd",
        "rti",
        "si",
        "lcsd",
        "rcsi",
        "tp2",
        "concordance_ordered",
        "si_ordered",
    ];

    pub fn verdicts(&self) -> [(&'static str, &Verdict<T>); 12] {
        let v = [
            &self.radial_symmetry,
            &self.joint_symmetry,
            &self.pfd,
            &self.pqd,
            &self.ltd,
            &self.rti,
            &self.si,
            &self.lcsd,
            &self.rcsi,
            &self.tp2,
            &self.concordance_ordered,
            &self.si_ordered,
        ];
        let mut i = 0;
        v.map(|verdict| {
            i += 1;
            (Self::NAMES[i - 1], verdict)
        })
    }

    /// TP2 => SI => (LTD and RTI) => PQD, LCSD = LTD and RCSI = RTI,
    /// checked wherever the statuses involved are decisive.
    pub fn chain_consistent(&self) -> bool {
        use Status::*;
        let implies = |a: &Verdict<T>, b: &Verdict<T>| !(a.status == Holds && b.status == Fails);
        implies(&self.tp2, &self.si)
            && implies(&self.si, &self.ltd)
            && implies(&self.si, &self.rti)
            && !(self.ltd.status == Holds && self.rti.status == Holds && self.pqd.status == Fails)
            && self.lcsd.status == self.ltd.status
            && self.rcsi.status == self.rti.status
    }
}

/// Uniform grid `i / (points - 1)`, `i = 0..points`.
pub fn unit_grid<T: Scalar>(points: usize) -> Vec<T> {
    let last = T::count(points.max(2) - 1);
    (0..points.max(2)).map(|i| T::count(i) / last).collect()
}

fn grid_note<T: Scalar>(grid: usize, tol: T) -> String {
    format!("grid {grid}, tol {:e}", tol.as_f64())
}

/// First index with `|f| > tol` and the first index of opposite strict sign.
fn opposite_signs<T: Scalar>(fs: &[T], tol: T) -> Option<(usize, usize)> {
    let first = fs.iter().position(|f| f.abs() > tol)?;
    let s = fs[first].signum();
    let second = fs.iter().position(|&f| f * s < -tol)?;
    Some((first.min(second), first.max(second)))
}

/// A sequence fails to be monotone within `tol` when it has both a rise
/// (`r[j] > r[i] + tol`, `i < j`) and a fall (`r[l] < r[k] - tol`, `k < l`).
struct NonMonotone {
    rise: (usize, usize),
    fall: (usize, usize),
}

fn monotone_scan<T: Scalar>(rs: &[T], tol: T) -> Option<NonMonotone> {
    let (mut lo, mut hi) = (0, 0);
    let (mut rise, mut fall) = (None, None);
    for j in 1..rs.len() {
        if rise.is_none() && rs[j] > rs[lo] + tol {
            rise = Some((lo, j));
        }
        if fall.is_none() && rs[j] < rs[hi] - tol {
            fall = Some((hi, j));
        }
        if rs[j] < rs[lo] {
            lo = j;
        }
        if rs[j] > rs[hi] {
            hi = j;
        }
    }
    Some(NonMonotone { rise: rise?, fall: fall? })
}

/// Radial and joint symmetry from the even and odd identities of `phi`.
pub fn symmetry_check<T: Scalar>(gen: &Generator<T>, grid: usize, tol: T) -> (Verdict<T>, Verdict<T>) {
    let xs = unit_grid::<T>(grid);
    let first_failure = |sign: T| {
        xs.iter()
            .copied()
            .find(|&u| (gen.phi(u) - sign * gen.phi(T::one() - u)).abs() > tol || gen.phi(u).is_nan())
    };
    let even = first_failure(T::one());
    let odd = first_failure(-T::one());
    let note = grid_note(grid, tol);
    let m = CheckMethod::PhiCondition;
    let radial = match (even, odd) {
        (None, _) => Verdict::holds(m, format!("phi(u) = phi(1-u); {note}")),
        (_, None) => Verdict::holds(m, format!("phi(u) = -phi(1-u); {note}")),
        (Some(a), Some(b)) => Verdict::fails(
            m,
            Witness::Pair(a, b),
            format!("phi(u) = phi(1-u) fails at the first coordinate, phi(u) = -phi(1-u) at the second; {note}"),
        ),
    };
    let joint = match odd {
        None => Verdict::holds(m, format!("phi(u) = -phi(1-u); {note}")),
        Some(b) => Verdict::fails(m, Witness::Point(b), format!("phi(u) + phi(1-u) != 0; {note}")),
    };
    (radial, joint)
}

struct Scan<T> {
    xs: Vec<T>,
    phi: Vec<T>,
}

impl<T: Scalar> Scan<T> {
    fn new(gen: &Generator<T>, grid: usize) -> Self {
        let xs = unit_grid::<T>(grid);
        let phi = xs.iter().map(|&x| gen.phi(x)).collect();
        Self { xs, phi }
    }

    fn sign_witness(&self, tol: T) -> Option<Witness<T>> {
        opposite_signs(&self.phi, tol).map(|(a, b)| Witness::Pair(self.xs[a], self.xs[b]))
    }

    /// Witness `(u1, u2, v)` for a monotone-in-`u` requirement on
    /// `theta phi(v) r(u)` (nonincreasing): a rise of `r` paired with the
    /// largest positive `phi(v)`, else a fall paired with the most negative.
    fn triple(&self, us: &[T], nm: &NonMonotone, tol: T) -> Option<Witness<T>> {
        let argbest = |better: fn(T, T) -> bool| {
            (0..self.phi.len()).fold(0, |best, i| if better(self.phi[i], self.phi[best]) { i } else { best })
        };
        let vpos = argbest(|a, b| a > b);
        let vneg = argbest(|a, b| a < b);
        if self.phi[vpos] > tol {
            Some(Witness::Triple(us[nm.rise.0], us[nm.rise.1], self.xs[vpos]))
        } else if self.phi[vneg] < -tol {
            Some(Witness::Triple(us[nm.fall.0], us[nm.fall.1], self.xs[vneg]))
        } else {
            None
        }
    }
}

/// `phi'` on the grid with the generator's kinks removed.
fn derivative_samples<T: Scalar>(gen: &Generator<T>, xs: &[T]) -> (Vec<T>, Vec<T>) {
    xs.iter()
        .copied()
        .filter(|&x| !gen.is_kink(x))
        .map(|x| (x, gen.derivative(x)))
        .unzip()
}

fn kink_note<T: Scalar>(gen: &Generator<T>) -> String {
    if gen.kinks().is_empty() {
        String::new()
    } else {
        let ks: Vec<String> = gen.kinks().iter().map(|k| k.to_string()).collect();
        format!("kinks excluded: {}", ks.join(", "))
    }
}

/// Concavity or convexity as monotonicity of `phi'`.
fn shape_scan<T: Scalar>(gen: &Generator<T>, scan: &Scan<T>, tol: T) -> (Vec<T>, Option<NonMonotone>) {
    let (us, d1) = derivative_samples(gen, &scan.xs);
    let nm = monotone_scan(&d1, tol);
    (us, nm)
}

/// Concordance ordering (constant sign of `phi`) and the sufficient
/// condition for SI ordering (`phi` concave or convex).
pub fn ordering_check<T: Scalar>(gen: &Generator<T>, grid: usize, tol: T) -> (Verdict<T>, Verdict<T>) {
    let scan = Scan::new(gen, grid);
    let note = grid_note(grid, tol);
    let m = CheckMethod::PhiCondition;
    let concordance = match scan.sign_witness(tol) {
        None => Verdict::holds(m, format!("phi has constant sign; {note}")),
        Some(w) => Verdict::fails(
            m,
            w,
            format!("phi(u) phi(v) < 0, so C(u,v) is decreasing in theta there; {note}"),
        ),
    };
    let (_, nm) = shape_scan(gen, &scan, tol);
    let kinks = kink_note(gen);
    let si = match nm {
        None => Verdict::holds(m, format!("phi is concave or convex; {note}")).noted(&kinks),
        Some(_) => Verdict::inconclusive(
            m,
            format!("phi is neither concave nor convex; this condition is only sufficient, so no failure is certified; {note}"),
        )
        .noted(&kinks),
    };
    (concordance, si)
}

/// All twelve verdicts from the conditions on `phi`.
pub fn dependence_profile<T: Scalar>(gen: &Generator<T>, theta: T, grid: usize, tol: T) -> PropertyReport<T> {
    let (radial_symmetry, joint_symmetry) = symmetry_check(gen, grid, tol);
    let (concordance_ordered, si_ordered) = ordering_check(gen, grid, tol);
    let negative = theta < T::zero();
    let m = CheckMethod::PhiCondition;
    let note = grid_note(grid, tol);
    let flag = if negative {
        "theta < 0: negative-dependence counterpart"
    } else {
        ""
    };

    let pfd = Verdict::holds(m, "cov(g(U), g(V)) = theta (int g phi')^2").noted(flag);
    let scan = Scan::new(gen, grid);
    let (pqd, ltd, rti, si, tp2) = if theta == T::zero() {
        let indep = || Verdict::holds(m, "theta = 0: independence, holds with equality");
        (indep(), indep(), indep(), indep(), indep())
    } else {
        let pqd = match scan.sign_witness(tol) {
            None => Verdict::holds(m, format!("phi has constant sign; {note}")),
            Some(w) => Verdict::fails(m, w, format!("theta phi(u) phi(v) has the wrong sign; {note}")),
        };
        let ratio_verdict = |label: &str, rs: Vec<T>| match monotone_scan(&rs, tol) {
            None => Verdict::holds(m, format!("{label} is monotone; {note}")),
            Some(nm) => match scan.triple(&scan.xs, &nm, tol) {
                Some(w) => Verdict::fails(m, w, format!("{label} is not monotone; {note}")),
                None => Verdict::inconclusive(m, format!("{label} is not monotone but phi vanishes on the grid; {note}")),
            },
        };
        let one = T::one();
        let left: Vec<T> = scan
            .xs
            .iter()
            .zip(&scan.phi)
            .map(|(&u, &p)| if u == T::zero() { gen.derivative(u) } else { p / u })
            .collect();
        let right: Vec<T> = scan
            .xs
            .iter()
            .zip(&scan.phi)
            .map(|(&u, &p)| if u == one { gen.derivative(u) } else { p / (u - one) })
            .collect();
        let ltd = ratio_verdict("phi(u)/u", left);
        let rti = ratio_verdict("phi(u)/(u-1)", right);

        let (us, nm) = shape_scan(gen, &scan, tol);
        let kinks = kink_note(gen);
        let (si, tp2) = match nm {
            None => (
                Verdict::holds(m, format!("phi is concave or convex; {note}")).noted(&kinks),
                Verdict::holds(m, format!("phi is concave or convex; {note}")).noted(&kinks),
            ),
            Some(nm) => {
                let si = match scan.triple(&us, &nm, tol) {
                    Some(w) => Verdict::fails(m, w, format!("phi' is not monotone; {note}")),
                    None => Verdict::inconclusive(m, format!("phi' is not monotone but phi vanishes on the grid; {note}")),
                };
                let (i, j) = nm.rise;
                let (k, l) = nm.fall;
                let tp2 = Verdict::fails(
                    m,
                    Witness::Quad(us[i], us[j], us[k], us[l]),
                    format!("(phi'(u1) - phi'(u2)) (phi'(v1) - phi'(v2)) < 0; {note}"),
                );
                (si.noted(&kinks), tp2.noted(&kinks))
            }
        };
        (pqd.noted(flag), ltd.noted(flag), rti.noted(flag), si.noted(flag), tp2.noted(flag))
    };
    let copy = |v: &Verdict<T>, what: &str| {
        let mut c = v.clone();
        c.note = format!("equivalent to {what} in this family; {}", v.note);
        c
    };
    let lcsd = copy(&ltd, "LTD");
    let rcsi = copy(&rti, "RTI");
    PropertyReport {
        generator: gen.label().to_string(),
        theta,
        grid,
        tol,
        negative_dependence: negative,
        radial_symmetry,
        joint_symmetry,
        pfd,
        pqd,
        ltd,
        rti,
        si,
        lcsd,
        rcsi,
        tp2,
        concordance_ordered,
        si_ordered,
    }
}

/// `C(u, v) >= uv - 1e-12` on the full `grid x grid` lattice. The witness
/// is the lexicographically first violation.
pub fn oracle_pqd<T: Scalar>(cop: &Copula<T>, grid: usize) -> Verdict<T> {
    let xs = unit_grid::<T>(grid);
    let slack = T::lit(ORACLE_SLACK);
    let hit = xs.par_iter().find_map_first(|&u| {
        xs.iter()
            .copied()
            .find(|&v| match cop.cdf(u, v) {
                Ok(c) => !(c >= u * v - slack),
                Err(_) => true,
            })
            .map(|v| (u, v))
    });
    let note = format!("C(u,v) >= uv - {ORACLE_SLACK:e} on {grid}x{grid}");
    match hit {
        None => Verdict::holds(CheckMethod::DefinitionOracle, note),
        Some((u, v)) => Verdict::fails(CheckMethod::DefinitionOracle, Witness::Pair(u, v), note),
    }
}

/// Exhaustive 2x2 minors of the density on a `grid x grid` lattice (kink
/// abscissae dropped), using
/// `c(u1,v1) c(u2,v2) - c(u1,v2) c(u2,v1) = theta (phi'(u1) - phi'(u2)) (phi'(v1) - phi'(v2))`.
pub fn oracle_tp2<T: Scalar>(cop: &Copula<T>, grid: usize) -> Verdict<T> {
    let gen = cop.generator();
    let theta = cop.theta();
    let slack = T::lit(ORACLE_SLACK);
    let (xs, d) = derivative_samples(gen, &unit_grid::<T>(grid));
    let m = CheckMethod::DefinitionOracle;
    let note = format!("2x2 density minors >= -{ORACLE_SLACK:e} on {grid}x{grid}");
    let pairs: Vec<(usize, usize, T)> = (0..xs.len())
        .flat_map(|i| ((i + 1)..xs.len()).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, d[i] - d[j]))
        .collect();
    let dmin = pairs.iter().fold(T::infinity(), |a, p| a.min(p.2));
    let dmax = pairs.iter().fold(T::neg_infinity(), |a, p| a.max(p.2));
    if pairs.is_empty() || theta == T::zero() {
        return Verdict::holds(m, note);
    }
    let violates = |a: T, b: T| theta * a * b < -slack;
    let first = pairs
        .iter()
        .find(|p| violates(p.2, dmin) || violates(p.2, dmax));
    let Some(&(i, j, du)) = first else {
        return Verdict::holds(m, note);
    };
    let &(k, l, _) = pairs
        .iter()
        .find(|q| violates(du, q.2))
        .expect("partner exists by construction");
    let (u1, u2, v1, v2) = (xs[i], xs[j], xs[k], xs[l]);
    let h = |u, v| cop.density(u, v).unwrap_or(T::nan());
    let minor = h(u1, v1) * h(u2, v2) - h(u1, v2) * h(u2, v1);
    let check = if minor < T::zero() {
        "witness minor negative from density values"
    } else {
        "witness minor not reproduced from density values"
    };
    Verdict::fails(m, Witness::Quad(u1, u2, v1, v2), format!("{note}; {check}"))
}

/// `E[g(U) g(V)] - E[g(U)] E[g(V)]` by tensor Gauss-Legendre quadrature
/// against the density (`resolution` nodes per axis, split at the
/// generator's breakpoints).
pub fn oracle_pfd<T, G>(cop: &Copula<T>, g: G, resolution: usize) -> Result<T, NumericsError>
where
    T: Scalar,
    G: Fn(T) -> T + Sync,
{
    let rule = TensorRule::composite(resolution, &cop.generator().breakpoints())?;
    let h = |u: T, v: T| cop.density(u, v).unwrap_or(T::nan());
    let egg = integrate_tensor(&|u: T, v: T| g(u) * g(v) * h(u, v), &rule, &rule);
    let egu = integrate_tensor(&|u: T, v: T| g(u) * h(u, v), &rule, &rule);
    let egv = integrate_tensor(&|u: T, v: T| g(v) * h(u, v), &rule, &rule);
    Ok(egg - egu * egv)
}

/// `theta (int_0^1 g phi')^2` by adaptive Simpson, split at the breakpoints
/// with one-sided derivatives on each panel.
pub fn pfd_closed_form<T, G>(cop: &Copula<T>, g: G) -> Result<T, NumericsError>
where
    T: Scalar,
    G: Fn(T) -> T,
{
    let gen = cop.generator();
    let cfg = QuadratureConfig::default();
    let mut edges = vec![T::zero()];
    edges.extend(gen.breakpoints());
    edges.push(T::one());
    let mut total = T::zero();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let nudge = T::epsilon() * T::lit(4.0);
        let f = |x: T| {
            let x = if x == a && gen.is_kink(a) { a + nudge } else { x };
            g(x) * gen.derivative(x)
        };
        total = total + integrate_1d_with_breaks(f, a, b, &[], &cfg)?;
    }
    Ok(cop.theta() * total * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprlang::parse;
    use crate::generator::Family;

    fn gen(f: Family) -> Generator<f64> {
        let n = f.min_parameter().map(|m| m.max(4));
        Generator::builtin(f, n).unwrap()
    }

    fn profile(f: Family, theta: f64) -> PropertyReport<f64> {
        dependence_profile(&gen(f), theta, DEFAULT_GRID, DEFAULT_TOL)
    }

    fn cop(f: Family, theta: f64) -> Copula<f64> {
        Copula::new(gen(f), theta).unwrap()
    }

    /// Re-evaluates a failure witness against the defining inequality.
    fn reproduces(name: &str, c: &Copula<f64>, w: Witness<f64>) -> bool {
        let g = c.generator();
        match (name, w) {
            ("joint_symmetry", Witness::Point(u)) => (g.phi(u) + g.phi(1.0 - u)).abs() > DEFAULT_TOL,
            ("radial_symmetry", Witness::Pair(a, b)) => {
                (g.phi(a) - g.phi(1.0 - a)).abs() > DEFAULT_TOL && (g.phi(b) + g.phi(1.0 - b)).abs() > DEFAULT_TOL
            }
            ("pqd", Witness::Pair(u, v)) => c.cdf(u, v).unwrap() < u * v,
            ("concordance_ordered", Witness::Pair(u, v)) => {
                // C is not monotone in theta at (u, v)
                let lo = c.with_theta(-1.0).unwrap().cdf(u, v).unwrap();
                let hi = c.with_theta(1.0).unwrap().cdf(u, v).unwrap();
                let mid = c.with_theta(0.0).unwrap().cdf(u, v).unwrap();
                (g.phi(u) * g.phi(v) < 0.0) && hi < mid && mid < lo
            }
            ("ltd" | "lcsd", Witness::Triple(u1, u2, v)) => {
                let ratio = |u: f64| if u == 0.0 { c.conditional_cdf(0.0, v).unwrap() } else { c.cdf(u, v).unwrap() / u };
                ratio(u2) > ratio(u1)
            }
            ("rti" | "rcsi", Witness::Triple(u1, u2, v)) => {
                let surv = |u: f64| {
                    if u == 1.0 {
                        1.0 - c.conditional_cdf(1.0, v).unwrap()
                    } else {
                        (1.0 - u - v + c.cdf(u, v).unwrap()) / (1.0 - u)
                    }
                };
                surv(u2) < surv(u1)
            }
            ("si", Witness::Triple(u1, u2, v)) => {
                c.conditional_cdf(u2, v).unwrap() > c.conditional_cdf(u1, v).unwrap()
            }
            ("tp2", Witness::Quad(u1, u2, v1, v2)) => {
                let h = |u, v| c.density(u, v).unwrap();
                h(u1, v1) * h(u2, v2) < h(u1, v2) * h(u2, v1)
            }
            _ => false,
        }
    }

    #[test]
    fn quadratic_has_every_positive_property() {
        let r = profile(Family::Phi2, 1.0);
        for (name, v) in r.verdicts() {
            if name == "joint_symmetry" {
                assert_eq!(v.status, Status::Fails);
            } else {
                assert_eq!(v.status, Status::Holds, "{name}: {}", v.note);
            }
        }
        assert!(!r.negative_dependence);
    }

    #[test]
    fn cubic_is_pfd_but_not_pqd() {
        let r = profile(Family::Phi3, 1.0);
        assert_eq!(r.pfd.status, Status::Holds);
        assert_eq!(r.pqd.status, Status::Fails);
        assert_eq!(r.pqd.witness, Some(Witness::Pair(0.001, 0.501)));
        assert_eq!(r.joint_symmetry.status, Status::Holds);
        assert_eq!(r.radial_symmetry.status, Status::Holds);
        assert_eq!(r.concordance_ordered.status, Status::Fails);
        assert_eq!(r.si_ordered.status, Status::Inconclusive);
        for s in [r.ltd.status, r.rti.status, r.si.status, r.tp2.status] {
            assert_eq!(s, Status::Fails);
        }
    }

    #[test]
    fn kinked_tent_is_tp2() {
        let r = profile(Family::Phi1, 1.0);
        assert_eq!(r.tp2.status, Status::Holds);
        assert!(r.tp2.note.contains("kinks excluded: 0.5"));
    }

    #[test]
    fn every_failure_witness_reproduces() {
        let exprs = ["x*(1-x)*(1-2*x)", "0.25*x*(1-x)*(1-4*x)", "-x*(1-x)", "x*(1-x)*(1-x)"];
        let mut gens: Vec<Generator<f64>> = Family::ALL.iter().map(|&f| gen(f)).collect();
        gens.extend(exprs.iter().map(|e| Generator::from_expression(parse(e).unwrap()).unwrap()));
        for g in gens {
            for theta in [0.5, 1.0] {
                let c = Copula::new(g.clone(), theta).unwrap();
                let r = dependence_profile(&g, theta, DEFAULT_GRID, DEFAULT_TOL);
                assert!(r.chain_consistent(), "{}", g.label());
                for (name, v) in r.verdicts() {
                    if v.status == Status::Fails {
                        let w = v.witness.expect("failure carries a witness");
                        assert!(reproduces(name, &c, w), "{} {name} {w:?}", g.label());
                    }
                }
            }
        }
    }

    #[test]
    fn symmetry_of_catalog() {
        for f in Family::ALL {
            let (radial, joint) = symmetry_check(&gen(f), DEFAULT_GRID, DEFAULT_TOL);
            assert_eq!(radial.status, Status::Holds, "{f}");
            let expect = if f == Family::Phi3 { Status::Holds } else { Status::Fails };
            assert_eq!(joint.status, expect, "{f}");
        }
        let (_, joint) = symmetry_check(&gen(Family::Phi2), DEFAULT_GRID, DEFAULT_TOL);
        assert_eq!(joint.witness, Some(Witness::Point(0.0_f64.max(0.001))));
        let g = gen(Family::Phi2);
        assert!(g.phi(0.25) + g.phi(0.75) > 0.3);
    }

    #[test]
    fn asymmetric_generator_fails_radial() {
        let g = Generator::from_expression(parse("x*(1-x)*(1-x)").unwrap()).unwrap();
        let (radial, joint) = symmetry_check(&g, DEFAULT_GRID, DEFAULT_TOL);
        assert_eq!(radial.status, Status::Fails);
        assert_eq!(joint.status, Status::Fails);
    }

    #[test]
    fn zero_generator_everything_holds() {
        let z = Generator::<f64>::zero();
        for theta in [-1.0, 0.0, 1.0] {
            let r = dependence_profile(&z, theta, DEFAULT_GRID, DEFAULT_TOL);
            for (name, v) in r.verdicts() {
                assert_eq!(v.status, Status::Holds, "{name} theta={theta}");
            }
        }
    }

    #[test]
    fn negative_theta_is_flagged() {
        let r = profile(Family::Phi2, -0.5);
        assert!(r.negative_dependence);
        assert!(r.pqd.note.contains("negative-dependence"));
        assert_eq!(r.pqd.status, Status::Holds);
    }

    #[test]
    fn oracles_agree_with_conditions() {
        for f in Family::ALL {
            for theta in [0.5, 1.0] {
                let c = cop(f, theta);
                let r = profile(f, theta);
                let pqd = oracle_pqd(&c, PQD_ORACLE_GRID);
                let tp2 = oracle_tp2(&c, TP2_ORACLE_GRID);
                assert_eq!(pqd.status, r.pqd.status, "{f} pqd");
                assert_eq!(tp2.status, r.tp2.status, "{f} tp2");
                if let Some(w) = pqd.witness {
                    assert!(reproduces("pqd", &c, w));
                }
                if let Some(w) = tp2.witness {
                    assert!(reproduces("tp2", &c, w));
                }
            }
        }
    }

    #[test]
    fn oracle_pqd_at_independence() {
        let v = oracle_pqd(&cop(Family::Phi3, 0.0), PQD_ORACLE_GRID);
        assert_eq!(v.status, Status::Holds);
        let v = oracle_tp2(&cop(Family::Phi3, 0.0), TP2_ORACLE_GRID);
        assert_eq!(v.status, Status::Holds);
    }

    #[test]
    fn oracle_tp2_negative_theta_detects_reverse_regularity() {
        let v = oracle_tp2(&cop(Family::Phi2, -1.0), TP2_ORACLE_GRID);
        assert_eq!(v.status, Status::Fails);
        assert!(reproduces("tp2", &cop(Family::Phi2, -1.0), v.witness.unwrap()));
    }

    #[test]
    fn pfd_identity_for_linear_g() {
        let c = cop(Family::Phi2, 1.0);
        let cov = oracle_pfd(&c, |t| t, 512).unwrap();
        assert!((cov - 1.0 / 36.0).abs() < 1e-10, "{cov}");
        let closed = pfd_closed_form(&c, |t| t).unwrap();
        assert!((closed - 1.0 / 36.0).abs() < 1e-12);
        assert!(oracle_pfd(&c, |_| 1.0, 512).unwrap().abs() < 1e-10);
        let indep = cop(Family::Phi4, 0.0);
        assert!(oracle_pfd(&indep, |t: f64| t * t, 512).unwrap().abs() < 1e-10);
    }

    #[test]
    fn pfd_on_kinked_generator() {
        let c = cop(Family::Phi1, 1.0);
        // int t phi1'(t) dt = 1/8 - 3/8 = -1/4
        let closed = pfd_closed_form(&c, |t| t).unwrap();
        assert!((closed - 1.0 / 16.0).abs() < 1e-12);
        let cov = oracle_pfd(&c, |t| t, 512).unwrap();
        assert!((cov - 1.0 / 16.0).abs() < 1e-10);
    }

    #[test]
    fn unit_exponent_power_family_reduces_to_quadratic() {
        // u^b v^b (1-u)^a (1-v)^a with a = b = 1
        let g = Generator::from_expression(parse("x^1*(1-x)^1").unwrap()).unwrap();
        let q = gen(Family::Phi2);
        for x in unit_grid::<f64>(1001) {
            assert!((g.phi(x) - q.phi(x)).abs() <= 1e-15);
        }
        let c = Copula::new(g.clone(), 0.7).unwrap();
        assert_eq!(dependence_profile(&g, 0.7, DEFAULT_GRID, DEFAULT_TOL).pqd.status, Status::Holds);
        assert_eq!(oracle_pqd(&c, PQD_ORACLE_GRID).status, Status::Holds);
    }

    #[test]
    fn cdf_nondecreasing_in_theta_for_sign_constant_phi() {
        for f in [Family::Phi1, Family::Phi2, Family::Phi4] {
            let g = gen(f);
            let thetas = [-1.0, -0.5, 0.0, 0.5, 1.0];
            for u in unit_grid::<f64>(51) {
                for v in unit_grid::<f64>(51) {
                    let vals: Vec<f64> = thetas
                        .iter()
                        .map(|&t| Copula::new(g.clone(), t).unwrap().cdf(u, v).unwrap())
                        .collect();
                    assert!(vals.windows(2).all(|w| w[0] <= w[1]), "{f} {u} {v}");
                }
            }
        }
    }

    #[test]
    fn monotone_scan_finds_rise_and_fall() {
        assert!(monotone_scan(&[3.0, 2.0, 2.0, 1.0], 1e-9).is_none());
        assert!(monotone_scan(&[1.0, 2.0, 2.0, 3.0], 1e-9).is_none());
        let nm = monotone_scan(&[1.0, 0.0, 2.0], 1e-9).unwrap();
        assert_eq!(nm.rise, (1, 2));
        assert_eq!(nm.fall, (0, 1));
    }
}
