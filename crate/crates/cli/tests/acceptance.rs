//! Acceptance suite: ten criteria at their stated tolerances, one PASS/FAIL
//! line each. Exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use copula_forge::copula::Copula;
use copula_forge::generator::{random_admissible_expression, Family, Generator};
use copula_forge::measures::{
    closed_form_measures, empirical_rho, empirical_tau, generator_integrals, quadrature_measures, tau_phi5,
};
use copula_forge::numerics::{integrate_tensor, SplitMix64, TensorRule};
use copula_forge::parse;
use copula_forge::properties::{
    dependence_profile, oracle_pfd, oracle_pqd, oracle_tp2, pfd_closed_form, symmetry_check, Status, Witness,
    DEFAULT_GRID, DEFAULT_TOL,
};

type Outcome = Result<String, String>;

fn builtin(f: Family, n: Option<u32>) -> Generator<f64> {
    Generator::builtin(f, n).expect("catalog generator")
}

fn copula(g: &Generator<f64>, theta: f64) -> Copula<f64> {
    Copula::new(g.clone(), theta).expect("admissible")
}

/// phi1..phi4 once, phi5 and phi6 for each listed parameter.
fn catalog(ns: &[u32]) -> Vec<Generator<f64>> {
    let mut out = Vec::new();
    for f in Family::ALL {
        match f.min_parameter() {
            None => out.push(builtin(f, None)),
            Some(_) => out.extend(ns.iter().map(|&n| builtin(f, Some(n)))),
        }
    }
    out
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_reference(f: Family, theta: f64) -> [f64; 3] {
    let a = theta.abs();
    let p4 = PI.powi(4);
    match f {
        Family::Phi1 => [3.0 * a / 4.0, theta / 2.0, 3.0 * theta / 4.0],
        Family::Phi2 => [a / 3.0, 2.0 * theta / 9.0, theta / 3.0],
        Family::Phi3 => [3.0 * a / 64.0, 0.0, 0.0],
        Family::Phi4 => [48.0 * a / p4, 32.0 * theta / p4, 48.0 * theta / p4],
        _ => unreachable!(),
    }
}

fn c1_table() -> Outcome {
    let mut worst: f64 = 0.0;
    for theta in [-1.0, -0.5, 0.5, 1.0] {
        for f in [Family::Phi1, Family::Phi2, Family::Phi3, Family::Phi4] {
            let m = closed_form_measures(&copula(&builtin(f, None), theta)).map_err(|e| e.to_string())?;
            for (got, want) in [m.sigma, m.tau, m.rho].into_iter().zip(table_reference(f, theta)) {
                let err = (got - want).abs();
                worst = worst.max(err);
                ensure(err <= 1e-10, || format!("{f} theta={theta}: {got} vs {want}"))?;
            }
        }
    }
    Ok(format!("max abs error {worst:.1e}"))
}

fn c2_oracle() -> Outcome {
    let mut gens: Vec<(Generator<f64>, f64)> = [Family::Phi1, Family::Phi2, Family::Phi3, Family::Phi4]
        .into_iter()
        .map(|f| (builtin(f, None), if f == Family::Phi1 { 1e-4 } else { 1e-6 }))
        .collect();
    gens.extend([2, 4, 8].map(|n| (builtin(Family::Phi5, Some(n)), 1e-4)));
    let mut worst = 0.0f64;
    for (g, tol) in &gens {
        for theta in [-1.0, 1.0] {
            let c = copula(g, theta);
            let a = closed_form_measures(&c).map_err(|e| e.to_string())?;
            let b = quadrature_measures(&c, 512).map_err(|e| e.to_string())?;
            for (x, y, what) in [(a.sigma, b.sigma, "sigma"), (a.tau, b.tau, "tau"), (a.rho, b.rho, "rho")] {
                worst = worst.max((x - y).abs());
                ensure((x - y).abs() <= *tol, || format!("{} theta={theta} {what}: {x} vs {y}", g.label()))?;
            }
        }
    }
    Ok(format!("{} generators, max abs diff {worst:.1e}", gens.len()))
}

fn c3_bounds() -> Outcome {
    let mut gens = catalog(&[2, 4, 8, 16]);
    let mut rng = SplitMix64::new(0xC0FFEE);
    for _ in 0..100 {
        let text = random_admissible_expression(&mut rng);
        let g = Generator::from_expression(parse(&text).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(g.validate_default().passed(), || format!("random generator not admissible: {text}"))?;
        gens.push(g);
    }
    for g in &gens {
        for theta in [-1.0, -0.5, 0.5, 1.0] {
            let m = closed_form_measures(&copula(g, theta)).map_err(|e| e.to_string())?;
            let a = theta.abs();
            ensure(
                m.sigma <= 0.75 * a + 1e-12 && m.tau.abs() <= 0.5 * a + 1e-12 && m.rho.abs() <= 0.75 * a + 1e-12,
                || format!("{} theta={theta}: {m:?}", g.label()),
            )?;
        }
    }
    Ok(format!("{} generators x 4 theta values", gens.len()))
}

fn c4_sampling() -> Outcome {
    let mut lines = Vec::new();
    for (f, theta) in [(Family::Phi2, 1.0), (Family::Phi4, 1.0), (Family::Phi2, 0.0)] {
        let c = copula(&builtin(f, None), theta);
        let m = closed_form_measures(&c).map_err(|e| e.to_string())?;
        let s = c.sample(20_000, 20_240_601).map_err(|e| e.to_string())?;
        let tau = empirical_tau(&s).map_err(|e| e.to_string())?;
        let rho = empirical_rho(&s).map_err(|e| e.to_string())?;
        let rho_tol = if theta == 0.0 { 0.03 } else { 0.04 };
        ensure((tau - m.tau).abs() <= 0.03, || format!("{f} theta={theta}: tau {tau} vs {}", m.tau))?;
        ensure((rho - m.rho).abs() <= rho_tol, || format!("{f} theta={theta}: rho {rho} vs {}", m.rho))?;
        lines.push(format!("{f}/{theta}: tau {tau:.4} rho {rho:.4}"));
    }
    Ok(lines.join(", "))
}

fn c5_theorem3() -> Outcome {
    for g in catalog(&[2, 4, 8]) {
        for theta in [0.5, 1.0] {
            let c = copula(&g, theta);
            let r = dependence_profile(&g, theta, DEFAULT_GRID, DEFAULT_TOL);
            let pqd = oracle_pqd(&c, 201);
            let tp2 = oracle_tp2(&c, 101);
            ensure(pqd.status == r.pqd.status, || format!("{} theta={theta}: PQD oracle {} vs {}", g.label(), pqd.status, r.pqd.status))?;
            ensure(tp2.status == r.tp2.status, || format!("{} theta={theta}: TP2 oracle {} vs {}", g.label(), tp2.status, r.tp2.status))?;
        }
    }
    let g = builtin(Family::Phi3, None);
    let c = copula(&g, 1.0);
    let r = dependence_profile(&g, 1.0, DEFAULT_GRID, DEFAULT_TOL);
    ensure(r.pfd.status == Status::Holds, || "phi3 PFD not holds".into())?;
    ensure(r.pqd.status == Status::Fails, || "phi3 PQD not fails".into())?;
    let Some(Witness::Pair(u, v)) = r.pqd.witness else {
        return Err("phi3 PQD witness missing".into());
    };
    let gap = c.cdf(u, v).map_err(|e| e.to_string())? - u * v;
    ensure(gap < 0.0, || format!("witness ({u}, {v}) does not violate C >= uv"))?;
    Ok(format!("phi3 PQD witness ({u}, {v}), C - uv = {gap:.3e}"))
}

fn c6_pfd() -> Outcome {
    type TestFunction = (&'static str, fn(f64) -> f64);
    let tests: [TestFunction; 4] = [
        ("t", |t| t),
        ("t^2", |t| t * t),
        ("sin(pi t)", |t| (PI * t).sin()),
        ("logistic step", |t| 1.0 / (1.0 + (-40.0 * (t - 0.5)).exp())),
    ];
    let mut worst = 0.0f64;
    for g in catalog(&[2, 4, 8]) {
        for theta in [0.0, 0.5, 1.0] {
            let c = copula(&g, theta);
            for (name, f) in tests {
                let cov = oracle_pfd(&c, f, 512).map_err(|e| e.to_string())?;
                let closed = pfd_closed_form(&c, f).map_err(|e| e.to_string())?;
                worst = worst.max((cov - closed).abs());
                ensure(cov >= -1e-10, || format!("{} theta={theta} g={name}: cov {cov}", g.label()))?;
                ensure((cov - closed).abs() <= 1e-6, || format!("{} theta={theta} g={name}: {cov} vs {closed}", g.label()))?;
            }
        }
    }
    Ok(format!("max abs diff {worst:.1e}"))
}

fn c7_symmetry() -> Outcome {
    for g in catalog(&[2, 4, 8]) {
        let (radial, joint) = symmetry_check(&g, DEFAULT_GRID, DEFAULT_TOL);
        let want_joint = if g.family() == Some(Family::Phi3) { Status::Holds } else { Status::Fails };
        ensure(radial.status == Status::Holds, || format!("{}: radial {}", g.label(), radial.status))?;
        ensure(joint.status == want_joint, || format!("{}: joint {}", g.label(), joint.status))?;
    }
    Ok("phi3 jointly symmetric, all radially symmetric".into())
}

fn tau_closed(f: Family, n: u32) -> Result<f64, String> {
    let g = builtin(f, Some(n));
    let c = Copula::new(g.clone(), 1.0).map_err(|_| {
        let (i, _) = generator_integrals(&g).expect("integrable");
        format!(
            "{} is not admissible (phi(0) = {}), so closed_form_measures is undefined; its integral gives tau {:.6}",
            g.label(),
            g.phi(0.0),
            8.0 * i * i
        )
    })?;
    closed_form_measures(&c).map(|m| m.tau).map_err(|e| e.to_string())
}

fn c8_convergence() -> Outcome {
    let mut problems = Vec::new();
    for n in 1..=10 {
        let formula = tau_phi5(n, 1.0f64);
        match tau_closed(Family::Phi5, n) {
            Ok(t) if (t - formula).abs() <= 1e-10 => {}
            Ok(t) => problems.push(format!("n={n}: closed form {t} vs formula {formula}")),
            Err(e) => problems.push(format!("n={n}: formula {formula:.6} but {e}")),
        }
    }
    let t100 = tau_phi5(100, 1.0f64);
    if t100 < 0.49 {
        problems.push(format!("tau5 at n=100 is {t100}"));
    }
    let taus: Vec<f64> = (2..=32).map(|n| tau_closed(Family::Phi6, n)).collect::<Result<_, _>>()?;
    if !taus.windows(2).all(|w| w[0] < w[1]) {
        problems.push("tau6 not strictly increasing".into());
    }
    if taus.iter().any(|&t| t < 2.0 / 9.0 - 1e-12) {
        problems.push("tau6 below 2/9".into());
    }
    if taus[1..].iter().any(|&t| t <= 32.0 / PI.powi(4)) {
        problems.push("tau6 not above 32/pi^4 for n >= 3".into());
    }
    if taus[30] < 0.45 {
        problems.push(format!("tau6 at n=32 is {}", taus[30]));
    }
    if problems.is_empty() {
        Ok(format!("tau5(100) = {t100:.6}, tau6(32) = {:.6}", taus[30]))
    } else {
        Err(problems.join("; "))
    }
}

fn c9_validity() -> Outcome {
    let mut rng = SplitMix64::new(9);
    let xs501: Vec<f64> = (0..501).map(|i| i as f64 / 500.0).collect();
    let xs201: Vec<f64> = (0..201).map(|i| i as f64 / 200.0).collect();
    let gens = catalog(&[2, 4, 8]);
    for g in &gens {
        for theta in [-1.0, 1.0] {
            let c = copula(g, theta);
            for _ in 0..100_000 {
                let (a, b, p, q) = (rng.next_f64(), rng.next_f64(), rng.next_f64(), rng.next_f64());
                let vol = c.rectangle_volume(a.min(b), a.max(b), p.min(q), p.max(q)).map_err(|e| e.to_string())?;
                ensure(vol >= -1e-12, || format!("{} theta={theta}: volume {vol}", g.label()))?;
            }
            let off: Vec<f64> = xs501.iter().copied().filter(|&x| !g.is_kink(x)).collect();
            for &u in &off {
                for &v in &off {
                    let d = c.density(u, v).map_err(|e| e.to_string())?;
                    ensure(d >= -1e-12, || format!("{} theta={theta}: density {d} at ({u}, {v})", g.label()))?;
                }
            }
            let rule = TensorRule::composite(512, &g.breakpoints()).map_err(|e| e.to_string())?;
            let mass = integrate_tensor(&|u, v| c.density(u, v).unwrap_or(f64::NAN), &rule, &rule);
            ensure((mass - 1.0).abs() <= 1e-9, || format!("{} theta={theta}: mass {mass}", g.label()))?;
            for &u in &xs201 {
                for &v in &xs201 {
                    let val = c.cdf(u, v).map_err(|e| e.to_string())?;
                    ensure(
                        val >= (u + v - 1.0).max(0.0) - 1e-15 && val <= u.min(v) + 1e-15,
                        || format!("{} theta={theta}: Frechet bounds at ({u}, {v})", g.label()),
                    )?;
                }
            }
        }
    }
    Ok(format!("{} generators x 2 theta values", gens.len()))
}

fn run_sample(threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_copula-forge"))
        .args(["sample", "--seed", "42", "--n", "1000"])
        .env("COPULA_FORGE_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("sample exited with {}", out.status))?;
    Ok(out.stdout)
}

fn quadrature_bits(threads: usize) -> Result<Vec<u64>, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    pool.install(|| {
        let mut bits = Vec::new();
        for g in catalog(&[4]) {
            let m = quadrature_measures(&copula(&g, 0.7), 256).map_err(|e| e.to_string())?;
            bits.extend([m.sigma.to_bits(), m.tau.to_bits(), m.rho.to_bits()]);
        }
        Ok(bits)
    })
}

fn c10_determinism() -> Outcome {
    let first = run_sample("1")?;
    let second = run_sample("4")?;
    ensure(first == second, || "sample output differs between runs".into())?;
    ensure(first.starts_with(b"u,v\n") && first.iter().filter(|&&b| b == b'\n').count() == 1001, || {
        "unexpected CSV shape".into()
    })?;
    let one = quadrature_bits(1)?;
    let four = quadrature_bits(4)?;
    ensure(one == four, || "quadrature differs between 1 and 4 threads".into())?;
    Ok(format!("{} CSV bytes identical, {} quadrature values bit-identical", first.len(), one.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 10] = [
        ("table reproduction (closed form)", c1_table, Some(Duration::from_secs(1))),
        ("quadrature oracle agreement", c2_oracle, Some(Duration::from_secs(30))),
        ("measure bounds", c3_bounds, None),
        ("sampling consistency", c4_sampling, Some(Duration::from_secs(10))),
        ("positive dependence cross-validation", c5_theorem3, None),
        ("PFD covariance closed form", c6_pfd, None),
        ("symmetry classification", c7_symmetry, None),
        ("convergence sequences", c8_convergence, None),
        ("copula validity suite", c9_validity, Some(Duration::from_secs(60))),
        ("determinism", c10_determinism, None),
    ];
    let mut failed = 0;
    for (i, (title, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if elapsed > *limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => {
                failed += 1;
                ("FAIL", d.clone())
            }
        };
        println!("criterion {:>2} {tag} [{elapsed:.2?}] {title}: {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
