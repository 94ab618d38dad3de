use copula_forge::copula::Copula;
use copula_forge::generator::{Family, Generator};
use copula_forge::properties::{
    dependence_profile, oracle_pfd, pfd_closed_form, ordering_check, Status, DEFAULT_GRID, DEFAULT_TOL,
};

fn catalog() -> Vec<Generator<f64>> {
    Family::ALL
        .iter()
        .map(|&f| Generator::builtin(f, f.min_parameter().map(|m| m.max(4))).unwrap())
        .collect()
}

fn step(t: f64) -> f64 {
    1.0 / (1.0 + (-40.0 * (t - 0.5)).exp())
}

#[test]
fn pfd_covariance_matches_closed_form() {
    type TestFunction = (&'static str, fn(f64) -> f64);
    let tests: [TestFunction; 4] = [
        ("t", |t| t),
        ("t^2", |t| t * t),
        ("sin", |t| (std::f64::consts::PI * t).sin()),
        ("step", step),
    ];
    for g in catalog() {
        for theta in [0.0, 0.5, 1.0] {
            let c = Copula::new(g.clone(), theta).unwrap();
            for (name, f) in tests {
                let cov = oracle_pfd(&c, f, 512).unwrap();
                let closed = pfd_closed_form(&c, f).unwrap();
                assert!(cov >= -1e-10, "{} {name} {cov}", g.label());
                assert!((cov - closed).abs() <= 1e-6, "{} {name} {cov} vs {closed}", g.label());
            }
        }
    }
}

#[test]
fn implication_chain_on_catalog() {
    for g in catalog() {
        for theta in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            let r = dependence_profile(&g, theta, DEFAULT_GRID, DEFAULT_TOL);
            assert!(r.chain_consistent(), "{} theta={theta}", g.label());
            assert_eq!(r.negative_dependence, theta < 0.0);
        }
    }
}

#[test]
fn catalog_orderings() {
    for g in catalog() {
        let (conc, si) = ordering_check(&g, DEFAULT_GRID, DEFAULT_TOL);
        if g.family() == Some(Family::Phi3) {
            assert_eq!(conc.status, Status::Fails);
            assert_eq!(si.status, Status::Inconclusive);
        } else {
            assert_eq!(conc.status, Status::Holds, "{}", g.label());
            assert_eq!(si.status, Status::Holds, "{}", g.label());
        }
        assert_ne!(si.status, Status::Fails);
    }
}
