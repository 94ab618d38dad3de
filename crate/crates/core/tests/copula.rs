use copula_forge::copula::Copula;
use copula_forge::generator::{Family, Generator};
use copula_forge::numerics::{integrate_tensor, SplitMix64, TensorRule};
use proptest::prelude::*;

fn catalog() -> Vec<Generator<f64>> {
    Family::ALL
        .iter()
        .map(|&f| Generator::builtin(f, f.min_parameter().map(|m| m.max(4))).unwrap())
        .collect()
}

fn grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| i as f64 / (points - 1) as f64).collect()
}

#[test]
fn frechet_bounds_and_exchangeability() {
    let xs = grid(201);
    for g in catalog() {
        for theta in [-1.0, -0.5, 0.5, 1.0] {
            let c = Copula::new(g.clone(), theta).unwrap();
            for &u in &xs {
                for &v in &xs {
                    let val = c.cdf(u, v).unwrap();
                    assert!(val >= (u + v - 1.0).max(0.0) - 1e-15 && val <= u.min(v) + 1e-15, "{} {u} {v}", g.label());
                    assert_eq!(val, c.cdf(v, u).unwrap());
                }
            }
        }
    }
}

#[test]
fn density_nonnegative_and_normalised() {
    let xs = grid(501);
    for g in catalog() {
        for theta in [-1.0, 1.0] {
            let c = Copula::new(g.clone(), theta).unwrap();
            for &u in xs.iter().filter(|&&u| !g.is_kink(u)) {
                for &v in xs.iter().filter(|&&v| !g.is_kink(v)) {
                    assert!(c.density(u, v).unwrap() >= -1e-12, "{} {u} {v}", g.label());
                }
            }
            let rule = TensorRule::composite(256, &g.breakpoints()).unwrap();
            let mass = integrate_tensor(&|u, v| c.density(u, v).unwrap(), &rule, &rule);
            assert!((mass - 1.0).abs() <= 1e-9, "{} mass {mass}", g.label());
        }
    }
}

#[test]
fn conditional_is_the_partial_derivative() {
    let h = 1e-6;
    for g in catalog() {
        let c = Copula::new(g.clone(), 0.8).unwrap();
        for &u in grid(41).iter().filter(|&&u| u < 1.0 && !g.is_kink(u) && !g.is_kink(u + h)) {
            if g.kinks().iter().any(|&k| u < k && k < u + h) {
                continue;
            }
            for &v in &grid(41) {
                let fd = (c.cdf(u + h, v).unwrap() - c.cdf(u, v).unwrap()) / h;
                assert!((fd - c.conditional_cdf(u, v).unwrap()).abs() <= 1e-5, "{} {u} {v}", g.label());
            }
        }
    }
}

#[test]
fn random_rectangles_have_nonnegative_mass() {
    let mut rng = SplitMix64::new(99);
    for g in catalog() {
        for theta in [-1.0, 1.0] {
            let c = Copula::new(g.clone(), theta).unwrap();
            for _ in 0..20_000 {
                let (a, b) = (rng.next_f64(), rng.next_f64());
                let (p, q) = (rng.next_f64(), rng.next_f64());
                let vol = c.rectangle_volume(a.min(b), a.max(b), p.min(q), p.max(q)).unwrap();
                assert!(vol >= -1e-12, "{} {vol}", g.label());
            }
            assert!((c.rectangle_volume(0.0, 1.0, 0.0, 1.0).unwrap() - 1.0).abs() <= 1e-15);
        }
    }
}

proptest! {
    #[test]
    fn rectangle_from_origin_is_the_cdf(u in 0.0f64..=1.0, v in 0.0f64..=1.0, theta in -1.0f64..=1.0, k in 0usize..6) {
        let g = catalog().swap_remove(k);
        let c = Copula::new(g, theta).unwrap();
        prop_assert!((c.rectangle_volume(0.0, u, 0.0, v).unwrap() - c.cdf(u, v).unwrap()).abs() <= 1e-15);
    }

    #[test]
    fn quantile_inverts_the_conditional(u in 0.0f64..=1.0, w in 0.0f64..=1.0, theta in -1.0f64..=1.0, k in 0usize..6) {
        let g = catalog().swap_remove(k);
        prop_assume!(!g.is_kink(u));
        let c = Copula::new(g, theta).unwrap();
        let v = c.conditional_quantile(u, w, 1e-12).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!((c.conditional_cdf(u, v).unwrap() - w).abs() <= 1e-10);
    }

    #[test]
    fn samples_stay_in_the_square(seed in any::<u64>(), theta in -1.0f64..=1.0, k in 0usize..6) {
        let c = Copula::new(catalog().swap_remove(k), theta).unwrap();
        let s = c.sample(64, seed).unwrap();
        prop_assert_eq!(s.pairs.len(), 64);
        prop_assert!(s.pairs.iter().all(|&(u, v)| (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v)));
        let again = c.sample(64, seed).unwrap();
        prop_assert!(s.pairs.iter().zip(&again.pairs).all(|(a, b)| a.0.to_bits() == b.0.to_bits() && a.1.to_bits() == b.1.to_bits()));
    }
}
