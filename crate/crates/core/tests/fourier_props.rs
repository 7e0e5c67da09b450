use std::f64::consts::PI;

use measure_lab::fixtures::{all_fixtures, fixture, Fixture};
use measure_lab::fourier::{nu_hat_at_beta_power, nu_hat_depth, psi_hat_depths};
use measure_lab::{atoms, depth_cloud, nu_hat, nu_hat_initial, psi_hat, BetaInt};
use num_complex::Complex64;
use proptest::prelude::*;

fn fixtures() -> Vec<Fixture> {
    all_fixtures().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn symmetry_and_size(i in 0usize..5, t in -10.0f64..10.0) {
        let f = &fixtures()[i];
        let (a, p, pd) = (&f.automaton, f.pisot().unwrap(), f.perron().unwrap());
        let zero = nu_hat(a, &p, &pd, 0.0, 1e-8);
        prop_assert!((zero.value() - Complex64::new(1.0, 0.0)).norm() <= zero.bound + 1e-12);
        let v = nu_hat(a, &p, &pd, t, 1e-8);
        let w = nu_hat(a, &p, &pd, -t, 1e-8);
        prop_assert!((v.value() - w.value().conj()).norm() <= 1e-12);
        prop_assert!(v.abs <= 1.0 + v.bound);
        let vi = nu_hat_initial(a, &p, &pd, t, 1e-8).unwrap();
        prop_assert!(vi.abs <= 1.0 + vi.bound + 1e-9);
    }

    #[test]
    fn truncation_is_stable(i in 0usize..5, t in -10.0f64..10.0) {
        let f = &fixtures()[i];
        let (a, p, pd) = (&f.automaton, f.pisot().unwrap(), f.perron().unwrap());
        let v = nu_hat(a, &p, &pd, t, 1e-6);
        let fine = nu_hat_depth(a, &p, &pd, t, 2 * v.tail.max(1));
        prop_assert!((v.value() - fine.value()).norm() <= v.bound);
    }

    #[test]
    fn tolerances_agree(i in 0usize..5, t in -10.0f64..10.0) {
        let f = &fixtures()[i];
        let (a, p, pd) = (&f.automaton, f.pisot().unwrap(), f.perron().unwrap());
        let coarse = nu_hat(a, &p, &pd, t, 1e-6);
        let fine = nu_hat(a, &p, &pd, t, 1e-10);
        prop_assert!((coarse.value() - fine.value()).norm() <= 1.1e-6);
    }

    #[test]
    fn psi_symmetry_and_stability(i in 0usize..5, m0 in -3i64..=3, m1 in -3i64..=3) {
        let f = &fixtures()[i];
        let (a, p, pd) = (&f.automaton, f.pisot().unwrap(), f.perron().unwrap());
        let c: Vec<i64> = [m0, m1][..p.degree()].to_vec();
        let z = BetaInt::from_i64s(&c);
        let v = psi_hat(a, &p, &pd, &z, 1e-8).unwrap();
        let neg = psi_hat(a, &p, &pd, &-&z, 1e-8).unwrap();
        prop_assert!((v.value() - neg.value().conj()).norm() <= v.bound + neg.bound);
        prop_assert!(v.abs <= 1.0 + v.bound);
        let doubled = psi_hat_depths(a, &p, &pd, &z, 2 * v.head, 2 * v.tail).unwrap();
        prop_assert!((v.value() - doubled.value()).norm() <= v.bound + doubled.bound);
    }
}

#[test]
fn psi_is_the_limit_along_beta_powers() {
    let k = 25;
    for f in fixtures() {
        let (a, p, pd) = (&f.automaton, f.pisot().unwrap(), f.perron().unwrap());
        let lip = 2.0 * PI * a.max_abs_label() as f64;
        for c in [[1, 0], [0, 1], [2, -1], [-1, 3]] {
            let z = BetaInt::from_i64s(&c[..p.degree()]);
            let psi = psi_hat(a, &p, &pd, &z, 1e-9).unwrap();
            let nu = nu_hat_at_beta_power(a, &p, &pd, &z, k, 1e-9).unwrap();
            // Head factors j ≥ k are present in ψ̂ only.
            let missing: f64 = (2..=p.degree())
                .map(|q| {
                    let zq = p.embed(&z, q).unwrap().to_c64().norm();
                    let bq = p.conjugate_abs_upper(q);
                    lip * zq * bq.powi(k as i32) / (1.0 - bq)
                })
                .sum();
            let d = (psi.value() - nu.value()).norm();
            assert!(
                d <= psi.bound + nu.bound + missing + 1e-12,
                "{} {c:?}: {d}",
                f.name
            );
        }
    }
}

#[test]
fn integer_base_psi_equals_nu() {
    let f = fixture("fullshift4").unwrap();
    let (a, p, pd) = (&f.automaton, f.pisot().unwrap(), f.perron().unwrap());
    for m in -5i64..=5 {
        let psi = psi_hat(a, &p, &pd, &BetaInt::from_i64s(&[m]), 1e-8).unwrap();
        let nu = nu_hat(a, &p, &pd, m as f64, 1e-8);
        assert_eq!(psi.value(), nu.value(), "m={m}");
    }
}

#[test]
fn quadrature_agrees_with_cloud() {
    for f in fixtures() {
        let (a, p, pd) = (&f.automaton, f.pisot().unwrap(), f.perron().unwrap());
        let n = if a.alphabet().len() > 3 { 8 } else { 12 };
        let cloud = depth_cloud(a, &p, &pd, n).unwrap();
        for t in [-7.3, -1.0, 0.25, 2.5, 9.9] {
            let v = nu_hat(a, &p, &pd, t, 1e-10);
            let (q, radius) = cloud.fourier(t);
            assert!(
                (v.value() - q).norm() <= radius + 1e-10 + v.bound,
                "{} t={t}",
                f.name
            );
        }
    }
}

#[test]
fn atomic_transform_is_almost_periodic() {
    let f = fixture("example1-7edge").unwrap();
    let (a, p, pd) = (&f.automaton, f.pisot().unwrap(), f.perron().unwrap());
    let at = atoms(a, &p, &pd).unwrap().unwrap();
    let mut t = -9.5;
    for _ in 0..20 {
        let v = nu_hat(a, &p, &pd, t, 1e-10);
        let exact: Complex64 = at
            .iter()
            .map(|x| Complex64::from_polar(x.mass, -2.0 * PI * t * x.decimal))
            .sum();
        assert!((v.value() - exact).norm() <= v.bound + 1e-10, "t={t}");
        t += 0.97;
    }
}
