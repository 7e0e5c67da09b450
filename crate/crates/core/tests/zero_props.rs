mod common;

use common::{GOLDEN, PLASTIC, TRIBONACCI};
use measure_lab::fixtures::all_fixtures;
use measure_lab::{
    build_zero_automaton, finite_image_test, make_pisot, perron, verify_zero_language, FiniteImage,
    QBeta, Trim,
};
use proptest::prelude::*;

#[test]
fn language_exact_for_fixture_bases_and_digits() {
    for f in all_fixtures().unwrap() {
        let p = f.pisot().unwrap();
        let za = build_zero_automaton(&p, f.automaton.alphabet(), Trim::Both).unwrap();
        let n = if f.automaton.alphabet().len() <= 3 {
            12
        } else {
            9
        };
        let rep = verify_zero_language(&za, &p, n).unwrap();
        assert!(rep.sound && rep.complete, "{}", f.name);
    }
}

#[test]
fn language_exact_for_other_bases() {
    let cases: [(&[i64], &[i64], usize); 4] = [
        (&GOLDEN, &[-2, -1, 0, 1, 2], 7),
        (&TRIBONACCI, &[-1, 0, 1], 10),
        (&PLASTIC, &[-1, 0, 1], 10),
        (&[-1, -3, 1], &[-2, -1, 0, 1, 2], 7),
    ];
    for (m, digits, n) in cases {
        let p = make_pisot(m, 128).unwrap();
        let za = build_zero_automaton(&p, digits, Trim::Both).unwrap();
        let rep = verify_zero_language(&za, &p, n).unwrap();
        assert!(rep.sound && rep.complete, "{m:?} {digits:?}");
    }
}

fn digit_set() -> impl Strategy<Value = Vec<i64>> {
    (1i64..=2, prop::collection::vec(-2i64..=2, 0..3)).prop_map(|(m, extra)| {
        let mut d = vec![-m, 0, m];
        d.extend(extra);
        d.sort_unstable();
        d.dedup();
        d
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn structure(which in 0usize..3, digits in digit_set()) {
        let m = [&GOLDEN[..], &TRIBONACCI[..], &PLASTIC[..]][which];
        let p = make_pisot(m, 128).unwrap();
        let za = build_zero_automaton(&p, &digits, Trim::Both).unwrap();
        let a = &za.automaton;
        // y = βx - a on every edge.
        for e in a.edges() {
            let y = &p.mul_beta(&za.values[e.from]) - &p.from_int(e.label);
            prop_assert_eq!(&y, &za.values[e.to]);
        }
        // Every state lies within both bound families.
        let big = digits.iter().map(|d| d.abs()).max().unwrap() as f64;
        let beta = p.beta_f64();
        for v in &za.values {
            prop_assert!(p.to_f64(v).abs() <= big / (beta - 1.0) + 1e-9);
            for q in 2..=p.degree() {
                let bq = p.conjugate_abs_upper(q);
                let vq = p.embed(v, q).unwrap().to_c64().norm();
                prop_assert!(vq <= big / (1.0 - bq) + 1e-9);
            }
        }
        // Value map is the identity on states.
        match finite_image_test(&za.core().automaton, &p).unwrap() {
            FiniteImage::Finite { c, .. } => {
                let core = za.core();
                for (cv, v) in c.iter().zip(&core.values) {
                    prop_assert_eq!(cv, &QBeta::from(v));
                }
            }
            FiniteImage::Perfect { .. } => prop_assert!(false, "zero automaton has finite image"),
        }
        // Growth rate is at most the alphabet size.
        let core = za.core();
        let pd = perron(&core.automaton, 1e-12).unwrap();
        prop_assert!(pd.lambda <= digits.len() as f64 + 1e-9);
    }

    #[test]
    fn trim_modes_nest(which in 0usize..3, digits in digit_set()) {
        let m = [&GOLDEN[..], &TRIBONACCI[..], &PLASTIC[..]][which];
        let p = make_pisot(m, 128).unwrap();
        let none = build_zero_automaton(&p, &digits, Trim::None).unwrap();
        let acc = build_zero_automaton(&p, &digits, Trim::Accessible).unwrap();
        let both = build_zero_automaton(&p, &digits, Trim::Both).unwrap();
        prop_assert_eq!(&none.values, &acc.values);
        for v in &both.values {
            prop_assert!(acc.values.contains(v));
        }
    }
}
