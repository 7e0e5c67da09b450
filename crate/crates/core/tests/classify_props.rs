mod common;

use common::{primitive_automaton, GOLDEN, TRIBONACCI};
use measure_lab::classify::{qbeta_scale, scale_labels};
use measure_lab::fixtures::{example1_7edge, fixture};
use measure_lab::parry::Sampler;
use measure_lab::{
    atoms, build_zero_automaton, classify, finite_image_test, make_pisot, perron,
    start_distribution, ClassifyOptions, FiniteImage, PisotNumber, QBeta, Trim, VerdictKind,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(i: usize) -> PisotNumber {
    make_pisot([&GOLDEN[..], &TRIBONACCI[..]][i], 128).unwrap()
}

fn quick() -> ClassifyOptions {
    ClassifyOptions {
        scan_height: 1,
        tol: 1e-6,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn verdicts_are_pure(a in primitive_automaton(4), i in 0usize..2) {
        let p = field(i);
        let v = classify(&a, &p, &quick()).unwrap();
        let finite = matches!(finite_image_test(&a, &p).unwrap(), FiniteImage::Finite { .. });
        prop_assert_eq!(v.is_atomic(), finite);
        prop_assert_eq!(v.c_map.is_some(), finite);
        prop_assert_eq!(v.witness.is_some(), !finite);
        if let VerdictKind::Atomic { atoms } = &v.kind {
            prop_assert!(atoms.len() <= a.n_states());
            prop_assert!(atoms.iter().all(|x| x.mass > 0.0));
            prop_assert!((atoms.iter().map(|x| x.mass).sum::<f64>() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn witness_violates_edge_relation(a in primitive_automaton(4), i in 0usize..2) {
        let p = field(i);
        if let FiniteImage::Perfect { witness, .. } = finite_image_test(&a, &p).unwrap() {
            let lhs = &p.qmul_beta(&witness.source) - &QBeta::from_int(witness.label, p.degree());
            prop_assert_eq!(&lhs, &witness.expected);
            prop_assert!(a.out_edges(witness.from).iter().any(|e| e.to == witness.to && e.label == witness.label));
            prop_assert_ne!(&witness.expected, &witness.assigned);
        }
    }

    #[test]
    fn scaling_labels_scales_atoms(i in 0usize..2, s in prop::sample::select(vec![-3i64, -2, -1, 2, 3])) {
        let p = field(i);
        let za = build_zero_automaton(&p, &[-1, 0, 1], Trim::Both).unwrap().core();
        let mut cases = vec![za.automaton.clone()];
        if i == 0 {
            // Atomic only for golden β.
            cases.push(example1_7edge().unwrap());
        }
        for a in cases {
            let pd = perron(&a, 1e-12).unwrap();
            let base = atoms(&a, &p, &pd).unwrap().unwrap();
            let scaled_a = scale_labels(&a, s).unwrap();
            let spd = perron(&scaled_a, 1e-12).unwrap();
            let scaled = atoms(&scaled_a, &p, &spd).unwrap().unwrap();
            prop_assert_eq!(base.len(), scaled.len());
            for at in &base {
                let target = qbeta_scale(&at.value, s);
                let m = scaled.iter().find(|x| x.value == target);
                prop_assert!(m.is_some());
                prop_assert!((m.unwrap().mass - at.mass).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn zero_automata_atoms_are_states() {
    for m in [&GOLDEN[..], &TRIBONACCI[..]] {
        let p = make_pisot(m, 128).unwrap();
        for digits in [vec![-1, 0, 1], vec![-2, -1, 0, 1, 2]] {
            let za = build_zero_automaton(&p, &digits, Trim::Both)
                .unwrap()
                .core();
            let pd = perron(&za.automaton, 1e-12).unwrap();
            let pi = start_distribution(&pd);
            let at = atoms(&za.automaton, &p, &pd).unwrap().unwrap();
            assert_eq!(at.len(), za.automaton.n_states());
            let zero = at
                .iter()
                .find(|x| x.value == QBeta::zero(p.degree()))
                .unwrap();
            let s0 = za.state_of(&p.zero()).unwrap();
            assert!((zero.mass - pi[s0]).abs() < 1e-14);
        }
    }
}

#[test]
fn monte_carlo_matches_atom_masses() {
    let f = fixture("example1-7edge").unwrap();
    let (a, p, pd) = (&f.automaton, f.pisot().unwrap(), f.perron().unwrap());
    let at = atoms(a, &p, &pd).unwrap().unwrap();
    let sampler = Sampler::new(&pd, a).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let n = 100_000;
    let mut counts = vec![0usize; at.len()];
    for _ in 0..n {
        let v = sampler.start_state(&mut rng);
        counts[at.iter().position(|x| x.states.contains(&v)).unwrap()] += 1;
    }
    for (x, c) in at.iter().zip(counts) {
        let sigma = (x.mass * (1.0 - x.mass) / n as f64).sqrt();
        assert!((c as f64 / n as f64 - x.mass).abs() <= 3.0 * sigma, "{x:?}");
    }
}
