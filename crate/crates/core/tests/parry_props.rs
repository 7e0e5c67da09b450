mod common;

use common::{all_words, primitive_automaton};
use measure_lab::fixtures::{all_fixtures, fibonacci};
use measure_lab::parry::Sampler;
use measure_lab::{
    cylinder_measure, cylinder_measure_initial, perron, sample_run, start_distribution,
    LabeledAutomaton, PerronData,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Probability of a label word under the Markov chain started from `π`.
fn chain_probability(pd: &PerronData, a: &LabeledAutomaton, word: &[i64]) -> f64 {
    let mut row = start_distribution(pd);
    for &l in word {
        let mut next = vec![0.0; row.len()];
        for e in a.edges().iter().filter(|e| e.label == l) {
            next[e.to] += row[e.from] * pd.edge_weight(e.from, e.to);
        }
        row = next;
    }
    row.iter().sum()
}

fn concat(u: &[i64], w: &[i64]) -> Vec<i64> {
    u.iter().chain(w).copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kolmogorov_and_shift_invariance(a in primitive_automaton(5), k in 0usize..=4) {
        let pd = perron(&a, 1e-12).unwrap();
        for w in all_words(a.alphabet(), k) {
            let m = cylinder_measure(&pd, &a, &w);
            let right: f64 = a.alphabet().iter().map(|&l| cylinder_measure(&pd, &a, &concat(&w, &[l]))).sum();
            let left: f64 = a.alphabet().iter().map(|&l| cylinder_measure(&pd, &a, &concat(&[l], &w))).sum();
            prop_assert!((right - m).abs() <= 1e-12, "{:?}: {} vs {}", w, right, m);
            prop_assert!((left - m).abs() <= 1e-12, "{:?}: {} vs {}", w, left, m);
        }
    }

    #[test]
    fn total_mass_is_one(a in primitive_automaton(4), k in 0usize..=6) {
        let pd = perron(&a, 1e-12).unwrap();
        let s: f64 = all_words(a.alphabet(), k).iter().map(|w| cylinder_measure(&pd, &a, w)).sum();
        prop_assert!((s - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn transition_weights_are_stochastic(a in primitive_automaton(5)) {
        let pd = perron(&a, 1e-12).unwrap();
        for v in 0..a.n_states() {
            let s: f64 = a.out_edges(v).iter().map(|e| pd.edge_weight(v, e.to)).sum();
            prop_assert!((s - 1.0).abs() <= 1e-11);
        }
        let pi = start_distribution(&pd);
        prop_assert!(pi.iter().all(|&x| x >= 0.0));
        prop_assert!((pi.iter().sum::<f64>() - 1.0).abs() <= 1e-11);
    }

    #[test]
    fn chain_reproduces_cylinders(a in primitive_automaton(4), k in 1usize..=4) {
        let pd = perron(&a, 1e-12).unwrap();
        for w in all_words(a.alphabet(), k) {
            let m = cylinder_measure(&pd, &a, &w);
            prop_assert!((chain_probability(&pd, &a, &w) - m).abs() <= 1e-11);
        }
    }

    #[test]
    fn sampled_runs_follow_edges(a in primitive_automaton(5), seed in any::<u64>()) {
        let pd = perron(&a, 1e-12).unwrap();
        let run = sample_run(&pd, &a, 50, seed).unwrap();
        prop_assert_eq!(run.states.len(), 51);
        for (i, &l) in run.labels.iter().enumerate() {
            let (u, v) = (run.states[i], run.states[i + 1]);
            prop_assert!(a.out_edges(u).iter().any(|e| e.to == v && e.label == l));
        }
        prop_assert_eq!(run, sample_run(&pd, &a, 50, seed).unwrap());
    }
}

/// `λ^{-(n+s)} v_Lᵀ M_u M^{n-k} M_w v_R` for `|u| = k`, `|w| = s`.
fn joint(pd: &PerronData, a: &LabeledAutomaton, u: &[i64], gap: usize, w: &[i64]) -> f64 {
    let mut row = pd.v_l.clone();
    let step = |row: &[f64], label: Option<i64>| {
        let mut next = vec![0.0; row.len()];
        for e in a
            .edges()
            .iter()
            .filter(|e| label.is_none_or(|l| l == e.label))
        {
            next[e.to] += row[e.from] / pd.lambda;
        }
        next
    };
    for &l in u {
        row = step(&row, Some(l));
    }
    for _ in 0..gap {
        row = step(&row, None);
    }
    for &l in w {
        row = step(&row, Some(l));
    }
    row.iter().zip(&pd.v_r).map(|(x, y)| x * y).sum()
}

#[test]
fn mixing_decays() {
    for f in all_fixtures().unwrap() {
        let a = &f.automaton;
        let pd = f.perron().unwrap();
        let alphabet = a.alphabet();
        let u = vec![alphabet[0], alphabet[alphabet.len() - 1]];
        let w = vec![alphabet[alphabet.len() / 2]];
        let target = cylinder_measure(&pd, a, &u) * cylinder_measure(&pd, a, &w);
        let err = |gap: usize| (joint(&pd, a, &u, gap, &w) - target).abs();
        // Worst error over a window, early versus late.
        let window = |from: usize| (from..from + 5).map(err).fold(0.0, f64::max);
        let (early, late) = (window(5), window(26));
        assert!(late <= 1e-5, "{}: {late}", f.name);
        assert!(late <= early * 0.1 + 1e-14, "{}: {early} -> {late}", f.name);
    }
}

#[test]
fn initial_measure_matches_count_ratio() {
    // Fraction of length-24 words from I that start with `w`.
    let a = fibonacci();
    let pd = perron(&a, 1e-12).unwrap();
    let count_from = |start: Vec<f64>, n: usize| -> Vec<f64> {
        let mut row = start;
        for _ in 0..n {
            let mut next = vec![0.0; row.len()];
            for e in a.edges() {
                next[e.to] += row[e.from];
            }
            row = next;
        }
        row
    };
    let total: f64 = count_from(vec![1.0, 0.0], 24).iter().sum();
    for w in [vec![0], vec![1], vec![0, 1], vec![1, 0, 0], vec![1, 1]] {
        let mut row = vec![1.0, 0.0];
        for &l in &w {
            let mut next = vec![0.0; 2];
            for e in a.edges().iter().filter(|e| e.label == l) {
                next[e.to] += row[e.from];
            }
            row = next;
        }
        let with_prefix: f64 = count_from(row, 24 - w.len()).iter().sum();
        let exact = cylinder_measure_initial(&pd, &a, &w).unwrap();
        assert!((with_prefix / total - exact).abs() < 1e-4, "{w:?}");
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((cylinder_measure_initial(&pd, &a, &[0]).unwrap() - 1.0 / phi).abs() < 1e-12);
}

#[test]
fn sampler_reuse_is_deterministic() {
    let a = fibonacci();
    let pd = perron(&a, 1e-12).unwrap();
    let s = Sampler::new(&pd, &a).unwrap();
    let mut r1 = ChaCha8Rng::seed_from_u64(3);
    let mut r2 = ChaCha8Rng::seed_from_u64(3);
    assert_eq!(s.run(100, &mut r1), s.run(100, &mut r2));
}
