#![allow(dead_code)]

use measure_lab::automaton::Edge;
use measure_lab::LabeledAutomaton;
use proptest::prelude::*;

pub const GOLDEN: [i64; 3] = [-1, -1, 1];
pub const TRIBONACCI: [i64; 4] = [-1, -1, -1, 1];
/// Smallest Pisot number, `x³ - x - 1`.
pub const PLASTIC: [i64; 4] = [-1, -1, 0, 1];

/// Automaton from `(from, to, label)` triples; duplicates are dropped.
pub fn build(n: usize, mut triples: Vec<(usize, usize, i64)>) -> LabeledAutomaton {
    triples.sort_unstable();
    triples.dedup();
    let mut alphabet: Vec<i64> = triples.iter().map(|t| t.2).collect();
    alphabet.sort_unstable();
    alphabet.dedup();
    let edges = triples
        .into_iter()
        .map(|(from, to, label)| Edge { from, to, label })
        .collect();
    let states = (0..n).map(|i| format!("s{i}")).collect();
    LabeledAutomaton::new(states, alphabet, edges, vec![0], (0..n).collect()).unwrap()
}

/// Random automaton with at most `max_states` states and labels in
/// `-2..=2`, not necessarily connected.
pub fn any_automaton(max_states: usize) -> impl Strategy<Value = LabeledAutomaton> {
    (1..=max_states).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, -2i64..=2), 1..=3 * n).prop_map(move |t| build(n, t))
    })
}

/// Random primitive automaton: a Hamiltonian cycle and a loop at state 0
/// guarantee primitivity, extra random edges vary the structure.
pub fn primitive_automaton(max_states: usize) -> impl Strategy<Value = LabeledAutomaton> {
    (1..=max_states).prop_flat_map(|n| {
        (
            prop::collection::vec(-2i64..=2, n + 1),
            prop::collection::vec((0..n, 0..n, -2i64..=2), 0..=2 * n),
        )
            .prop_map(move |(cycle, extra)| {
                let mut t: Vec<(usize, usize, i64)> =
                    (0..n).map(|i| (i, (i + 1) % n, cycle[i])).collect();
                t.push((0, 0, cycle[n]));
                t.extend(extra);
                build(n, t)
            })
    })
}

/// All words of length `n` over `alphabet`.
pub fn all_words(alphabet: &[i64], n: usize) -> Vec<Vec<i64>> {
    let mut words = vec![Vec::new()];
    for _ in 0..n {
        words = words
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&a| {
                    let mut x = w.clone();
                    x.push(a);
                    x
                })
            })
            .collect();
    }
    words
}
