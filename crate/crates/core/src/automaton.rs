//! Labelled automata over integer alphabets.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default length cap for [`enumerate_paths`].
pub const ENUMERATION_CAP: usize = 14;

/// Longest word length inspected by [`ambiguity_profile`].
pub const AMBIGUITY_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaSpec {
    pub minpoly: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub label: i64,
}

/// On-disk JSON form of an automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaSpec>,
    pub alphabet: Vec<i64>,
    pub states: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub initial: Vec<String>,
    #[serde(default)]
    pub terminal: Vec<String>,
    /// Free-form per-state notes (e.g. decimal values of zero-automaton
    /// states).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub annotations: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: i64,
}

/// A validated automaton. States are indexed in document order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledAutomaton {
    states: Vec<String>,
    alphabet: Vec<i64>,
    edges: Vec<Edge>,
    initial: Vec<usize>,
    terminal: Vec<usize>,
    beta: Option<Vec<i64>>,
    annotations: BTreeMap<String, String>,
    /// Out-edges per state, sorted by (label, target).
    out: Vec<Vec<Edge>>,
}

pub fn parse_automaton(text: &str) -> Result<LabeledAutomaton> {
    let doc: AutomatonDocument =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    LabeledAutomaton::from_document(&doc)
}

impl LabeledAutomaton {
    pub fn from_document(doc: &AutomatonDocument) -> Result<Self> {
        let index: HashMap<&str, usize> = doc
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if index.len() != doc.states.len() {
            return Err(Error::Schema("duplicate state identifier".into()));
        }
        let lookup = |s: &String| {
            index
                .get(s.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownState(s.clone()))
        };
        let edges = doc
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    from: lookup(&e.from)?,
                    to: lookup(&e.to)?,
                    label: e.label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let initial = doc.initial.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        let terminal = doc
            .terminal
            .iter()
            .map(lookup)
            .collect::<Result<Vec<_>>>()?;
        let mut a = LabeledAutomaton::new(
            doc.states.clone(),
            doc.alphabet.clone(),
            edges,
            initial,
            terminal,
        )?;
        a.beta = doc.beta.as_ref().map(|b| b.minpoly.clone());
        a.annotations = doc.annotations.clone();
        Ok(a)
    }

    /// Build from indexed parts. The alphabet is kept as a sorted set.
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<i64>,
        edges: Vec<Edge>,
        initial: Vec<usize>,
        terminal: Vec<usize>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Schema("automaton has no states".into()));
        }
        let mut alpha = alphabet;
        alpha.sort_unstable();
        alpha.dedup();
        let n = states.len();
        let mut seen = HashSet::new();
        for e in &edges {
            for v in [e.from, e.to] {
                if v >= n {
                    return Err(Error::UnknownState(format!("#{v}")));
                }
            }
            if alpha.binary_search(&e.label).is_err() {
                return Err(Error::LabelOutsideAlphabet(e.label));
            }
            if !seen.insert(*e) {
                return Err(Error::DuplicateEdge {
                    from: states[e.from].clone(),
                    to: states[e.to].clone(),
                    label: e.label,
                });
            }
        }
        if let Some(&v) = initial.iter().chain(&terminal).find(|&&v| v >= n) {
            return Err(Error::UnknownState(format!("#{v}")));
        }
        let mut out = vec![Vec::new(); n];
        for e in &edges {
            out[e.from].push(*e);
        }
        for o in &mut out {
            o.sort_by_key(|e| (e.label, e.to));
        }
        let dedup = |mut v: Vec<usize>| {
            let mut seen = HashSet::new();
            v.retain(|x| seen.insert(*x));
            v
        };
        Ok(LabeledAutomaton {
            states,
            alphabet: alpha,
            edges,
            initial: dedup(initial),
            terminal: dedup(terminal),
            beta: None,
            annotations: BTreeMap::new(),
            out,
        })
    }

    pub fn with_beta(mut self, minpoly: Option<Vec<i64>>) -> Self {
        self.beta = minpoly;
        self
    }

    pub fn with_annotations(mut self, notes: BTreeMap<String, String>) -> Self {
        self.annotations = notes;
        self
    }

    pub fn to_document(&self) -> AutomatonDocument {
        let name = |i: usize| self.states[i].clone();
        AutomatonDocument {
            beta: self.beta.as_ref().map(|m| BetaSpec { minpoly: m.clone() }),
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    from: name(e.from),
                    to: name(e.to),
                    label: e.label,
                })
                .collect(),
            initial: self.initial.iter().map(|&i| name(i)).collect(),
            terminal: self.terminal.iter().map(|&i| name(i)).collect(),
            annotations: self.annotations.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document())
            .expect("automaton documents always serialize")
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &[i64] {
        &self.alphabet
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[Edge] {
        &self.out[v]
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn terminal(&self) -> &[usize] {
        &self.terminal
    }

    pub fn beta_minpoly(&self) -> Option<&[i64]> {
        self.beta.as_deref()
    }

    pub fn annotations(&self) -> &BTreeMap<String, String> {
        &self.annotations
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    /// Largest absolute label over the alphabet.
    pub fn max_abs_label(&self) -> i64 {
        self.alphabet.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    pub fn with_initial(mut self, initial: Vec<usize>) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_terminal(mut self, terminal: Vec<usize>) -> Self {
        self.terminal = terminal;
        self
    }

    /// Sub-automaton on `keep` (kept in the given order); edges leaving the
    /// set are dropped, as are initial/terminal states outside it.
    pub fn restrict(&self, keep: &[usize]) -> LabeledAutomaton {
        let map: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let states = keep.iter().map(|&v| self.states[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                Some(Edge {
                    from: *map.get(&e.from)?,
                    to: *map.get(&e.to)?,
                    label: e.label,
                })
            })
            .collect();
        let pick = |set: &[usize]| set.iter().filter_map(|v| map.get(v).copied()).collect();
        let mut a = LabeledAutomaton::new(
            states,
            self.alphabet.clone(),
            edges,
            pick(&self.initial),
            pick(&self.terminal),
        )
        .expect("restriction of a valid automaton is valid");
        a.beta = self.beta.clone();
        a.annotations = self
            .annotations
            .iter()
            .filter(|(k, _)| keep.iter().any(|&v| &self.states[v] == *k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        a
    }

    /// States reachable from `from` (including `from`), in index order.
    pub fn reachable_from(&self, from: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n_states()];
        let mut stack: Vec<usize> = from.to_vec();
        for &v in from {
            seen[v] = true;
        }
        while let Some(v) = stack.pop() {
            for e in &self.out[v] {
                if !seen[e.to] {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        (0..self.n_states()).filter(|&v| seen[v]).collect()
    }

    /// States from which `to` is reachable, in index order.
    pub fn coreachable_to(&self, to: &[usize]) -> Vec<usize> {
        let mut rev = vec![Vec::new(); self.n_states()];
        for e in &self.edges {
            rev[e.to].push(e.from);
        }
        let mut seen = vec![false; self.n_states()];
        let mut stack: Vec<usize> = to.to_vec();
        for &v in to {
            seen[v] = true;
        }
        while let Some(v) = stack.pop() {
            for &u in &rev[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        (0..self.n_states()).filter(|&v| seen[v]).collect()
    }

    /// Strongly connected components (Tarjan), each sorted, listed by
    /// smallest member.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let n = self.n_states();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            // Iterative DFS: (vertex, next out-edge position).
            let mut work = vec![(root, 0usize)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = work.last_mut() {
                if *pos < self.out[v].len() {
                    let w = self.out[v][*pos].to;
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    work.pop();
                    if let Some(&(u, _)) = work.last() {
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps.sort_by_key(|c| c[0]);
        comps
    }
}

/// Per-label 0/1 matrices and their sum, in state order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrices {
    /// `(label, M_label)` in alphabet order.
    pub per_label: Vec<(i64, Vec<Vec<u8>>)>,
    pub total: Vec<Vec<u64>>,
}

impl TransitionMatrices {
    pub fn label_matrix(&self, label: i64) -> Option<&Vec<Vec<u8>>> {
        self.per_label
            .iter()
            .find(|(a, _)| *a == label)
            .map(|(_, m)| m)
    }

    pub fn total_f64(&self) -> Vec<Vec<f64>> {
        self.total
            .iter()
            .map(|row| row.iter().map(|&x| x as f64).collect())
            .collect()
    }
}

pub fn transition_matrices(a: &LabeledAutomaton) -> TransitionMatrices {
    let n = a.n_states();
    let mut per_label: Vec<(i64, Vec<Vec<u8>>)> = a
        .alphabet
        .iter()
        .map(|&l| (l, vec![vec![0u8; n]; n]))
        .collect();
    let mut total = vec![vec![0u64; n]; n];
    for e in &a.edges {
        let k = a.alphabet.binary_search(&e.label).expect("validated label");
        per_label[k].1[e.from][e.to] = 1;
        total[e.from][e.to] += 1;
    }
    TransitionMatrices { per_label, total }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Primitivity {
    pub strongly_connected: bool,
    /// Gcd of cycle lengths; `None` when not strongly connected or acyclic.
    pub period: Option<u64>,
    pub primitive: bool,
}

pub fn primitivity_check(a: &LabeledAutomaton) -> Primitivity {
    let strongly_connected = a.sccs().len() == 1;
    if !strongly_connected || a.edges.is_empty() {
        return Primitivity {
            strongly_connected,
            period: None,
            primitive: false,
        };
    }
    // BFS levels from state 0; every edge u→v gives a closed-walk
    // length difference level(u) + 1 - level(v).
    let n = a.n_states();
    let mut level = vec![u64::MAX; n];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for e in a.out_edges(v) {
            if level[e.to] == u64::MAX {
                level[e.to] = level[v] + 1;
                queue.push_back(e.to);
            }
        }
    }
    let mut g = 0u64;
    for e in &a.edges {
        let d = (level[e.from] + 1).abs_diff(level[e.to]);
        g = g.gcd(&d);
    }
    Primitivity {
        strongly_connected,
        period: Some(g),
        primitive: g == 1,
    }
}

/// Number of paths of length `n`: from `I` to `T` when restricted, over
/// all paths otherwise. Label-ambiguous words count once per run.
pub fn count_words(a: &LabeledAutomaton, n: usize, use_initial_terminal: bool) -> BigUint {
    let m = a.n_states();
    let (from, to): (Vec<usize>, Vec<usize>) = if use_initial_terminal {
        (a.initial.clone(), a.terminal.clone())
    } else {
        ((0..m).collect(), (0..m).collect())
    };
    let mut row = vec![BigUint::zero(); m];
    for &v in &from {
        row[v] += 1u32;
    }
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); m];
        for e in &a.edges {
            if !row[e.from].is_zero() {
                next[e.to] += &row[e.from];
            }
        }
        row = next;
    }
    to.iter().map(|&v| &row[v]).sum()
}

/// All label words of paths of length `n` from `from_set` to `to_set`, one
/// entry per path. Order: start state, then label at each step, then target.
pub fn enumerate_paths(
    a: &LabeledAutomaton,
    n: usize,
    from_set: &[usize],
    to_set: &[usize],
) -> Result<Vec<Vec<i64>>> {
    enumerate_paths_capped(a, n, from_set, to_set, ENUMERATION_CAP)
}

pub fn enumerate_paths_capped(
    a: &LabeledAutomaton,
    n: usize,
    from_set: &[usize],
    to_set: &[usize],
    cap: usize,
) -> Result<Vec<Vec<i64>>> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: format!("path length {n}"),
            cap,
        });
    }
    let is_target: Vec<bool> = (0..a.n_states()).map(|v| to_set.contains(&v)).collect();
    let mut starts: Vec<usize> = from_set.to_vec();
    starts.sort_unstable();
    starts.dedup();
    let chunks: Vec<Vec<Vec<i64>>> = starts
        .par_iter()
        .map(|&s| {
            let mut out = Vec::new();
            let mut word = Vec::with_capacity(n);
            dfs(a, s, n, &is_target, &mut word, &mut out);
            out
        })
        .collect();
    Ok(chunks.concat())
}

fn dfs(
    a: &LabeledAutomaton,
    v: usize,
    left: usize,
    target: &[bool],
    word: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if left == 0 {
        if target[v] {
            out.push(word.clone());
        }
        return;
    }
    for e in a.out_edges(v) {
        word.push(e.label);
        dfs(a, e.to, left - 1, target, word, out);
        word.pop();
    }
}

/// Per length `1..=max_len`: (paths, distinct words, words with more than
/// one run), over paths from `I` to `T` (all states when a set is empty).
pub fn ambiguity_profile(
    a: &LabeledAutomaton,
    max_len: usize,
) -> Result<Vec<(usize, usize, usize)>> {
    let all: Vec<usize> = (0..a.n_states()).collect();
    let from = if a.initial.is_empty() {
        &all
    } else {
        &a.initial
    };
    let to = if a.terminal.is_empty() {
        &all
    } else {
        &a.terminal
    };
    (1..=max_len)
        .map(|n| {
            let paths = enumerate_paths(a, n, from, to)?;
            let mut runs: HashMap<&[i64], usize> = HashMap::new();
            for w in &paths {
                *runs.entry(w.as_slice()).or_default() += 1;
            }
            let ambiguous = runs.values().filter(|&&c| c > 1).count();
            Ok((paths.len(), runs.len(), ambiguous))
        })
        .collect()
}

/// Whether no two paths share a start state and label word.
pub fn is_deterministic(a: &LabeledAutomaton) -> bool {
    a.out
        .iter()
        .all(|o| o.windows(2).all(|w| w[0].label != w[1].label))
}
