//! Perron–Frobenius data and the Parry (maximal-entropy) measure.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automaton::{primitivity_check, LabeledAutomaton};
use crate::{Error, Result};

/// Default eigen tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Dominant eigenvalue and positive eigenvectors of the total matrix `M`,
/// normalised so that `max v_R = 1` and `v_L · v_R = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerronData {
    pub lambda: f64,
    /// Width of the Collatz–Wielandt bracket around `lambda`.
    pub lambda_error: f64,
    pub v_l: Vec<f64>,
    pub v_r: Vec<f64>,
    /// `max |(M v_R - λ v_R)_i|`.
    pub residual_right: f64,
    /// `max |(v_Lᵀ M - λ v_Lᵀ)_i|`.
    pub residual_left: f64,
}

/// Nonnegative matrix as aggregated `(row, col, value)` entries.
struct Sparse {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

/// Largest size for the dense inverse-iteration polish.
const DENSE_POLISH_MAX: usize = 200;

impl Sparse {
    fn from_automaton(a: &LabeledAutomaton) -> Self {
        let mut pairs: Vec<(usize, usize)> = a.edges().iter().map(|e| (e.from, e.to)).collect();
        pairs.sort_unstable();
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (i, j) in pairs {
            match entries.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += 1.0,
                _ => entries.push((i, j, 1.0)),
            }
        }
        Sparse {
            n: a.n_states(),
            entries,
        }
    }

    fn transpose(&self) -> Sparse {
        Sparse {
            n: self.n,
            entries: self.entries.iter().map(|&(i, j, v)| (j, i, v)).collect(),
        }
    }

    fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for &(i, j, v) in &self.entries {
            y[i] += v * x[j];
        }
        y
    }

    fn dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for &(i, j, v) in &self.entries {
            m[i][j] += v;
        }
        m
    }
}

/// Collatz–Wielandt bracket `[min (Mx)_i/x_i, max (Mx)_i/x_i]` for `x > 0`.
fn cw_bracket(m: &Sparse, x: &[f64]) -> (f64, f64) {
    let y = m.mul(x);
    y.iter()
        .zip(x)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), (a, b)| {
            let r = a / b;
            (lo.min(r), hi.max(r))
        })
}

fn normalize_max(x: &mut [f64]) {
    let m = x.iter().cloned().fold(0.0f64, f64::max);
    for v in x.iter_mut() {
        *v /= m;
    }
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c] == 0.0 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            if f != 0.0 {
                for j in c..n {
                    a[i][j] -= f * a[c][j];
                }
                b[i] -= f * b[c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Positive Perron vector of a primitive nonnegative matrix.
fn perron_vector(m: &Sparse, tol: f64) -> (f64, f64, Vec<f64>) {
    let n = m.n;
    // Power iteration on M + I (same eigenvectors, aperiodic). Small
    // matrices stop early and are polished by inverse iteration.
    let target = if n <= DENSE_POLISH_MAX {
        1e-6
    } else {
        tol * 1e-3
    };
    let mut x = vec![1.0; n];
    let mut bracket = cw_bracket(m, &x);
    for _ in 0..1_000_000 {
        let mx = m.mul(&x);
        x = mx.iter().zip(&x).map(|(a, b)| a + b).collect();
        normalize_max(&mut x);
        bracket = cw_bracket(m, &x);
        if bracket.1 - bracket.0 <= target * bracket.1 {
            break;
        }
    }
    if n <= DENSE_POLISH_MAX {
        let dense = m.dense();
        for _ in 0..8 {
            let sigma = 0.5 * (bracket.0 + bracket.1) * (1.0 + 1e-10);
            let mut a = dense.clone();
            for (i, row) in a.iter_mut().enumerate() {
                row[i] -= sigma;
            }
            let Some(mut y) = solve(a, x.clone()) else {
                break;
            };
            let s = y.iter().sum::<f64>().signum();
            y.iter_mut().for_each(|v| *v *= s);
            if y.iter().any(|&v| v <= 0.0) {
                break;
            }
            normalize_max(&mut y);
            let nb = cw_bracket(m, &y);
            if nb.1 - nb.0 > bracket.1 - bracket.0 {
                break;
            }
            x = y;
            bracket = nb;
            if bracket.1 - bracket.0 <= tol * bracket.1 * 1e-3 {
                break;
            }
        }
    }
    let lambda = 0.5 * (bracket.0 + bracket.1);
    let err = 0.5 * (bracket.1 - bracket.0) + 4.0 * f64::EPSILON * lambda;
    (lambda, err, x)
}

fn residual(m: &Sparse, x: &[f64], lambda: f64) -> f64 {
    m.mul(x)
        .iter()
        .zip(x)
        .map(|(y, x)| (y - lambda * x).abs())
        .fold(0.0, f64::max)
}

/// Perron data of the total transition matrix.
pub fn perron(a: &LabeledAutomaton, tol: f64) -> Result<PerronData> {
    if !primitivity_check(a).primitive {
        return Err(Error::NotPrimitive);
    }
    let m = Sparse::from_automaton(a);
    let (lambda, err_r, v_r) = perron_vector(&m, tol);
    let mt = m.transpose();
    let (lambda_l, err_l, mut v_l) = perron_vector(&mt, tol);
    let pairing: f64 = v_l.iter().zip(&v_r).map(|(a, b)| a * b).sum();
    v_l.iter_mut().for_each(|v| *v /= pairing);
    Ok(PerronData {
        lambda,
        lambda_error: err_r.max(err_l).max((lambda - lambda_l).abs()),
        residual_right: residual(&m, &v_r, lambda),
        residual_left: residual(&mt, &v_l, lambda),
        v_l,
        v_r,
    })
}

impl PerronData {
    /// Stationary start distribution `π = v_L ∘ v_R`.
    pub fn start_distribution(&self) -> Vec<f64> {
        start_distribution(self)
    }

    /// Markov transition probability of one edge.
    pub fn edge_weight(&self, from: usize, to: usize) -> f64 {
        self.v_r[to] / (self.lambda * self.v_r[from])
    }
}

pub fn start_distribution(pd: &PerronData) -> Vec<f64> {
    pd.v_l.iter().zip(&pd.v_r).map(|(a, b)| a * b).collect()
}

/// Row vector times `M_a / λ`.
pub(crate) fn step_row(a: &LabeledAutomaton, row: &[f64], label: i64, lambda: f64) -> Vec<f64> {
    let mut next = vec![0.0; row.len()];
    for e in a.edges() {
        if e.label == label && row[e.from] != 0.0 {
            next[e.to] += row[e.from] / lambda;
        }
    }
    next
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `λ^{-k} v_Lᵀ M_{ε₁}⋯M_{ε_k} v_R`; zero for non-admissible words.
pub fn cylinder_measure(pd: &PerronData, a: &LabeledAutomaton, word: &[i64]) -> f64 {
    let mut row = pd.v_l.clone();
    for &l in word {
        row = step_row(a, &row, l, pd.lambda);
    }
    dot(&row, &pd.v_r)
}

/// Indicator vector of the initial set.
pub(crate) fn initial_row(a: &LabeledAutomaton) -> Result<Vec<f64>> {
    if a.initial().is_empty() {
        return Err(Error::EmptyInitialSet);
    }
    let mut v = vec![0.0; a.n_states()];
    for &i in a.initial() {
        v[i] = 1.0;
    }
    Ok(v)
}

/// `λ^{-k} v_Iᵀ M_{ε₁}⋯M_{ε_k} v_R / (v_Iᵀ v_R)`.
pub fn cylinder_measure_initial(
    pd: &PerronData,
    a: &LabeledAutomaton,
    word: &[i64],
) -> Result<f64> {
    let v_i = initial_row(a)?;
    let norm = dot(&v_i, &pd.v_r);
    let mut row = v_i;
    for &l in word {
        row = step_row(a, &row, l, pd.lambda);
    }
    Ok(dot(&row, &pd.v_r) / norm)
}

/// A sampled run: `states` has one more entry than `labels`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub states: Vec<usize>,
    pub labels: Vec<i64>,
}

/// Sampler for the Parry Markov chain; cheap to reuse for many runs.
pub struct Sampler<'a> {
    a: &'a LabeledAutomaton,
    start: WeightedIndex<f64>,
    steps: Vec<WeightedIndex<f64>>,
}

impl<'a> Sampler<'a> {
    pub fn new(pd: &PerronData, a: &'a LabeledAutomaton) -> Result<Self> {
        let start = WeightedIndex::new(start_distribution(pd)).map_err(|_| Error::NotPrimitive)?;
        let steps = (0..a.n_states())
            .map(|v| {
                let w: Vec<f64> = a
                    .out_edges(v)
                    .iter()
                    .map(|e| pd.edge_weight(v, e.to))
                    .collect();
                WeightedIndex::new(w).map_err(|_| Error::DeadState(a.states()[v].clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sampler { a, start, steps })
    }

    pub fn start_state(&self, rng: &mut ChaCha8Rng) -> usize {
        self.start.sample(rng)
    }

    /// Extend from `v`, calling `f` with each edge label.
    pub fn walk(
        &self,
        mut v: usize,
        length: usize,
        rng: &mut ChaCha8Rng,
        mut f: impl FnMut(usize, i64),
    ) {
        for _ in 0..length {
            let e = self.a.out_edges(v)[self.steps[v].sample(rng)];
            f(e.to, e.label);
            v = e.to;
        }
    }

    pub fn run(&self, length: usize, rng: &mut ChaCha8Rng) -> Run {
        let s = self.start_state(rng);
        let mut states = Vec::with_capacity(length + 1);
        let mut labels = Vec::with_capacity(length);
        states.push(s);
        self.walk(s, length, rng, |v, l| {
            states.push(v);
            labels.push(l);
        });
        Run { states, labels }
    }
}

/// One run of the stationary Parry chain, deterministic in `seed`.
pub fn sample_run(pd: &PerronData, a: &LabeledAutomaton, length: usize, seed: u64) -> Result<Run> {
    let sampler = Sampler::new(pd, a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sampler.run(length, &mut rng))
}
