//! Depth-`n` discretisations of the push-forward measure: weighted point
//! clouds with interval enclosures, CDF brackets and Monte-Carlo samples.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::PisotNumber;
use crate::automaton::LabeledAutomaton;
use crate::parry::{step_row, PerronData, Sampler};
use crate::{Error, Result};

/// Largest cloud `depth_cloud` will materialise.
pub const CLOUD_CAP: usize = 1_000_000;

/// Samples per independent RNG stream in `sample_values`.
const SAMPLE_CHUNK: usize = 4096;

/// Per-state `(min φ⁺, max φ⁺)` over infinite paths leaving that state.
pub fn value_bounds(a: &LabeledAutomaton, p: &PisotNumber, tol: f64) -> Result<Vec<(f64, f64)>> {
    for v in 0..a.n_states() {
        if a.out_edges(v).is_empty() {
            return Err(Error::DeadState(a.states()[v].clone()));
        }
    }
    let beta = p.beta_f64();
    let n = a.n_states();
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    let contraction = 1.0 / beta;
    loop {
        let mut change: f64 = 0.0;
        let mut nlo = vec![f64::INFINITY; n];
        let mut nhi = vec![f64::NEG_INFINITY; n];
        for e in a.edges() {
            let l = e.label as f64;
            nlo[e.from] = nlo[e.from].min((l + lo[e.to]) / beta);
            nhi[e.from] = nhi[e.from].max((l + hi[e.to]) / beta);
        }
        for v in 0..n {
            change = change
                .max((nlo[v] - lo[v]).abs())
                .max((nhi[v] - hi[v]).abs());
        }
        lo = nlo;
        hi = nhi;
        // Distance to the fixed point is at most change·c/(1-c).
        let err = change * contraction / (1.0 - contraction);
        if err <= tol {
            let pad = err
                + 4.0
                    * f64::EPSILON
                    * (1.0 + hi.iter().chain(&lo).fold(0.0f64, |m, x| m.max(x.abs())));
            return Ok(lo
                .iter()
                .zip(&hi)
                .map(|(l, h)| (l - pad, h + pad))
                .collect());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloudEntry {
    pub word: Vec<i64>,
    /// `Σ_{k≤n} ε_k β^{-k}`.
    pub value: f64,
    pub mass: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthCloud {
    pub depth: usize,
    /// Entries in lexicographic word order.
    pub entries: Vec<CloudEntry>,
    /// Per-state value bounds used for the enclosures.
    pub bounds: Vec<(f64, f64)>,
}

/// Shared state of a word-tree walk: `row = λ^{-k} v_Lᵀ M_w`.
struct Tree<'a> {
    a: &'a LabeledAutomaton,
    pd: &'a PerronData,
    bounds: &'a [(f64, f64)],
    beta_inv: f64,
}

#[derive(Clone)]
struct Node {
    word: Vec<i64>,
    row: Vec<f64>,
    value: f64,
    /// `β^{-k}`.
    scale: f64,
}

impl Tree<'_> {
    fn root(&self) -> Node {
        Node {
            word: Vec::new(),
            row: self.pd.v_l.clone(),
            value: 0.0,
            scale: 1.0,
        }
    }

    fn mass(&self, node: &Node) -> f64 {
        node.row.iter().zip(&self.pd.v_r).map(|(x, y)| x * y).sum()
    }

    /// Enclosure of `φ⁺` over the cylinder of `node`.
    fn enclosure(&self, node: &Node) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (v, &x) in node.row.iter().enumerate() {
            if x > 0.0 {
                lo = lo.min(self.bounds[v].0);
                hi = hi.max(self.bounds[v].1);
            }
        }
        (node.value + node.scale * lo, node.value + node.scale * hi)
    }

    /// Admissible children in label order.
    fn children(&self, node: &Node) -> Vec<Node> {
        let scale = node.scale * self.beta_inv;
        self.a
            .alphabet()
            .iter()
            .filter_map(|&l| {
                let row = step_row(self.a, &node.row, l, self.pd.lambda);
                row.iter().any(|&x| x > 0.0).then(|| {
                    let mut word = node.word.clone();
                    word.push(l);
                    Node {
                        word,
                        row,
                        value: node.value + l as f64 * scale,
                        scale,
                    }
                })
            })
            .collect()
    }

    fn leaves(
        &self,
        node: Node,
        depth: usize,
        out: &mut Vec<CloudEntry>,
        cap: usize,
    ) -> Result<()> {
        if node.word.len() == depth {
            if out.len() >= cap {
                return Err(Error::CapExceeded {
                    what: format!("depth-{depth} cloud"),
                    cap,
                });
            }
            let (lo, hi) = self.enclosure(&node);
            out.push(CloudEntry {
                mass: self.mass(&node),
                lo,
                hi,
                value: node.value,
                word: node.word,
            });
            return Ok(());
        }
        for child in self.children(&node) {
            self.leaves(child, depth, out, cap)?;
        }
        Ok(())
    }

    /// Nodes at `depth` (or all leaves if shallower), in order.
    fn frontier(&self, depth: usize) -> Vec<Node> {
        let mut level = vec![self.root()];
        for _ in 0..depth {
            level = level.iter().flat_map(|n| self.children(n)).collect();
        }
        level
    }
}

/// Split depth for parallel subtree walks.
fn split_depth(a: &LabeledAutomaton, depth: usize) -> usize {
    if a.alphabet().len() <= 1 {
        0
    } else {
        depth.min(2)
    }
}

/// One entry per admissible label word of length `n`.
pub fn depth_cloud(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    n: usize,
) -> Result<DepthCloud> {
    depth_cloud_capped(a, p, pd, n, CLOUD_CAP)
}

pub fn depth_cloud_capped(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    n: usize,
    cap: usize,
) -> Result<DepthCloud> {
    let bounds = value_bounds(a, p, 1e-13)?;
    let tree = Tree {
        a,
        pd,
        bounds: &bounds,
        beta_inv: 1.0 / p.beta_f64(),
    };
    let parts = tree
        .frontier(split_depth(a, n))
        .into_par_iter()
        .map(|node| {
            let mut out = Vec::new();
            tree.leaves(node, n, &mut out, cap).map(|_| out)
        })
        .collect::<Result<Vec<_>>>()?;
    let total: usize = parts.iter().map(Vec::len).sum();
    if total > cap {
        return Err(Error::CapExceeded {
            what: format!("depth-{n} cloud"),
            cap,
        });
    }
    let entries = parts.into_iter().flatten().collect();
    Ok(DepthCloud {
        depth: n,
        entries,
        bounds,
    })
}

impl DepthCloud {
    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.mass).sum()
    }

    pub fn min_lo(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.lo)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_hi(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.hi)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_width(&self) -> f64 {
        self.entries.iter().map(|e| e.hi - e.lo).fold(0.0, f64::max)
    }

    /// Mean and variance of the discretised measure.
    pub fn moments(&self) -> (f64, f64) {
        let m = self.total_mass();
        let mean = self.entries.iter().map(|e| e.mass * e.value).sum::<f64>() / m;
        let var = self
            .entries
            .iter()
            .map(|e| e.mass * (e.value - mean).powi(2))
            .sum::<f64>()
            / m;
        (mean, var)
    }

    /// Entries sorted by value, ties by mass.
    pub fn sorted_entries(&self) -> Vec<&CloudEntry> {
        let mut v: Vec<&CloudEntry> = self.entries.iter().collect();
        v.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.mass.total_cmp(&y.mass)));
        v
    }

    /// `Σ mass·e(-t·value)` with a bound on the distance to `ν̂(t)`
    /// (excluding the eigenvector error, which is far smaller).
    pub fn fourier(&self, t: f64) -> (Complex64, f64) {
        let mut s = Complex64::new(0.0, 0.0);
        let mut spread: f64 = 0.0;
        for e in &self.entries {
            s += Complex64::from_polar(e.mass, -2.0 * PI * t * e.value);
            spread = spread.max(e.value - e.lo).max(e.hi - e.value);
        }
        (s, 2.0 * PI * t.abs() * spread + 1e-9)
    }
}

/// `(lower, upper)` bracket for `ν((-∞, x])`.
pub fn cdf_bounds(cloud: &DepthCloud, x: f64) -> (f64, f64) {
    let mut lower = 0.0;
    let mut upper = 0.0;
    for e in &cloud.entries {
        if e.hi <= x {
            lower += e.mass;
        }
        if e.lo <= x {
            upper += e.mass;
        }
    }
    (lower, upper)
}

/// The same bracket as `cdf_bounds` on the depth-`n` cloud, computed by a
/// pruned walk so that deep clouds never need to be stored: a subtree whose
/// enclosure lies entirely on one side of `x` is counted in one step.
pub fn cdf_bounds_at_depth(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    n: usize,
    points: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let bounds = value_bounds(a, p, 1e-13)?;
    let tree = Tree {
        a,
        pd,
        bounds: &bounds,
        beta_inv: 1.0 / p.beta_f64(),
    };
    Ok(points
        .par_iter()
        .map(|&x| {
            let mut acc = (0.0, 0.0);
            pruned(&tree, tree.root(), n, x, &mut acc);
            acc
        })
        .collect())
}

fn pruned(tree: &Tree, node: Node, n: usize, x: f64, acc: &mut (f64, f64)) {
    let (lo, hi) = tree.enclosure(&node);
    if lo > x {
        return;
    }
    if hi <= x || node.word.len() == n {
        let m = tree.mass(&node);
        acc.1 += m;
        if hi <= x {
            acc.0 += m;
        }
        return;
    }
    for child in tree.children(&node) {
        pruned(tree, child, n, x, acc);
    }
}

/// `count` values `φ_depth⁺` of independent Parry runs, deterministic in
/// `seed` and independent of the thread count.
pub fn sample_values(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    count: usize,
    depth: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let sampler = Sampler::new(pd, a)?;
    let beta_inv = 1.0 / p.beta_f64();
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
            (0..len)
                .map(|_| {
                    let s = sampler.start_state(&mut rng);
                    let mut value = 0.0;
                    let mut scale = 1.0;
                    sampler.walk(s, depth, &mut rng, |_, l| {
                        scale *= beta_inv;
                        value += l as f64 * scale;
                    });
                    value
                })
                .collect()
        })
        .collect();
    Ok(parts.concat())
}

/// Fraction of `values` at most `x`.
pub fn empirical_cdf(values: &[f64], x: f64) -> f64 {
    values.iter().filter(|&&v| v <= x).count() as f64 / values.len() as f64
}
