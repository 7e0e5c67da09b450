//! Fourier transforms of the push-forward measures as infinite products of
//! weighted transition matrices, and their limits along `β`-power sequences.
//!
//! With `W(t) = λ⁻¹ Σ_a e(-at) M_a` and `e(x) = exp(2πix)`,
//! `ν̂(t) = v_Lᵀ W(t/β) W(t/β²) ⋯ v_R`.
//!
//! Truncation bounds use entrywise positivity: `|W(s) x| ≤ W(0)|x|` and
//! `|W(s) - W(0)| ≤ 2πA|s| W(0)` entrywise, with `A = max |a|`, together with
//! `W(0) v_R = v_R` and `v_Lᵀ W(0) = v_Lᵀ`. Dropping the factors after the
//! `N`-th then costs at most `2πA|t|β^{-N}/(β-1)`, for `ν̂` and `ν̂_I` alike.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::{upper_f64, BetaInt, PisotNumber};
use crate::automaton::LabeledAutomaton;
use crate::parry::{initial_row, PerronData};
use crate::{Error, Result};

/// Default truncation tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

/// A Fourier value with a rigorous error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FourierValue {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub bound: f64,
    /// Number of head factors `W(frac(zβʲ))` used (`J + 1`), zero for `ν̂`.
    pub head: usize,
    /// Number of tail factors `W(tβ⁻ⁿ)` used (`N`).
    pub tail: usize,
}

impl FourierValue {
    fn exact_one() -> Self {
        FourierValue {
            re: 1.0,
            im: 0.0,
            abs: 1.0,
            bound: 0.0,
            head: 0,
            tail: 0,
        }
    }

    fn new(v: Complex64, bound: f64, head: usize, tail: usize) -> Self {
        FourierValue {
            re: v.re,
            im: v.im,
            abs: v.norm(),
            bound,
            head,
            tail,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// `W(t)` as a row-vector operator over the edge list.
pub struct Weights<'a> {
    a: &'a LabeledAutomaton,
    lambda: f64,
    max_label: f64,
}

impl<'a> Weights<'a> {
    pub fn new(a: &'a LabeledAutomaton, pd: &PerronData) -> Self {
        Weights {
            a,
            lambda: pd.lambda,
            max_label: a.max_abs_label() as f64,
        }
    }

    /// `row · W(t)`.
    pub fn apply(&self, row: &[Complex64], t: f64) -> Vec<Complex64> {
        let mut next = vec![Complex64::new(0.0, 0.0); row.len()];
        // Phases per label, computed once per factor.
        let phase =
            |label: i64| Complex64::from_polar(1.0 / self.lambda, -2.0 * PI * (label as f64) * t);
        let mut cache: Vec<(i64, Complex64)> = Vec::with_capacity(self.a.alphabet().len());
        for e in self.a.edges() {
            let w = match cache.iter().find(|(l, _)| *l == e.label) {
                Some(&(_, w)) => w,
                None => {
                    let w = phase(e.label);
                    cache.push((e.label, w));
                    w
                }
            };
            next[e.to] += row[e.from] * w;
        }
        next
    }

    /// `2πA`.
    fn lipschitz(&self) -> f64 {
        2.0 * PI * self.max_label
    }
}

fn complex_row(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

fn pair(row: &[Complex64], v: &[f64]) -> Complex64 {
    row.iter().zip(v).map(|(a, &b)| a * b).sum()
}

/// Floating-point and eigendata slack for a product of `factors` steps.
fn slack(a: &LabeledAutomaton, pd: &PerronData, factors: usize) -> f64 {
    let min_r = pd.v_r.iter().cloned().fold(f64::INFINITY, f64::min);
    let sum_l: f64 = pd.v_l.iter().sum();
    let eig = (pd.residual_right + pd.lambda_error * 2.0) / pd.lambda * sum_l / min_r;
    let fl = 8.0 * f64::EPSILON * (a.edges().len() as f64 + 4.0);
    (factors as f64 + 2.0) * (eig + fl)
}

/// Smallest `N ≥ 0` with `2πA|t|β^{-N}/(β-1) ≤ target`.
fn tail_depth(lip: f64, t: f64, beta: f64, target: f64) -> usize {
    let c = lip * t.abs() / (beta - 1.0);
    if c <= target {
        return 0;
    }
    ((c / target).ln() / beta.ln()).ceil().max(0.0) as usize
}

fn tail_bound(lip: f64, t: f64, beta: f64, n: usize) -> f64 {
    lip * t.abs() * beta.powi(-(n as i32)) / (beta - 1.0)
}

/// `row · W(t/β) ⋯ W(t/β^N) · v_R`.
fn tail_product(
    w: &Weights,
    mut row: Vec<Complex64>,
    t: f64,
    beta: f64,
    n: usize,
    v_r: &[f64],
) -> Complex64 {
    let mut s = t;
    for _ in 0..n {
        s /= beta;
        row = w.apply(&row, s);
    }
    pair(&row, v_r)
}

fn nu_hat_from_row(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    row: Vec<Complex64>,
    t: f64,
    n: usize,
) -> FourierValue {
    let beta = p.beta_f64();
    let w = Weights::new(a, pd);
    let v = tail_product(&w, row, t, beta, n, &pd.v_r);
    let bound = tail_bound(w.lipschitz(), t, beta, n) + slack(a, pd, n);
    FourierValue::new(v, bound, 0, n)
}

/// `ν̂(t)` truncated so that the tail bound is at most `tol`.
pub fn nu_hat(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    t: f64,
    tol: f64,
) -> FourierValue {
    if t == 0.0 {
        return FourierValue::exact_one();
    }
    let n = tail_depth(Weights::new(a, pd).lipschitz(), t, p.beta_f64(), tol);
    nu_hat_from_row(a, p, pd, complex_row(&pd.v_l), t, n)
}

/// `ν̂(t)` with exactly `n` factors.
pub fn nu_hat_depth(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    t: f64,
    n: usize,
) -> FourierValue {
    if t == 0.0 {
        return FourierValue::exact_one();
    }
    nu_hat_from_row(a, p, pd, complex_row(&pd.v_l), t, n)
}

/// `ν̂_I(t)`, started from the normalised indicator row of `I`.
pub fn nu_hat_initial(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    t: f64,
    tol: f64,
) -> Result<FourierValue> {
    let v_i = initial_row(a)?;
    if t == 0.0 {
        return Ok(FourierValue::exact_one());
    }
    let norm: f64 = v_i.iter().zip(&pd.v_r).map(|(x, y)| x * y).sum();
    let row: Vec<Complex64> = v_i.iter().map(|&x| Complex64::new(x / norm, 0.0)).collect();
    let n = tail_depth(Weights::new(a, pd).lipschitz(), t, p.beta_f64(), tol);
    Ok(nu_hat_from_row(a, p, pd, row, t, n))
}

/// Bound on `Σ_{j>J} dist(zβʲ, ℤ)` times `2πA`, from `|z_q| |β_q|^j`.
struct HeadBound {
    lip: f64,
    /// `(|z_q|, |β_q|)` upper bounds per conjugate.
    terms: Vec<(f64, f64)>,
}

impl HeadBound {
    fn new(p: &PisotNumber, z: &BetaInt, lip: f64) -> Result<Self> {
        let terms = (2..=p.degree())
            .map(|q| Ok((upper_f64(&p.embed(z, q)?.abs()), p.conjugate_abs_upper(q))))
            .collect::<Result<Vec<_>>>()?;
        Ok(HeadBound { lip, terms })
    }

    /// Bound after keeping heads `j = 0..=J`.
    fn after(&self, j: usize) -> f64 {
        self.terms
            .iter()
            .map(|&(zq, bq)| {
                if bq >= 1.0 {
                    f64::INFINITY
                } else {
                    self.lip * zq * bq.powi(j as i32 + 1) / (1.0 - bq)
                }
            })
            .sum()
    }

    fn depth(&self, target: f64) -> usize {
        (0..100_000)
            .find(|&j| self.after(j) <= target)
            .unwrap_or(100_000)
    }
}

/// `v_Lᵀ W(ε_J) ⋯ W(ε_0)` with `ε_j = frac(zβʲ)`, skipping leading `W(0)`
/// factors (exact, as `v_Lᵀ W(0) = v_Lᵀ`). Returns the row and the
/// accumulated error from the fractional-part bounds.
fn head_product(
    w: &Weights,
    pd: &PerronData,
    fracs: &[crate::algebraic::FracPart],
) -> (Vec<Complex64>, f64) {
    let mut row = complex_row(&pd.v_l);
    let mut pristine = true;
    let mut err = 0.0;
    for f in fracs.iter().rev() {
        if pristine && f.exact {
            continue;
        }
        pristine = false;
        row = w.apply(&row, f.centered());
        err += w.lipschitz() * f.error;
    }
    (row, err)
}

/// `ψ̂(z) = lim_k ν̂(zβᵏ)` with head and tail depths chosen for `tol`.
pub fn psi_hat(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    z: &BetaInt,
    tol: f64,
) -> Result<FourierValue> {
    if z.is_zero() {
        return Ok(FourierValue::exact_one());
    }
    let w = Weights::new(a, pd);
    let head = HeadBound::new(p, z, w.lipschitz())?;
    // For integer β there is no head error, and the tail then matches
    // `nu_hat` at the same tolerance factor for factor.
    let (j, tail_target) = if p.degree() == 1 {
        (0, tol)
    } else {
        (head.depth(tol / 2.0), tol / 2.0)
    };
    let zr = p.to_f64(z);
    let n = tail_depth(w.lipschitz(), zr, p.beta_f64(), tail_target);
    psi_hat_depths(a, p, pd, z, j, n)
}

/// `ψ̂(z)` with head factors `j = 0..=J` and `N` tail factors.
pub fn psi_hat_depths(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    z: &BetaInt,
    j: usize,
    n: usize,
) -> Result<FourierValue> {
    if z.is_zero() {
        return Ok(FourierValue::exact_one());
    }
    let w = Weights::new(a, pd);
    let head = HeadBound::new(p, z, w.lipschitz())?;
    let fracs = p.frac_beta_powers(z, j as u64)?;
    let (row, frac_err) = head_product(&w, pd, &fracs);
    let zr = p.to_f64(z);
    let beta = p.beta_f64();
    let v = tail_product(&w, row, zr, beta, n, &pd.v_r);
    let bound =
        head.after(j) + frac_err + tail_bound(w.lipschitz(), zr, beta, n) + slack(a, pd, j + 1 + n);
    Ok(FourierValue::new(v, bound, j + 1, n))
}

/// `ν̂(zβᵏ)` evaluated without floating-point `βᵏ`: the first `k` factors
/// use the exact fractional parts of `zβʲ`, `j < k`.
pub fn nu_hat_at_beta_power(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    z: &BetaInt,
    k: usize,
    tol: f64,
) -> Result<FourierValue> {
    if z.is_zero() {
        return Ok(FourierValue::exact_one());
    }
    let w = Weights::new(a, pd);
    let mut row = complex_row(&pd.v_l);
    let mut err = 0.0;
    if k > 0 {
        let fracs = p.frac_beta_powers(z, k as u64 - 1)?;
        for f in fracs.iter().rev() {
            row = w.apply(&row, f.centered());
            err += w.lipschitz() * f.error;
        }
    }
    let zr = p.to_f64(z);
    let beta = p.beta_f64();
    let n = tail_depth(w.lipschitz(), zr, beta, tol);
    let v = tail_product(&w, row, zr, beta, n, &pd.v_r);
    let bound = err + tail_bound(w.lipschitz(), zr, beta, n) + slack(a, pd, k + n);
    Ok(FourierValue::new(v, bound, k, n))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanEntry {
    pub z: Vec<i64>,
    #[serde(flatten)]
    pub value: FourierValue,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub height: i64,
    pub tol: f64,
    pub max_abs: f64,
    pub argmax: Option<Vec<i64>>,
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    pub fn max_entry(&self) -> Option<&ScanEntry> {
        let z = self.argmax.as_ref()?;
        self.entries.iter().find(|e| &e.z == z)
    }
}

/// Nonzero coordinate vectors with entries in `[-h, h]`, one of each pair
/// `±z` (first nonzero coordinate positive), in lexicographic order.
pub fn scan_lattice(r: usize, h: i64) -> Vec<Vec<i64>> {
    let side = (2 * h + 1) as usize;
    let total = side.pow(r as u32);
    (0..total)
        .map(|mut i| {
            let mut z = vec![0i64; r];
            for slot in z.iter_mut().rev() {
                *slot = (i % side) as i64 - h;
                i /= side;
            }
            z
        })
        .filter(|z| z.iter().find(|&&m| m != 0).is_some_and(|&m| m > 0))
        .collect()
}

/// `ψ̂` over all `z` of height at most `h` (coordinates `m₀..m_{r-1}`),
/// skipping `-z` since `ψ̂(-z)` is the conjugate of `ψ̂(z)`.
pub fn rajchman_scan(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
    h: i64,
    tol: f64,
) -> Result<ScanReport> {
    let zs = scan_lattice(p.degree(), h);
    let entries = zs
        .par_iter()
        .map(|z| {
            let value = psi_hat(a, p, pd, &BetaInt::from_i64s(z), tol)?;
            Ok(ScanEntry {
                z: z.clone(),
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // Entries are in lexicographic order; keep the first maximum.
    let mut best: Option<&ScanEntry> = None;
    for e in &entries {
        if best.is_none_or(|b| e.value.abs > b.value.abs) {
            best = Some(e);
        }
    }
    Ok(ScanReport {
        height: h,
        tol,
        max_abs: best.map_or(0.0, |b| b.value.abs),
        argmax: best.map(|b| b.z.clone()),
        entries,
    })
}

/// Reject scans of height zero.
pub fn check_height(h: i64) -> Result<()> {
    if h < 1 {
        return Err(Error::Schema(format!(
            "scan height must be at least 1, got {h}"
        )));
    }
    Ok(())
}
