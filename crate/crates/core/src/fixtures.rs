//! Bundled example automata and their reference checks.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebraic::{make_pisot, BetaInt, PisotNumber, QBeta};
use crate::automaton::{Edge, LabeledAutomaton};
use crate::classify::{atoms, classify, ClassifyOptions, Evidence};
use crate::distribution::{cdf_bounds_at_depth, value_bounds};
use crate::fourier::{nu_hat, psi_hat, psi_hat_depths};
use crate::parry::{cylinder_measure, perron, PerronData};
use crate::zero::{build_zero_automaton, Trim};
use crate::{Error, Result};

pub const GOLDEN: [i64; 3] = [-1, -1, 1];
pub const TWO: [i64; 2] = [-2, 1];

/// Reference value of `lim ν̂(βⁿ)` for the fig3 automaton.
pub const FIG3_REFERENCE_LIMIT: (f64, f64) = (0.0608424, 0.0208583);

pub const NAMES: [&str; 5] = [
    "fibonacci",
    "example1-7edge",
    "example1-9edge",
    "fullshift4",
    "fig3",
];

/// Working precision for fixture arithmetic.
const PRECISION: u32 = 128;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub automaton: LabeledAutomaton,
}

impl Fixture {
    pub fn file_name(&self) -> String {
        format!("{}.json", self.name)
    }

    pub fn minpoly(&self) -> &[i64] {
        self.automaton.beta_minpoly().expect("fixtures carry beta")
    }

    pub fn pisot(&self) -> Result<PisotNumber> {
        make_pisot(self.minpoly(), PRECISION)
    }

    pub fn perron(&self) -> Result<PerronData> {
        perron(&self.automaton, 1e-12)
    }
}

fn edges(list: &[(usize, usize, i64)]) -> Vec<Edge> {
    list.iter()
        .map(|&(from, to, label)| Edge { from, to, label })
        .collect()
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// No two consecutive 1s.
pub fn fibonacci() -> LabeledAutomaton {
    LabeledAutomaton::new(
        names(&["p", "q"]),
        vec![0, 1],
        edges(&[(0, 0, 0), (0, 1, 1), (1, 0, 0)]),
        vec![0],
        vec![0, 1],
    )
    .expect("valid fixture")
    .with_beta(Some(GOLDEN.to_vec()))
}

/// Zero automaton for golden `β` and digits `{0, ±1}`.
pub fn example1_9edge() -> Result<LabeledAutomaton> {
    let p = make_pisot(&GOLDEN, PRECISION)?;
    Ok(build_zero_automaton(&p, &[-1, 0, 1], Trim::Both)?.automaton)
}

/// The 9-edge automaton without the two label-0 edges `±(β-1) → ±1`.
pub fn example1_7edge() -> Result<LabeledAutomaton> {
    let full = example1_9edge()?;
    let b1 = BetaInt::from_i64s(&[-1, 1]);
    let drop: Vec<usize> = [&b1, &-&b1]
        .iter()
        .map(|x| full.state_index(&x.to_string()).expect("state present"))
        .collect();
    let kept = full
        .edges()
        .iter()
        .filter(|e| !(e.label == 0 && drop.contains(&e.from)))
        .copied()
        .collect();
    Ok(LabeledAutomaton::new(
        full.states().to_vec(),
        full.alphabet().to_vec(),
        kept,
        full.initial().to_vec(),
        full.terminal().to_vec(),
    )?
    .with_beta(Some(GOLDEN.to_vec()))
    .with_annotations(full.annotations().clone()))
}

/// `{0,1,2,3}^ℕ` in base 2.
pub fn fullshift4() -> LabeledAutomaton {
    LabeledAutomaton::new(
        names(&["s"]),
        vec![0, 1, 2, 3],
        edges(&[(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 0, 3)]),
        vec![0],
        vec![0],
    )
    .expect("valid fixture")
    .with_beta(Some(TWO.to_vec()))
}

/// Greedy expansions in base `β²` with digits `{0,1,2}`, read in base `β`.
pub fn fig3() -> LabeledAutomaton {
    LabeledAutomaton::new(
        names(&["q0", "q1"]),
        vec![0, 1, 2],
        edges(&[(0, 0, 0), (0, 0, 1), (0, 1, 2), (1, 1, 1), (1, 0, 0)]),
        vec![0],
        vec![0, 1],
    )
    .expect("valid fixture")
    .with_beta(Some(GOLDEN.to_vec()))
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let (name, automaton) = match name {
        "fibonacci" => ("fibonacci", fibonacci()),
        "example1-7edge" => ("example1-7edge", example1_7edge()?),
        "example1-9edge" => ("example1-9edge", example1_9edge()?),
        "fullshift4" => ("fullshift4", fullshift4()),
        "fig3" => ("fig3", fig3()),
        other => return Err(Error::Schema(format!("unknown fixture {other:?}"))),
    };
    Ok(Fixture { name, automaton })
}

pub fn all_fixtures() -> Result<Vec<Fixture>> {
    NAMES.iter().map(|n| fixture(n)).collect()
}

/// Positive root of `x³ = x² + 2`.
pub fn gamma_example1() -> f64 {
    real_root(|x| x * x * x - x * x - 2.0, 1.0, 2.0)
}

/// Tribonacci constant.
pub fn gamma_tribonacci() -> f64 {
    real_root(|x| x * x * x - x * x - x - 1.0, 1.0, 2.0)
}

fn real_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Atom masses of the 7-edge automaton by increasing value.
pub fn example1_7edge_masses() -> [f64; 5] {
    let g3 = gamma_example1().powi(3);
    let s = g3 + 4.0;
    [1.0 / s, 1.0 / s, g3 / s, 1.0 / s, 1.0 / s]
}

/// Atom masses of the 9-edge automaton by increasing value.
pub fn example1_9edge_masses() -> [f64; 5] {
    let g = gamma_tribonacci();
    let c = (g * g - 1.0).powi(2);
    let s = c + 4.0 * g;
    [g / s, g / s, c / s, g / s, g / s]
}

/// Reference masses for `{0}`, `{±1}`, `{±1/β}` (each sign).
pub fn reference_example1_masses() -> [(f64, &'static str); 3] {
    let g = gamma_example1();
    [
        (1.0 / (g * g), "0"),
        (0.5 * (1.0 / g - 1.0 / (g * g)), "±1"),
        (1.0 / g.powi(3), "±1/β"),
    ]
}

/// Values `{-1, 1-β, 0, β-1, 1}` as exact field elements.
pub fn example1_atom_values() -> Vec<QBeta> {
    [[-1, 0], [1, -1], [0, 0], [-1, 1], [1, 0]]
        .iter()
        .map(|c| QBeta::from(&BetaInt::from_i64s(c)))
        .collect()
}

/// `ν((-∞,x])` for the triangular-plateau density on `[0, 3]`.
pub fn fullshift4_cdf(x: f64) -> f64 {
    match x {
        x if x <= 0.0 => 0.0,
        x if x <= 1.0 => x * x / 4.0,
        x if x <= 2.0 => 0.25 + (x - 1.0) / 2.0,
        x if x <= 3.0 => 1.0 - (3.0 - x) * (3.0 - x) / 4.0,
        _ => 1.0,
    }
}

/// Closed form of `ν̂(t)` for the full shift on `{0..3}` in base 2.
pub fn fullshift4_fourier(t: f64) -> Complex64 {
    // Each digit contributes (1 + e(-s) + e(-2s) + e(-3s))/4 at s = t/2^k.
    let mut v = Complex64::new(1.0, 0.0);
    let mut s = t;
    for _ in 0..80 {
        s /= 2.0;
        let w: Complex64 = (0..4)
            .map(|d| Complex64::from_polar(0.25, -2.0 * std::f64::consts::PI * d as f64 * s))
            .sum();
        v *= w;
    }
    v
}

/// `ν((-∞,x])` for the Rényi-Parry density of golden `β`.
pub fn golden_parry_cdf(x: f64) -> f64 {
    let b = (1.0 + 5f64.sqrt()) / 2.0;
    let norm = 1.0 + 1.0 / (b * b);
    match x {
        x if x <= 0.0 => 0.0,
        x if x < 1.0 / b => x * (1.0 + 1.0 / b) / norm,
        x if x <= 1.0 => ((1.0 + 1.0 / b) / b + (x - 1.0 / b)) / norm,
        _ => 1.0,
    }
}

pub const FULLSHIFT4_POINTS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 2.5];
pub const FIBONACCI_POINTS: [f64; 5] = [0.2, 0.4, 0.5, 0.7, 0.9];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub fixture: String,
    pub name: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

/// A reference value that the computation does not reproduce.
#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub fixture: String,
    pub topic: String,
    pub reference: Value,
    pub computed: Value,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExamplesReport {
    pub checks: Vec<Check>,
    pub discrepancies: Vec<Discrepancy>,
}

impl ExamplesReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "all_pass": self.all_pass(),
            "checks": self.checks,
            "discrepancies": self.discrepancies,
        })
    }

    fn check(&mut self, fixture: &str, name: &str, expected: Value, computed: Value, pass: bool) {
        self.checks.push(Check {
            fixture: fixture.into(),
            name: name.into(),
            expected,
            computed,
            pass,
        });
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ReportOptions {
    pub tol: f64,
    pub height: i64,
    pub depth: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            tol: 1e-8,
            height: 2,
            depth: 12,
        }
    }
}

/// Run the reference checks for every bundled fixture.
pub fn examples_report(opts: &ReportOptions) -> Result<ExamplesReport> {
    let mut r = ExamplesReport {
        checks: Vec::new(),
        discrepancies: Vec::new(),
    };
    fibonacci_checks(&mut r, opts)?;
    example1_checks(&mut r, opts)?;
    fullshift4_checks(&mut r, opts)?;
    fig3_checks(&mut r, opts)?;
    Ok(r)
}

fn fibonacci_checks(r: &mut ExamplesReport, opts: &ReportOptions) -> Result<()> {
    let f = fixture("fibonacci")?;
    let (a, p, pd) = (&f.automaton, f.pisot()?, f.perron()?);
    let phi = p.beta_f64();
    r.check(
        "fibonacci",
        "lambda",
        json!(phi),
        json!(pd.lambda),
        (pd.lambda - phi).abs() < 1e-10,
    );
    let mu1 = cylinder_measure(&pd, a, &[1]);
    r.check(
        "fibonacci",
        "cylinder [1]",
        json!(0.2763932),
        json!(mu1),
        (mu1 - 0.276_393_202_250_021).abs() < 1e-9,
    );
    let v = classify(
        a,
        &p,
        &ClassifyOptions {
            scan_height: opts.height,
            tol: opts.tol,
        },
    )?;
    let inconclusive = matches!(v.evidence(), Some(Evidence::Inconclusive { .. }));
    let max_abs = v.scan.as_ref().map_or(f64::NAN, |s| s.max_abs);
    r.check(
        "fibonacci",
        "verdict",
        json!("continuous/inconclusive"),
        v.to_json(a)["evidence"].clone(),
        inconclusive,
    );
    r.check(
        "fibonacci",
        "scan max |psi|",
        json!("< 1e-6"),
        json!(max_abs),
        max_abs < 1e-6,
    );
    let brackets = cdf_bounds_at_depth(a, &p, &pd, opts.depth, &FIBONACCI_POINTS)?;
    let rows: Vec<Value> = FIBONACCI_POINTS
        .iter()
        .zip(&brackets)
        .map(|(&x, &(lo, hi))| json!({"x": x, "lower": lo, "upper": hi, "uniform": x, "parry_density": golden_parry_cdf(x)}))
        .collect();
    let uniform_inside = FIBONACCI_POINTS
        .iter()
        .zip(&brackets)
        .all(|(&x, &(lo, hi))| lo <= x && x <= hi);
    let parry_inside = FIBONACCI_POINTS
        .iter()
        .zip(&brackets)
        .all(|(&x, &(lo, hi))| {
            let c = golden_parry_cdf(x);
            lo <= c && c <= hi
        });
    r.discrepancies.push(Discrepancy {
        fixture: "fibonacci".into(),
        topic: "push-forward described as uniform on [0,1]".into(),
        reference: json!("Lebesgue measure on [0,1]"),
        computed: json!({"depth": opts.depth, "cdf": rows, "uniform_inside_brackets": uniform_inside, "parry_density_inside_brackets": parry_inside}),
        note: "CDF brackets of the Parry push-forward; compared with the uniform CDF and the Renyi-Parry density".into(),
    });
    Ok(())
}

fn atom_masses(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    pd: &PerronData,
) -> Result<(Vec<QBeta>, Vec<f64>)> {
    let at = atoms(a, p, pd)?.ok_or(Error::Schema("expected a finite image".into()))?;
    Ok((
        at.iter().map(|x| x.value.clone()).collect(),
        at.iter().map(|x| x.mass).collect(),
    ))
}

fn close(x: &[f64], y: &[f64], tol: f64) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| (a - b).abs() <= tol)
}

fn example1_checks(r: &mut ExamplesReport, _opts: &ReportOptions) -> Result<()> {
    let values: Vec<Vec<String>> = example1_atom_values()
        .iter()
        .map(|v| v.coord_strings())
        .collect();
    for (name, reference) in [
        ("example1-7edge", example1_7edge_masses()),
        ("example1-9edge", example1_9edge_masses()),
    ] {
        let f = fixture(name)?;
        let (a, p, pd) = (&f.automaton, f.pisot()?, f.perron()?);
        if name == "example1-7edge" {
            let l = pd.lambda;
            let res = l.powi(3) - l * l - 2.0;
            r.check(
                name,
                "lambda^3 - lambda^2 - 2",
                json!(0.0),
                json!(res),
                res.abs() < 1e-10,
            );
        }
        let (vals, masses) = atom_masses(a, &p, &pd)?;
        let got: Vec<Vec<String>> = vals.iter().map(|v| v.coord_strings()).collect();
        r.check(
            name,
            "atom values",
            json!(values),
            json!(got),
            vals == example1_atom_values(),
        );
        r.check(
            name,
            "atom masses",
            json!(reference),
            json!(masses),
            close(&masses, &reference, 1e-10),
        );
        let total: f64 = masses.iter().sum();
        r.check(
            name,
            "mass total",
            json!(1.0),
            json!(total),
            (total - 1.0).abs() < 1e-10,
        );
        if name == "example1-7edge" {
            let reference = reference_example1_masses();
            r.discrepancies.push(Discrepancy {
                fixture: name.into(),
                topic: "atom masses".into(),
                reference: json!(reference.iter().map(|(m, v)| json!({"value": v, "mass": m})).collect::<Vec<_>>()),
                computed: json!([
                    {"value": "0", "mass": masses[2]},
                    {"value": "±1", "mass": masses[4]},
                    {"value": "±1/β", "mass": masses[3]},
                ]),
                note: "atom values agree exactly (1/β = β-1); masses differ for both the 7-edge and 9-edge readings".into(),
            });
        }
    }
    Ok(())
}

fn fullshift4_checks(r: &mut ExamplesReport, opts: &ReportOptions) -> Result<()> {
    let f = fixture("fullshift4")?;
    let (a, p, pd) = (&f.automaton, f.pisot()?, f.perron()?);
    let b = value_bounds(a, &p, 1e-12)?[0];
    r.check(
        "fullshift4",
        "value bounds",
        json!([0.0, 3.0]),
        json!([b.0, b.1]),
        b.0.abs() < 1e-10 && (b.1 - 3.0).abs() < 1e-10,
    );
    let brackets = cdf_bounds_at_depth(a, &p, &pd, opts.depth, &FULLSHIFT4_POINTS)?;
    for (&x, &(lo, hi)) in FULLSHIFT4_POINTS.iter().zip(&brackets) {
        let target = fullshift4_cdf(x);
        r.check(
            "fullshift4",
            &format!("cdf({x})"),
            json!(target),
            json!([lo, hi]),
            lo <= target && target <= hi && hi - lo <= 0.01,
        );
    }
    let v1 = nu_hat(a, &p, &pd, 1.0, opts.tol);
    r.check(
        "fullshift4",
        "|nu_hat(1)|",
        json!("<= 1e-6"),
        json!(v1.abs),
        v1.abs <= 1e-6,
    );
    let vq = nu_hat(a, &p, &pd, 0.25, opts.tol);
    r.check(
        "fullshift4",
        "|nu_hat(0.25)|",
        json!(0.5731),
        json!(vq.abs),
        (vq.abs - 0.5731).abs() <= 1e-4,
    );
    Ok(())
}

fn fig3_checks(r: &mut ExamplesReport, opts: &ReportOptions) -> Result<()> {
    let f = fixture("fig3")?;
    let (a, p, pd) = (&f.automaton, f.pisot()?, f.perron()?);
    let one = BetaInt::from_i64s(&[1, 0]);
    let v = psi_hat(a, &p, &pd, &one, opts.tol)?;
    let doubled = psi_hat_depths(a, &p, &pd, &one, 2 * v.head, 2 * v.tail)?;
    let change = (v.value() - doubled.value()).norm();
    r.check(
        "fig3",
        "psi_hat(1) stable under doubling",
        json!("< 1e-6"),
        json!(change),
        change < 1e-6,
    );
    r.check(
        "fig3",
        "|psi_hat(1)| > 0.05",
        json!(0.05),
        json!(v.abs),
        v.abs > 0.05,
    );
    let target = Complex64::new(FIG3_REFERENCE_LIMIT.0, FIG3_REFERENCE_LIMIT.1);
    let dist = (v.value() - target).norm();
    r.check(
        "fig3",
        "psi_hat(1) matches reference limit",
        json!({"re": target.re, "im": target.im}),
        json!({"re": v.re, "im": v.im}),
        dist <= 1e-4,
    );
    if dist > 1e-4 {
        r.discrepancies.push(Discrepancy {
            fixture: "fig3".into(),
            topic: "limit of nu_hat(beta^n) for the fig3 automaton".into(),
            reference: json!({"re": target.re, "im": target.im}),
            computed: json!({"re": v.re, "im": v.im, "abs": v.abs, "bound": v.bound}),
            note: "automaton reconstructed as greedy base-β² expansions read in base golden β"
                .into(),
        });
    }
    Ok(())
}
