//! Atomic / continuous classification with exact atoms.
//!
//! If every path from a state `v` has the same value `c(v)`, the values
//! satisfy `c(w) = βc(u) - a` along every edge `u →a→ w`. A cycle through a
//! root state fixes `c(root)`; propagating along a spanning tree and checking
//! every edge exactly decides whether the image is finite.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebraic::{BetaInt, PisotNumber, QBeta};
use crate::automaton::{primitivity_check, Edge, LabeledAutomaton};
use crate::fourier::{rajchman_scan, ScanReport, DEFAULT_TOL};
use crate::parry::{perron, start_distribution, PerronData};
use crate::{Error, Result};

/// An edge violating `c(w) = βc(u) - a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeWitness {
    pub from: usize,
    pub to: usize,
    pub label: i64,
    /// `c(u)`.
    pub source: QBeta,
    /// `βc(u) - a`.
    pub expected: QBeta,
    /// `c(w)` as assigned by propagation.
    pub assigned: QBeta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteImage {
    /// `c(v)` per state.
    Finite { c: Vec<QBeta>, cycle: Vec<Edge> },
    Perfect {
        witness: EdgeWitness,
        cycle: Vec<Edge>,
    },
}

/// Shortest cycle through state 0.
fn root_cycle(a: &LabeledAutomaton) -> Option<Vec<Edge>> {
    let n = a.n_states();
    let mut parent: Vec<Option<Edge>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for e in a.out_edges(v) {
            if e.to == 0 {
                let mut path = vec![*e];
                let mut cur = v;
                while let Some(pe) = parent[cur] {
                    path.push(pe);
                    cur = pe.from;
                }
                path.reverse();
                return Some(path);
            }
            if !seen[e.to] {
                seen[e.to] = true;
                parent[e.to] = Some(*e);
                queue.push_back(e.to);
            }
        }
    }
    None
}

/// Decide whether the value map is finite, returning `c` or a witness edge.
pub fn finite_image_test(a: &LabeledAutomaton, p: &PisotNumber) -> Result<FiniteImage> {
    if a.edges().is_empty() || a.sccs().len() != 1 {
        return Err(Error::NotStronglyConnected);
    }
    let r = p.degree();
    let cycle = root_cycle(a).ok_or(Error::NotStronglyConnected)?;
    // c(root) = Σ_{k=1}^n ℓ_k β^{n-k} / (βⁿ - 1).
    let n = cycle.len() as u64;
    let mut num = p.zero();
    for e in &cycle {
        num = &p.mul_beta(&num) + &p.from_int(e.label);
    }
    let den = &p.beta_pow(n) - &p.one();
    let c_root = p.qdiv(&QBeta::from(&num), &QBeta::from(&den))?;

    let mut c: Vec<Option<QBeta>> = vec![None; a.n_states()];
    c[0] = Some(c_root);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let cu = c[u].clone().expect("assigned before queued");
        let bu = p.qmul_beta(&cu);
        for e in a.out_edges(u) {
            if c[e.to].is_none() {
                c[e.to] = Some(&bu - &QBeta::from_int(e.label, r));
                queue.push_back(e.to);
            }
        }
    }
    let c: Vec<QBeta> = c
        .into_iter()
        .map(|v| v.expect("strongly connected"))
        .collect();
    for e in a.edges() {
        let expected = &p.qmul_beta(&c[e.from]) - &QBeta::from_int(e.label, r);
        if expected != c[e.to] {
            let witness = EdgeWitness {
                from: e.from,
                to: e.to,
                label: e.label,
                source: c[e.from].clone(),
                expected,
                assigned: c[e.to].clone(),
            };
            return Ok(FiniteImage::Perfect { witness, cycle });
        }
    }
    Ok(FiniteImage::Finite { c, cycle })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub value: QBeta,
    pub decimal: f64,
    pub mass: f64,
    /// States with `c(v) = value`.
    pub states: Vec<usize>,
}

/// Group states by exact value; mass of an atom is `Σ π(v)` over its states.
/// Atoms are listed by increasing value.
pub fn atoms_from_values(p: &PisotNumber, c: &[QBeta], pd: &PerronData) -> Vec<Atom> {
    let pi = start_distribution(pd);
    let mut out: Vec<Atom> = Vec::new();
    for (v, cv) in c.iter().enumerate() {
        match out.iter_mut().find(|at| &at.value == cv) {
            Some(at) => {
                at.mass += pi[v];
                at.states.push(v);
            }
            None => out.push(Atom {
                value: cv.clone(),
                decimal: p.qbeta_to_f64(cv),
                mass: pi[v],
                states: vec![v],
            }),
        }
    }
    out.sort_by(|x, y| x.decimal.total_cmp(&y.decimal));
    out
}

/// Atoms of the push-forward measure when the value map is finite.
pub fn atoms(a: &LabeledAutomaton, p: &PisotNumber, pd: &PerronData) -> Result<Option<Vec<Atom>>> {
    match finite_image_test(a, p)? {
        FiniteImage::Finite { c, .. } => Ok(Some(atoms_from_values(p, &c, pd))),
        FiniteImage::Perfect { .. } => Ok(None),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassifyOptions {
    pub scan_height: i64,
    pub tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            scan_height: 3,
            tol: DEFAULT_TOL,
        }
    }
}

impl ClassifyOptions {
    /// Minimum `|ψ̂|` accepted as singularity evidence.
    pub fn threshold(&self) -> f64 {
        (10.0 * self.tol).max(1e-4)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    /// `β > λ`: the support has dimension at most `log λ / log β < 1`.
    SingularByDimension { beta: f64, lambda: f64 },
    /// Some limit `ψ̂(z)` stays away from zero.
    SingularByFourier {
        z: Vec<i64>,
        re: f64,
        im: f64,
        abs: f64,
        bound: f64,
    },
    /// All scanned limits are below the threshold.
    Inconclusive {
        max_abs: f64,
        argmax: Option<Vec<i64>>,
    },
}

impl Evidence {
    pub fn name(&self) -> &'static str {
        match self {
            Evidence::SingularByDimension { .. } => "singular_by_dimension",
            Evidence::SingularByFourier { .. } => "singular_by_fourier",
            Evidence::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum VerdictKind {
    Atomic { atoms: Vec<Atom> },
    Continuous { evidence: Evidence },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub beta: f64,
    pub lambda: f64,
    /// Label sequence of the cycle used to seed `c(root)`.
    pub cycle_labels: Vec<i64>,
    /// Full value map for atomic verdicts.
    pub c_map: Option<Vec<QBeta>>,
    pub witness: Option<EdgeWitness>,
    pub scan: Option<ScanReport>,
    pub threshold: f64,
}

impl Verdict {
    pub fn is_atomic(&self) -> bool {
        matches!(self.kind, VerdictKind::Atomic { .. })
    }

    pub fn evidence(&self) -> Option<&Evidence> {
        match &self.kind {
            VerdictKind::Continuous { evidence } => Some(evidence),
            VerdictKind::Atomic { .. } => None,
        }
    }

    /// JSON report; state names come from `a`.
    pub fn to_json(&self, a: &LabeledAutomaton) -> Value {
        let mut v = json!({
            "beta": self.beta,
            "lambda": self.lambda,
            "cycle_labels": self.cycle_labels,
        });
        let obj = v.as_object_mut().expect("object literal");
        match &self.kind {
            VerdictKind::Atomic { atoms } => {
                obj.insert("kind".into(), json!("atomic"));
                obj.insert("atoms".into(), atoms_json(a, atoms));
                obj.insert(
                    "mass_total".into(),
                    json!(atoms.iter().map(|x| x.mass).sum::<f64>()),
                );
            }
            VerdictKind::Continuous { evidence } => {
                obj.insert("kind".into(), json!("continuous"));
                obj.insert("evidence".into(), json!(evidence.name()));
                let detail = match evidence {
                    Evidence::SingularByDimension { beta, lambda } => json!({
                        "beta": beta, "lambda": lambda,
                        "dimension_bound": lambda.ln() / beta.ln(),
                    }),
                    Evidence::SingularByFourier {
                        z,
                        re,
                        im,
                        abs,
                        bound,
                    } => json!({
                        "z": z, "re": re, "im": im, "abs": abs, "bound": bound, "threshold": self.threshold,
                    }),
                    Evidence::Inconclusive { max_abs, argmax } => json!({
                        "max_abs": max_abs, "argmax": argmax, "threshold": self.threshold,
                    }),
                };
                obj.insert("evidence_detail".into(), detail);
            }
        }
        if let Some(w) = &self.witness {
            obj.insert(
                "witness".into(),
                json!({
                    "from": a.states()[w.from], "to": a.states()[w.to], "label": w.label,
                    "source_coords": w.source.coord_strings(),
                    "expected_coords": w.expected.coord_strings(),
                    "assigned_coords": w.assigned.coord_strings(),
                }),
            );
        }
        if let Some(c) = &self.c_map {
            let m: serde_json::Map<String, Value> = a
                .states()
                .iter()
                .zip(c)
                .map(|(s, v)| (s.clone(), json!(v.coord_strings())))
                .collect();
            obj.insert("c_map".into(), Value::Object(m));
        }
        if let Some(scan) = &self.scan {
            obj.insert(
                "scan".into(),
                json!({"height": scan.height, "max_abs": scan.max_abs, "argmax": scan.argmax, "points": scan.entries.len()}),
            );
        }
        v
    }
}

pub fn atoms_json(a: &LabeledAutomaton, atoms: &[Atom]) -> Value {
    Value::Array(
        atoms
            .iter()
            .map(|at| {
                json!({
                    "value_coords": at.value.coord_strings(),
                    "value_decimal": at.decimal,
                    "mass": at.mass,
                    "states": at.states.iter().map(|&s| a.states()[s].clone()).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

/// Classify the push-forward of the Parry measure.
pub fn classify(
    a: &LabeledAutomaton,
    p: &PisotNumber,
    options: &ClassifyOptions,
) -> Result<Verdict> {
    if !primitivity_check(a).primitive {
        return Err(Error::NotPrimitive);
    }
    let pd = perron(a, 1e-12)?;
    let fit = finite_image_test(a, p)?;
    let cycle = match &fit {
        FiniteImage::Finite { cycle, .. } | FiniteImage::Perfect { cycle, .. } => cycle,
    };
    let cycle_labels = cycle.iter().map(|e| e.label).collect();
    let mut verdict = Verdict {
        kind: VerdictKind::Continuous {
            evidence: Evidence::Inconclusive {
                max_abs: 0.0,
                argmax: None,
            },
        },
        beta: p.beta_f64(),
        lambda: pd.lambda,
        cycle_labels,
        c_map: None,
        witness: None,
        scan: None,
        threshold: options.threshold(),
    };
    match fit {
        FiniteImage::Finite { c, .. } => {
            verdict.kind = VerdictKind::Atomic {
                atoms: atoms_from_values(p, &c, &pd),
            };
            verdict.c_map = Some(c);
        }
        FiniteImage::Perfect { witness, .. } => {
            verdict.witness = Some(witness);
            if verdict.beta > pd.lambda * (1.0 + options.tol) {
                verdict.kind = VerdictKind::Continuous {
                    evidence: Evidence::SingularByDimension {
                        beta: verdict.beta,
                        lambda: pd.lambda,
                    },
                };
            } else {
                crate::fourier::check_height(options.scan_height)?;
                let scan = rajchman_scan(a, p, &pd, options.scan_height, options.tol)?;
                let evidence = match scan.max_entry() {
                    Some(e) if e.value.abs - e.value.bound > options.threshold() => {
                        Evidence::SingularByFourier {
                            z: e.z.clone(),
                            re: e.value.re,
                            im: e.value.im,
                            abs: e.value.abs,
                            bound: e.value.bound,
                        }
                    }
                    _ => Evidence::Inconclusive {
                        max_abs: scan.max_abs,
                        argmax: scan.argmax.clone(),
                    },
                };
                verdict.kind = VerdictKind::Continuous { evidence };
                verdict.scan = Some(scan);
            }
        }
    }
    Ok(verdict)
}

/// Multiply every label by `s` (a pushforward under `x ↦ sx`).
pub fn scale_labels(a: &LabeledAutomaton, s: i64) -> Result<LabeledAutomaton> {
    let edges = a
        .edges()
        .iter()
        .map(|e| crate::automaton::Edge {
            label: e.label * s,
            ..*e
        })
        .collect();
    let alphabet = a.alphabet().iter().map(|l| l * s).collect();
    LabeledAutomaton::new(
        a.states().to_vec(),
        alphabet,
        edges,
        a.initial().to_vec(),
        a.terminal().to_vec(),
    )
}

/// `x / s` for an integer `s ≠ 0`.
pub fn qbeta_scale(x: &QBeta, s: i64) -> QBeta {
    x.scale(&BigRational::new(BigInt::from(s), BigInt::one()))
}

/// Value map restricted to a zero automaton, as elements of `ℤ[β]`.
pub fn as_beta_ints(c: &[QBeta]) -> Option<Vec<BetaInt>> {
    c.iter()
        .map(|v| {
            let (num, den) = v.split();
            den.is_one().then_some(num)
        })
        .collect()
}
