//! The finite automaton recognising digit words of `β`-value zero.
//!
//! States are elements `x ∈ ℤ[β]`; reading `a` moves `x` to `βx - a`. A
//! state is kept when `|x| ≤ M/(β-1)` and `|x_q| ≤ M/(1-|β_q|)` for every
//! conjugate, with `M = max |a|`. Starting from `0`, a word reaches `0`
//! again exactly when its value `Σ a_k β^{-k}` vanishes.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::{BetaInt, PisotNumber};
use crate::automaton::{Edge, LabeledAutomaton};
use crate::ball::Ball;
use crate::{Error, Result};

/// Longest word length accepted by [`verify_zero_language`].
pub const VERIFY_CAP: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trim {
    /// No trimming. The construction only ever creates states reachable
    /// from `0`, so this coincides with [`Trim::Accessible`].
    None,
    Accessible,
    /// Keep states both reachable from `0` and co-reachable to `0`.
    Both,
}

impl std::str::FromStr for Trim {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Trim::None),
            "accessible" => Ok(Trim::Accessible),
            "both" | "trim_both" => Ok(Trim::Both),
            _ => Err(Error::Schema(format!("unknown trim mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ZeroAutomaton {
    pub automaton: LabeledAutomaton,
    /// Exact value of each state, in automaton state order.
    pub values: Vec<BetaInt>,
    pub trim: Trim,
    /// No nonempty word of value zero exists.
    pub empty_language: bool,
    /// States lying exactly on one of the bounds.
    pub boundary: Vec<BetaInt>,
}

impl ZeroAutomaton {
    pub fn state_of(&self, x: &BetaInt) -> Option<usize> {
        self.values.iter().position(|v| v == x)
    }

    /// Restriction to the strongly connected component of `0`.
    pub fn core(&self) -> ZeroAutomaton {
        let comp = self
            .automaton
            .sccs()
            .into_iter()
            .find(|c| c.contains(&0))
            .unwrap_or_else(|| vec![0]);
        ZeroAutomaton {
            automaton: self.automaton.restrict(&comp),
            values: comp.iter().map(|&v| self.values[v].clone()).collect(),
            trim: self.trim,
            empty_language: self.empty_language,
            boundary: self.boundary.clone(),
        }
    }
}

enum Side {
    Inside,
    OnBoundary,
    Outside,
}

struct BoundTester<'a> {
    p: &'a PisotNumber,
    cur: Cow<'a, PisotNumber>,
    m: BigInt,
    /// `β - 1` and, per conjugate index `q ≥ 2`, `1 - s_q β` for real conjugates
    /// with sign `s_q`.
    beta_minus_one: BetaInt,
    real_factors: Vec<Option<BetaInt>>,
}

impl<'a> BoundTester<'a> {
    fn new(p: &'a PisotNumber, m: i64) -> Self {
        let r = p.degree();
        let beta = p.beta();
        let real_factors = (2..=r)
            .map(|q| {
                let e = p.embedding(q);
                (e.im.is_exact() && e.im.mid_scaled() == &BigInt::from(0)).then(|| {
                    let s = if e.re.is_negative() { -1 } else { 1 };
                    &p.one() - &beta.scale(&BigInt::from(s))
                })
            })
            .collect();
        BoundTester {
            p,
            cur: Cow::Borrowed(p),
            m: BigInt::from(m),
            beta_minus_one: &beta - &p.one(),
            real_factors,
        }
    }

    fn escalate(&mut self, y: &BetaInt) -> Result<()> {
        let prec = self.cur.precision();
        if prec >= self.p.cap() {
            return Err(Error::PrecisionExhausted {
                what: format!("bound test for state {y}"),
                cap: self.p.cap(),
            });
        }
        self.cur = Cow::Owned(self.cur.at_precision((prec * 2).min(self.p.cap()))?);
        Ok(())
    }

    /// Compare `|w_q|` (`w` exact) with `M`.
    fn compare_real(&mut self, w: &BetaInt, q: usize, y: &BetaInt) -> Result<Side> {
        if let Some(n) = w.as_integer() {
            let a = num_traits::Signed::abs(n);
            return Ok(match a.cmp(&self.m) {
                std::cmp::Ordering::Less => Side::Inside,
                std::cmp::Ordering::Equal => Side::OnBoundary,
                std::cmp::Ordering::Greater => Side::Outside,
            });
        }
        // An algebraic identity w = ±M holds in every embedding at once.
        if w == &self.p.from_int(self.m.clone()) || w == &self.p.from_int(-self.m.clone()) {
            return Ok(Side::OnBoundary);
        }
        loop {
            let v = self.cur.embed(w, q)?.re.abs();
            if v.lt_int(&self.m) {
                return Ok(Side::Inside);
            }
            if v.gt_int(&self.m) {
                return Ok(Side::Outside);
            }
            self.escalate(y)?;
        }
    }

    fn compare_complex(&mut self, y: &BetaInt, q: usize) -> Result<Side> {
        loop {
            let abs_y = self.cur.embed(y, q)?.abs();
            let abs_b = self.cur.embedding(q).abs().with_prec(abs_y.prec());
            let room = Ball::from_i64(1, abs_y.prec()).sub(&abs_b);
            let v = abs_y.mul(&room);
            if v.lt_int(&self.m) {
                return Ok(Side::Inside);
            }
            if v.gt_int(&self.m) {
                return Ok(Side::Outside);
            }
            self.escalate(y)?;
        }
    }

    /// `Some(on_boundary)` when `y` satisfies every bound.
    fn admits(&mut self, y: &BetaInt) -> Result<Option<bool>> {
        let mut boundary = false;
        let w = self.p.mul(y, &self.beta_minus_one);
        match self.compare_real(&w, 1, y)? {
            Side::Outside => return Ok(None),
            Side::OnBoundary => boundary = true,
            Side::Inside => {}
        }
        for q in 2..=self.p.degree() {
            let side = match self.real_factors[q - 2].clone() {
                Some(f) => {
                    let u = self.p.mul(y, &f);
                    self.compare_real(&u, q, y)?
                }
                None => self.compare_complex(y, q)?,
            };
            match side {
                Side::Outside => return Ok(None),
                Side::OnBoundary => boundary = true,
                Side::Inside => {}
            }
        }
        Ok(Some(boundary))
    }
}

/// Breadth-first construction from `0`, trying labels in increasing order.
pub fn build_zero_automaton(
    p: &PisotNumber,
    alphabet: &[i64],
    trim: Trim,
) -> Result<ZeroAutomaton> {
    let mut alpha = alphabet.to_vec();
    alpha.sort_unstable();
    alpha.dedup();
    let m = alpha.iter().map(|a| a.abs()).max().unwrap_or(0);
    let beta = p.beta();
    let mut tester = BoundTester::new(p, m);

    let zero = p.zero();
    let mut values = vec![zero.clone()];
    let mut index: HashMap<BetaInt, usize> = HashMap::from([(zero, 0)]);
    let mut edges = Vec::new();
    let mut boundary = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let bx = p.mul(&beta, &values[i]);
        for &a in &alpha {
            let y = &bx - &p.from_int(a);
            let j = match index.get(&y) {
                Some(&j) => j,
                None => match tester.admits(&y)? {
                    None => continue,
                    Some(on_bound) => {
                        if on_bound {
                            boundary.push(y.clone());
                        }
                        let j = values.len();
                        values.push(y.clone());
                        index.insert(y, j);
                        queue.push_back(j);
                        j
                    }
                },
            };
            edges.push(Edge {
                from: i,
                to: j,
                label: a,
            });
        }
    }

    let names: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    let notes: BTreeMap<String, String> = values
        .iter()
        .zip(&names)
        .map(|(v, n)| (n.clone(), format!("{:.10}", p.to_f64(v))))
        .collect();
    let full = LabeledAutomaton::new(names, alpha, edges, vec![0], vec![0])?
        .with_beta(Some(p.minpoly_i64()))
        .with_annotations(notes);

    let keep: Vec<usize> = match trim {
        Trim::None | Trim::Accessible => (0..values.len()).collect(),
        Trim::Both => {
            let co = full.coreachable_to(&[0]);
            full.reachable_from(&[0])
                .into_iter()
                .filter(|v| co.binary_search(v).is_ok())
                .collect()
        }
    };
    let automaton = if keep.len() == values.len() {
        full
    } else {
        full.restrict(&keep)
    };
    let values: Vec<BetaInt> = keep.iter().map(|&v| values[v].clone()).collect();
    // Every state is reachable from 0, so a nonempty zero word exists iff
    // some edge returns to 0.
    let empty_language = automaton.edges().iter().all(|e| e.to != 0);
    Ok(ZeroAutomaton {
        automaton,
        values,
        trim,
        empty_language,
        boundary,
    })
}

/// Per-length result of the brute-force language check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LengthCount {
    pub n: usize,
    /// Words accepted by the automaton (paths from `0` to `0`).
    pub accepted: u64,
    /// Words over the alphabet with exact value zero.
    pub zero_words: u64,
    /// Accepted words whose value is not zero (first few).
    pub unsound: Vec<Vec<i64>>,
    /// Zero words the automaton rejects (first few).
    pub missing: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroLanguageReport {
    pub per_length: Vec<LengthCount>,
    pub sound: bool,
    pub complete: bool,
}

const EXAMPLES_KEPT: usize = 5;

#[derive(Clone)]
struct Walker<'a> {
    p: &'a PisotNumber,
    alphabet: Vec<i64>,
    /// `next[state][k]`: target of the edge with the `k`-th letter.
    next: Vec<Vec<Option<usize>>>,
    n_max: usize,
}

impl Walker<'_> {
    fn walk(
        &self,
        value: &BetaInt,
        state: Option<usize>,
        word: &mut Vec<i64>,
        acc: &mut [LengthCount],
    ) {
        let n = word.len();
        if n > 0 {
            let zero = value.is_zero();
            let accepted = state == Some(0);
            let c = &mut acc[n - 1];
            c.zero_words += zero as u64;
            c.accepted += accepted as u64;
            if accepted && !zero && c.unsound.len() < EXAMPLES_KEPT {
                c.unsound.push(word.clone());
            }
            if zero && !accepted && c.missing.len() < EXAMPLES_KEPT {
                c.missing.push(word.clone());
            }
        }
        if n == self.n_max {
            return;
        }
        let bv = self.p.mul_beta(value);
        for (k, &a) in self.alphabet.iter().enumerate() {
            let v = &bv + &self.p.from_int(a);
            let s = state.and_then(|s| self.next[s][k]);
            word.push(a);
            self.walk(&v, s, word, acc);
            word.pop();
        }
    }
}

/// Check the automaton against exhaustive enumeration of all words of
/// length `1..=n_max` with exact arithmetic.
pub fn verify_zero_language(
    za: &ZeroAutomaton,
    p: &PisotNumber,
    n_max: usize,
) -> Result<ZeroLanguageReport> {
    if n_max > VERIFY_CAP {
        return Err(Error::CapExceeded {
            what: format!("word length {n_max}"),
            cap: VERIFY_CAP,
        });
    }
    let a = &za.automaton;
    let alphabet = a.alphabet().to_vec();
    let mut next = vec![vec![None; alphabet.len()]; a.n_states()];
    for e in a.edges() {
        let k = alphabet.binary_search(&e.label).expect("validated label");
        next[e.from][k] = Some(e.to);
    }
    let walker = Walker {
        p,
        alphabet,
        next,
        n_max,
    };
    let empty = |n_max: usize| {
        (1..=n_max)
            .map(|n| LengthCount {
                n,
                ..Default::default()
            })
            .collect::<Vec<_>>()
    };

    // Split on the first letters for parallelism; shorter words are walked
    // separately. Parts are merged in word order.
    let k = walker.alphabet.len();
    let depth = n_max.min(2);
    let mut total = empty(n_max);
    let short = Walker {
        n_max: depth.saturating_sub(1),
        ..walker.clone()
    };
    short.walk(&p.zero(), Some(0), &mut Vec::new(), &mut total);
    let prefixes: Vec<Vec<i64>> = (0..k.pow(depth as u32))
        .map(|mut i| {
            let mut w = vec![0; depth];
            for slot in w.iter_mut().rev() {
                *slot = walker.alphabet[i % k];
                i /= k;
            }
            w
        })
        .collect();
    let parts: Vec<Vec<LengthCount>> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut acc = empty(n_max);
            let mut value = p.zero();
            let mut state = Some(0);
            for &l in prefix {
                let i = walker.alphabet.binary_search(&l).expect("alphabet letter");
                value = &p.mul_beta(&value) + &p.from_int(l);
                state = state.and_then(|s| walker.next[s][i]);
            }
            walker.walk(&value, state, &mut prefix.clone(), &mut acc);
            acc
        })
        .collect();
    for part in parts {
        for (t, c) in total.iter_mut().zip(part) {
            t.accepted += c.accepted;
            t.zero_words += c.zero_words;
            for w in c.unsound {
                if t.unsound.len() < EXAMPLES_KEPT {
                    t.unsound.push(w);
                }
            }
            for w in c.missing {
                if t.missing.len() < EXAMPLES_KEPT {
                    t.missing.push(w);
                }
            }
        }
    }
    let sound = total.iter().all(|c| c.unsound.is_empty());
    let complete = total.iter().all(|c| c.missing.is_empty());
    Ok(ZeroLanguageReport {
        per_length: total,
        sound,
        complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::make_pisot;

    fn golden() -> PisotNumber {
        make_pisot(&[-1, -1, 1], 128).unwrap()
    }

    #[test]
    fn golden_trim_both() {
        let p = golden();
        let za = build_zero_automaton(&p, &[-1, 0, 1], Trim::Both).unwrap();
        assert_eq!(
            za.automaton.states(),
            ["(0,0)", "(1,0)", "(-1,0)", "(-1,1)", "(1,-1)"]
        );
        assert_eq!(za.automaton.edges().len(), 9);
        for e in za.automaton.edges() {
            let want = &p.mul_beta(&za.values[e.from]) - &p.from_int(e.label);
            assert_eq!(za.values[e.to], want);
        }
        assert!(!za.empty_language);
    }

    #[test]
    fn golden_accessible_keeps_boundary_states() {
        let p = golden();
        let za = build_zero_automaton(&p, &[-1, 0, 1], Trim::Accessible).unwrap();
        assert_eq!(za.automaton.n_states(), 7);
        assert!(za.state_of(&BetaInt::from_i64s(&[0, 1])).is_some());
        assert!(za.state_of(&BetaInt::from_i64s(&[0, -1])).is_some());
        assert_eq!(za.boundary.len(), 2);
    }

    #[test]
    fn integer_base_nonnegative_digits() {
        let p = make_pisot(&[-2, 1], 64).unwrap();
        let za = build_zero_automaton(&p, &[0, 1], Trim::Both).unwrap();
        assert_eq!(za.automaton.n_states(), 1);
        assert_eq!(
            za.automaton.edges(),
            [Edge {
                from: 0,
                to: 0,
                label: 0
            }]
        );
        let rep = verify_zero_language(&za, &p, 6).unwrap();
        assert!(rep.sound && rep.complete);
        assert!(rep.per_length.iter().all(|c| c.zero_words == 1));
    }

    #[test]
    fn golden_language_counts() {
        let p = golden();
        let za = build_zero_automaton(&p, &[-1, 0, 1], Trim::Both).unwrap();
        let rep = verify_zero_language(&za, &p, 8).unwrap();
        assert!(rep.sound && rep.complete, "{rep:?}");
        let counts: Vec<u64> = rep
            .per_length
            .iter()
            .take(5)
            .map(|c| c.zero_words)
            .collect();
        assert_eq!(counts, [1, 1, 3, 5, 9]);
        assert!(rep.per_length.iter().all(|c| c.accepted == c.zero_words));
    }
}
