//! Pisot numbers and exact arithmetic in `ℤ[β]` and `ℚ(β)`.
//!
//! Elements are coordinate vectors in the power basis `1, β, …, β^{r-1}`.
//! Numeric embeddings `β ↦ β_q` are certified enclosures ([`ComplexBall`]);
//! `q = 1` is always the real embedding at `β` itself.

mod element;
mod poly;
mod roots;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ball::{Ball, ComplexBall};
use crate::{Error, Result};

pub use element::{BetaInt, QBeta};
pub(crate) use poly::format_poly;

/// Minimum working precision, in bits.
const MIN_PRECISION: u32 = 64;

/// A Pisot number given by its minimal polynomial, with certified
/// enclosures of all its embeddings.
#[derive(Clone, Debug)]
pub struct PisotNumber {
    minpoly: Vec<BigInt>,
    precision: u32,
    cap: u32,
    /// `embeddings[0]` encloses `β`; the rest are the conjugates, real ones
    /// first (descending), then complex ones by real then imaginary part.
    embeddings: Vec<ComplexBall>,
    approx: Vec<Complex64>,
    irreducibility_verified: bool,
}

/// Fractional part of `zβᵏ` with an error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FracPart {
    /// In `[0, 1)`.
    pub value: f64,
    /// Absolute error bound of `value`.
    pub error: f64,
    /// The fractional part is exactly `0`.
    pub exact: bool,
}

impl FracPart {
    fn zero() -> Self {
        FracPart {
            value: 0.0,
            error: 0.0,
            exact: true,
        }
    }

    /// Representative in `(-1/2, 1/2]`, i.e. the signed distance to the
    /// nearest integer.
    pub fn centered(&self) -> f64 {
        if self.value > 0.5 {
            self.value - 1.0
        } else {
            self.value
        }
    }
}

/// Parse a comma-separated coefficient list, constant term first.
pub fn parse_minpoly(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Schema(format!("bad polynomial coefficient {t:?}")))
        })
        .collect()
}

/// Build a Pisot number from its minimal polynomial (constant term first),
/// with the precision cap taken from the environment.
pub fn make_pisot(minpoly: &[i64], precision: u32) -> Result<PisotNumber> {
    PisotNumber::new(
        minpoly.iter().map(|&c| BigInt::from(c)).collect(),
        precision,
        crate::precision_cap(),
    )
}

pub fn bint_mul(x: &BetaInt, y: &BetaInt, p: &PisotNumber) -> BetaInt {
    p.mul(x, y)
}

/// Enclosure of the `q`-th embedding of `x` (`q = 1` is `β` itself).
pub fn bint_embed(x: &BetaInt, q: usize, p: &PisotNumber) -> Result<ComplexBall> {
    p.embed(x, q)
}

pub fn frac_beta_power(z: &BetaInt, k: u64, p: &PisotNumber) -> Result<FracPart> {
    p.frac_beta_power(z, k)
}

pub fn qbeta_div(num: &QBeta, den: &QBeta, p: &PisotNumber) -> Result<QBeta> {
    p.qdiv(num, den)
}

fn modulus_vs_one(root: &roots::IsolatedRoot) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let one = BigInt::one() << root.prec;
    let c2 = &root.re * &root.re + &root.im * &root.im;
    let outer = &one + &root.radius;
    if c2 > &outer * &outer {
        return Greater;
    }
    if root.radius < one {
        let inner = &one - &root.radius;
        if c2 < &inner * &inner {
            return Less;
        }
    }
    Equal
}

fn root_ball(root: &roots::IsolatedRoot) -> ComplexBall {
    let re = Ball::new(root.re.clone(), root.radius.clone(), root.prec);
    if root.is_real() {
        ComplexBall::real(re)
    } else {
        ComplexBall::new(
            re,
            Ball::new(root.im.clone(), root.radius.clone(), root.prec),
        )
    }
}

fn isolate_escalating(
    minpoly: &[BigInt],
    seeds: &[Complex64],
    precision: u32,
    cap: u32,
) -> Result<(Vec<roots::IsolatedRoot>, u32)> {
    let mut prec = precision;
    loop {
        if let Some(r) = roots::isolate(minpoly, seeds, prec) {
            return Ok((r, prec));
        }
        if prec >= cap {
            return Err(Error::PrecisionExhausted {
                what: format!("root isolation of {}", format_poly(minpoly)),
                cap,
            });
        }
        prec = (prec * 2).min(cap);
    }
}

/// Roots pair up under `z ↦ 1/z` for (anti-)reciprocal polynomials.
fn is_self_reciprocal(p: &[BigInt]) -> bool {
    let n = p.len() - 1;
    let sym = (0..=n).all(|i| p[i] == p[n - i]);
    let anti = (0..=n).all(|i| p[i] == -&p[n - i]);
    sym || anti
}

impl PisotNumber {
    /// Validate `minpoly` and certify its roots at `precision` bits
    /// (escalating up to `cap`).
    pub fn new(minpoly: Vec<BigInt>, precision: u32, cap: u32) -> Result<Self> {
        let text = format_poly(&minpoly);
        if minpoly.len() < 2 || !minpoly.last().is_some_and(|c| c.is_one()) {
            return Err(Error::NotMonic(text));
        }
        let cap = cap.max(MIN_PRECISION);
        let precision = precision.clamp(MIN_PRECISION, cap);
        let r = minpoly.len() - 1;
        if r == 1 {
            let beta = -&minpoly[0];
            if beta <= BigInt::one() {
                return Err(Error::NotPisot {
                    root: beta.to_string(),
                    reason: "is not > 1".into(),
                });
            }
            let approx = vec![Complex64::new(beta.to_f64().unwrap_or(f64::INFINITY), 0.0)];
            return Ok(PisotNumber {
                embeddings: vec![ComplexBall::from_int(&beta, precision)],
                minpoly,
                precision,
                cap,
                approx,
                irreducibility_verified: true,
            });
        }

        let g = poly::gcd(&minpoly, &poly::derivative(&minpoly));
        if g.len() > 1 {
            return Err(Error::Reducible {
                factor: format_poly(&g),
            });
        }
        if let Some(a) = poly::integer_root(&minpoly) {
            return Err(Error::Reducible {
                factor: format_poly(&[-a, BigInt::one()]),
            });
        }
        if r == 4 {
            if let Some(f) = poly::quartic_quadratic_factor(&minpoly) {
                return Err(Error::Reducible {
                    factor: format_poly(&f),
                });
            }
        }

        let seeds = roots::approximate(&minpoly);
        if r > 2 && is_self_reciprocal(&minpoly) {
            let outside = seeds
                .iter()
                .filter(|z| z.norm() >= 1.0)
                .nth(1)
                .copied()
                .unwrap_or(seeds[0]);
            return Err(Error::NotPisot {
                root: format_c64(outside),
                reason: "pairs with its reciprocal, so more than one root lies on or outside the unit circle".into(),
            });
        }

        let mut prec = precision;
        let (isolated, prec_used) = loop {
            let (iso, used) = isolate_escalating(&minpoly, &seeds, prec, cap)?;
            let order: Vec<_> = iso.iter().map(modulus_vs_one).collect();
            use std::cmp::Ordering::*;
            if let Some(i) = (0..r)
                .find(|&i| order[i] == Greater && !(iso[i].is_real() && iso[i].re.is_positive()))
            {
                return Err(Error::NotPisot {
                    root: format_c64(iso[i].approx()),
                    reason: "has modulus > 1 but is not a real root > 1".into(),
                });
            }
            let outside = order.iter().filter(|o| **o == Greater).count();
            if outside > 1 {
                let i = (0..r).filter(|&i| order[i] == Greater).nth(1).unwrap_or(0);
                return Err(Error::NotPisot {
                    root: format_c64(iso[i].approx()),
                    reason: "is a second root of modulus > 1".into(),
                });
            }
            if order.iter().all(|o| *o != Equal) {
                if outside == 0 {
                    return Err(Error::NotPisot {
                        root: format_c64(iso[0].approx()),
                        reason: "all roots have modulus < 1".into(),
                    });
                }
                break (iso, used);
            }
            if used >= cap {
                let i = order.iter().position(|o| *o == Equal).unwrap_or(0);
                return Err(Error::NotPisot {
                    root: format_c64(iso[i].approx()),
                    reason: format!("modulus cannot be separated from 1 at {cap} bits"),
                });
            }
            prec = (used * 2).min(cap);
        };

        let mut idx: Vec<usize> = (0..r).collect();
        let key = |i: usize| {
            let z = isolated[i].approx();
            let outside = modulus_vs_one(&isolated[i]) == std::cmp::Ordering::Greater;
            (!outside, !isolated[i].is_real(), -z.re, -z.im)
        };
        idx.sort_by(|&a, &b| {
            let (ka, kb) = (key(a), key(b));
            (ka.0, ka.1)
                .cmp(&(kb.0, kb.1))
                .then(ka.2.total_cmp(&kb.2))
                .then(ka.3.total_cmp(&kb.3))
        });
        let embeddings = idx.iter().map(|&i| root_ball(&isolated[i])).collect();
        let approx = idx.iter().map(|&i| isolated[i].approx()).collect();
        // Any proper monic factor would have all its roots strictly inside
        // the unit disk, hence a constant term of modulus < 1; the constant
        // term is a nonzero integer (no root at 0), so the Pisot condition
        // certifies irreducibility in every degree.
        Ok(PisotNumber {
            minpoly,
            precision: prec_used,
            cap,
            embeddings,
            approx,
            irreducibility_verified: true,
        })
    }

    /// The same number with enclosures at no less than `bits` of precision.
    pub fn at_precision(&self, bits: u32) -> Result<PisotNumber> {
        if bits <= self.precision {
            return Ok(self.clone());
        }
        if bits > self.cap {
            return Err(Error::PrecisionExhausted {
                what: "embedding refinement".into(),
                cap: self.cap,
            });
        }
        if self.degree() == 1 {
            let mut p = self.clone();
            p.precision = bits;
            p.embeddings = vec![self.embeddings[0].with_prec(bits)];
            return Ok(p);
        }
        let (iso, used) = isolate_escalating(&self.minpoly, &self.approx, bits, self.cap)?;
        let mut p = self.clone();
        p.precision = used;
        p.embeddings = iso.iter().map(root_ball).collect();
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn minpoly_i64(&self) -> Vec<i64> {
        self.minpoly
            .iter()
            .map(|c| c.to_i64().unwrap_or(i64::MAX))
            .collect()
    }

    pub fn minpoly_string(&self) -> String {
        format_poly(&self.minpoly)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap.max(self.precision);
        self
    }

    pub fn irreducibility_verified(&self) -> bool {
        self.irreducibility_verified
    }

    /// Enclosure of `β`.
    pub fn root_beta(&self) -> &Ball {
        &self.embeddings[0].re
    }

    pub fn beta_f64(&self) -> f64 {
        self.approx[0].re
    }

    /// Enclosures of `β_2, …, β_r`.
    pub fn conjugates(&self) -> &[ComplexBall] {
        &self.embeddings[1..]
    }

    /// Enclosure of the `q`-th root, `1 <= q <= r`.
    pub fn embedding(&self, q: usize) -> &ComplexBall {
        &self.embeddings[q - 1]
    }

    /// Floating-point approximations of all roots, in embedding order.
    pub fn approx_roots(&self) -> &[Complex64] {
        &self.approx
    }

    /// Upper bound for `|β_q|`.
    pub fn conjugate_abs_upper(&self, q: usize) -> f64 {
        upper_f64(&self.embedding(q).abs())
    }

    pub fn zero(&self) -> BetaInt {
        BetaInt::zero(self.degree())
    }

    pub fn one(&self) -> BetaInt {
        BetaInt::one(self.degree())
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> BetaInt {
        BetaInt::from_int(n, self.degree())
    }

    /// `β` as an element (for `r = 1` this is the integer `β`).
    pub fn beta(&self) -> BetaInt {
        self.mul_beta(&self.one())
    }

    pub fn mul(&self, x: &BetaInt, y: &BetaInt) -> BetaInt {
        BetaInt::new(element::mul_reduce(x.coords(), y.coords(), &self.minpoly))
    }

    pub fn mul_beta(&self, x: &BetaInt) -> BetaInt {
        let mut c = Vec::with_capacity(self.degree() + 1);
        c.push(BigInt::zero());
        c.extend(x.coords().iter().cloned());
        BetaInt::new(element::reduce(c, &self.minpoly))
    }

    pub fn pow(&self, x: &BetaInt, mut k: u64) -> BetaInt {
        let mut acc = self.one();
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn beta_pow(&self, k: u64) -> BetaInt {
        self.pow(&self.beta(), k)
    }

    pub fn qmul(&self, x: &QBeta, y: &QBeta) -> QBeta {
        QBeta::new(element::mul_reduce(x.coords(), y.coords(), &self.minpoly))
    }

    pub fn qmul_beta(&self, x: &QBeta) -> QBeta {
        let mut c = Vec::with_capacity(self.degree() + 1);
        c.push(BigRational::zero());
        c.extend(x.coords().iter().cloned());
        QBeta::new(element::reduce(c, &self.minpoly))
    }

    /// Exact quotient, by solving the linear system of multiplication by
    /// `den` over `ℚ`.
    #[allow(clippy::needless_range_loop)]
    pub fn qdiv(&self, num: &QBeta, den: &QBeta) -> Result<QBeta> {
        let r = self.degree();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Column j of the matrix is den·β^j.
        let mut cols = Vec::with_capacity(r);
        let mut col = den.clone();
        for _ in 0..r {
            cols.push(col.clone());
            col = self.qmul_beta(&col);
        }
        let mut a: Vec<Vec<BigRational>> = (0..r)
            .map(|i| {
                let mut row: Vec<BigRational> =
                    cols.iter().map(|c| c.coords()[i].clone()).collect();
                row.push(num.coords()[i].clone());
                row
            })
            .collect();
        for c in 0..r {
            let p = (c..r)
                .find(|&i| !a[i][c].is_zero())
                .ok_or(Error::DivisionByZero)?;
            a.swap(c, p);
            let piv = a[c][c].clone();
            for v in a[c].iter_mut() {
                *v = &*v / &piv;
            }
            for i in 0..r {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in c..=r {
                        let t = &f * &a[c][j];
                        a[i][j] = &a[i][j] - &t;
                    }
                }
            }
        }
        Ok(QBeta::new(
            a.into_iter().map(|row| row[r].clone()).collect(),
        ))
    }

    /// Power sums `Σ_q β_q^k` for `k = 0..=n` by Newton's identities.
    pub fn power_sums(&self, n: usize) -> Vec<BigInt> {
        let r = self.degree();
        let c = &self.minpoly;
        let mut p = vec![BigInt::from(r)];
        for k in 1..=n {
            let mut s = BigInt::zero();
            for i in 1..=k.min(r) {
                if i < k {
                    s += &c[r - i] * &p[k - i];
                } else {
                    s += &c[r - k] * BigInt::from(k);
                }
            }
            p.push(-s);
        }
        p
    }

    /// Exact trace `Σ_q x_q`.
    pub fn trace(&self, x: &BetaInt) -> BigInt {
        let ps = self.power_sums(self.degree());
        x.coords().iter().zip(&ps).map(|(m, s)| m * s).sum()
    }

    fn horner(&self, x: &BetaInt, root: &ComplexBall) -> ComplexBall {
        let prec = root.prec();
        let mut acc = ComplexBall::zero(prec);
        for m in x.coords().iter().rev() {
            acc = acc.mul(root).add(&ComplexBall::from_int(m, prec));
        }
        acc
    }

    /// Enclosure of `x` under the `q`-th embedding, of radius at most
    /// `2^(-precision/2)`.
    pub fn embed(&self, x: &BetaInt, q: usize) -> Result<ComplexBall> {
        assert!(
            (1..=self.degree()).contains(&q),
            "embedding index out of range"
        );
        if let Some(n) = x.as_integer() {
            return Ok(ComplexBall::from_int(n, self.precision));
        }
        let target = self.precision / 2;
        let mut cur = std::borrow::Cow::Borrowed(self);
        loop {
            let v = self.horner(x, cur.embedding(q));
            if v.radius_at_most_pow2(target) {
                return Ok(v);
            }
            if cur.precision >= self.cap {
                return Err(Error::PrecisionExhausted {
                    what: format!("embedding of {x}"),
                    cap: self.cap,
                });
            }
            let next = (cur.precision * 2).min(self.cap);
            cur = std::borrow::Cow::Owned(cur.at_precision(next)?);
        }
    }

    pub fn embed_q(&self, x: &QBeta, q: usize) -> Result<ComplexBall> {
        let (num, den) = x.split();
        let v = self.embed(&num, q)?;
        let d = Ball::from_int(&den, v.prec());
        let inv = d.recip().ok_or(Error::DivisionByZero)?;
        Ok(ComplexBall::new(v.re.mul(&inv), v.im.mul(&inv)))
    }

    /// Real value of `x`, rounded to `f64`.
    pub fn to_f64(&self, x: &BetaInt) -> f64 {
        match self.embed(x, 1) {
            Ok(b) => b.re.mid_f64(),
            Err(_) => fallback_f64(x, self.beta_f64()),
        }
    }

    pub fn qbeta_to_f64(&self, x: &QBeta) -> f64 {
        match self.embed_q(x, 1) {
            Ok(b) => b.re.mid_f64(),
            Err(_) => {
                let (n, d) = x.split();
                fallback_f64(&n, self.beta_f64()) / d.to_f64().unwrap_or(f64::INFINITY)
            }
        }
    }

    /// `frac(zβᵏ)` through the trace identity: `zβᵏ + Σ_{q≥2} z_q β_qᵏ` is a
    /// rational integer, so only the small conjugate terms are evaluated.
    pub fn frac_beta_power(&self, z: &BetaInt, k: u64) -> Result<FracPart> {
        if self.degree() == 1 || z.is_zero() {
            return Ok(FracPart::zero());
        }
        if self.mul(z, &self.beta_pow(k)).as_integer().is_some() {
            return Ok(FracPart::zero());
        }
        let mut cur = std::borrow::Cow::Borrowed(self);
        loop {
            let prec = cur.precision;
            let mut s = ComplexBall::zero(prec);
            for q in 2..=self.degree() {
                let root = cur.embedding(q);
                s = s.add(&self.horner(z, root).mul(&root.pow(k)));
            }
            if let Some(f) = frac_of_neg(&s.re) {
                return Ok(f);
            }
            if prec >= self.cap {
                return Err(Error::PrecisionExhausted {
                    what: format!("frac({z}·β^{k})"),
                    cap: self.cap,
                });
            }
            cur = std::borrow::Cow::Owned(cur.at_precision((prec * 2).min(self.cap))?);
        }
    }

    /// `frac(zβʲ)` for `j = 0..=k_max`, sharing the conjugate powers.
    pub fn frac_beta_powers(&self, z: &BetaInt, k_max: u64) -> Result<Vec<FracPart>> {
        let n = k_max as usize + 1;
        if self.degree() == 1 || z.is_zero() {
            return Ok(vec![FracPart::zero(); n]);
        }
        let mut integral = Vec::with_capacity(n);
        let mut w = z.clone();
        for _ in 0..n {
            integral.push(w.as_integer().is_some());
            w = self.mul_beta(&w);
        }
        let mut cur = std::borrow::Cow::Borrowed(self);
        'escalate: loop {
            let prec = cur.precision;
            let mut terms: Vec<ComplexBall> = (2..=self.degree())
                .map(|q| self.horner(z, cur.embedding(q)))
                .collect();
            let mut out = Vec::with_capacity(n);
            for &is_int in &integral {
                if is_int {
                    out.push(FracPart::zero());
                } else {
                    let s = terms.iter().fold(ComplexBall::zero(prec), |a, t| a.add(t));
                    match frac_of_neg(&s.re) {
                        Some(f) => out.push(f),
                        None => {
                            if prec >= self.cap {
                                return Err(Error::PrecisionExhausted {
                                    what: format!("frac({z}·β^{})", out.len()),
                                    cap: self.cap,
                                });
                            }
                            cur = std::borrow::Cow::Owned(
                                cur.at_precision((prec * 2).min(self.cap))?,
                            );
                            continue 'escalate;
                        }
                    }
                }
                for (i, t) in terms.iter_mut().enumerate() {
                    *t = t.mul(cur.embedding(i + 2));
                }
            }
            return Ok(out);
        }
    }
}

/// `frac(-s)` when the floor of `-s` is certified.
fn frac_of_neg(s: &Ball) -> Option<FracPart> {
    let v = s.neg();
    let fl = v.floor_unambiguous()?;
    let f = v.sub(&Ball::from_int(&fl, v.prec()));
    let mut value = f.mid_f64().max(0.0);
    if value >= 1.0 {
        value = 1.0 - f64::EPSILON / 2.0;
    }
    Some(FracPart {
        value,
        error: f.rad_f64() + f64::EPSILON,
        exact: false,
    })
}

fn fallback_f64(x: &BetaInt, beta: f64) -> f64 {
    x.coords()
        .iter()
        .rev()
        .fold(0.0, |acc, m| acc * beta + m.to_f64().unwrap_or(f64::NAN))
}

/// Upper bound of a ball as `f64`, rounded outward.
pub(crate) fn upper_f64(b: &Ball) -> f64 {
    let v = crate::ball::scaled_to_f64(&b.hi_scaled(), b.prec());
    v + v.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE
}

fn format_c64(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.10}", z.re)
    } else {
        format!("{:.10}{:+.10}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> PisotNumber {
        make_pisot(&[-1, -1, 1], 128).unwrap()
    }

    #[test]
    fn make_pisot_examples() {
        let g = golden();
        assert!((g.beta_f64() - 1.618_033_988_7).abs() < 1e-10);
        assert!((g.conjugates()[0].re.mid_f64() + 0.618_033_988_7).abs() < 1e-10);
        let two = make_pisot(&[-2, 1], 128).unwrap();
        assert_eq!(two.degree(), 1);
        assert!(two.conjugates().is_empty());
        assert!(two.root_beta().is_exact());
        let p = make_pisot(&[1, -3, 1], 128).unwrap();
        assert!((p.beta_f64() - 2.618_033_988_7).abs() < 1e-10);
        assert!((p.conjugates()[0].re.mid_f64() - 0.381_966_011_3).abs() < 1e-10);
        match make_pisot(&[-3, -1, 1], 128) {
            Err(Error::NotPisot { root, .. }) => assert!(root.starts_with("-1.3027")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejections() {
        assert!(matches!(make_pisot(&[1, 2], 128), Err(Error::NotMonic(_))));
        assert!(matches!(
            make_pisot(&[-1, 0, 1], 128),
            Err(Error::Reducible { .. })
        ));
        assert!(matches!(
            make_pisot(&[1, 2, 1], 128),
            Err(Error::Reducible { .. })
        ));
        // (x² - x - 1)(x² + x + 1) has no rational root.
        assert!(matches!(
            make_pisot(&[-1, -2, -1, 0, 1], 128),
            Err(Error::Reducible { .. })
        ));
        // Salem: x⁴ - x³ - x² - x + 1.
        assert!(matches!(
            make_pisot(&[1, -1, -1, -1, 1], 128),
            Err(Error::NotPisot { .. })
        ));
        assert!(matches!(
            make_pisot(&[-1, 1], 128),
            Err(Error::NotPisot { .. })
        ));
        // x² + x + 1: roots on the unit circle, caught as reciprocal only above degree 2.
        assert!(matches!(
            make_pisot(&[1, 1, 1], 128),
            Err(Error::NotPisot { .. })
        ));
    }

    #[test]
    fn cubic_and_quartic_pisot() {
        let plastic = make_pisot(&[-1, -1, 0, 1], 128).unwrap();
        assert!((plastic.beta_f64() - 1.324_717_957_2).abs() < 1e-10);
        assert_eq!(plastic.conjugates().len(), 2);
        let trib = make_pisot(&[-1, -1, -1, 1], 128).unwrap();
        assert!((trib.beta_f64() - 1.839_286_755_2).abs() < 1e-10);
        let q = make_pisot(&[-1, -1, -1, -1, 1], 128).unwrap();
        assert!((q.beta_f64() - 1.927_561_975_5).abs() < 1e-10);
    }

    #[test]
    fn ring_examples() {
        let g = golden();
        let b = BetaInt::from_i64s(&[0, 1]);
        assert_eq!(g.mul(&b, &b), BetaInt::from_i64s(&[1, 1]));
        let x = BetaInt::from_i64s(&[5, -2]);
        assert_eq!(g.mul(&g.one(), &x), x);
        assert_eq!(g.pow(&b, 10), BetaInt::from_i64s(&[34, 55]));
        assert_eq!(g.beta_pow(10), BetaInt::from_i64s(&[34, 55]));
    }

    #[test]
    fn embed_examples() {
        let g = golden();
        let x = BetaInt::from_i64s(&[1, 1]);
        let e1 = g.embed(&x, 1).unwrap();
        assert!((e1.re.mid_f64() - 2.618_033_988_7).abs() < 1e-10);
        assert!(e1.radius_at_most_pow2(64));
        let e2 = g.embed(&x, 2).unwrap();
        assert!((e2.re.mid_f64() - 0.381_966_011_3).abs() < 1e-10);
        let two = make_pisot(&[-2, 1], 128).unwrap();
        let seven = g_int(&two, 7);
        let e = two.embed(&seven, 1).unwrap();
        assert!(e.re.is_exact());
        assert_eq!(e.re.mid_f64(), 7.0);
    }

    fn g_int(p: &PisotNumber, n: i64) -> BetaInt {
        p.from_int(n)
    }

    #[test]
    fn embed_escalates_for_large_coordinates() {
        let g = make_pisot(&[-1, -1, 1], 64).unwrap();
        let x = g.beta_pow(300);
        let e = g.embed(&x, 2).unwrap();
        assert!(e.radius_at_most_pow2(32));
        assert!(e.re.mid_f64().abs() < 1e-9);
    }

    #[test]
    fn frac_examples() {
        let g = golden();
        let one = g.one();
        let f1 = g.frac_beta_power(&one, 1).unwrap();
        assert!((f1.value - 0.618_033_988_7).abs() < 1e-10);
        let f10 = g.frac_beta_power(&one, 10).unwrap();
        assert!((f10.value - 0.991_869_381_2).abs() < 1e-10);
        assert!(f10.error < 1e-15);
        let two = make_pisot(&[-2, 1], 128).unwrap();
        let f = two.frac_beta_power(&two.from_int(3), 5).unwrap();
        assert!(f.exact && f.value == 0.0);
        // (β - 1)·β = 1 exactly.
        let u = BetaInt::from_i64s(&[-1, 1]);
        assert!(g.frac_beta_power(&u, 1).unwrap().exact);
    }

    #[test]
    fn frac_batch_matches_single() {
        let g = make_pisot(&[-1, -1, 0, 1], 128).unwrap();
        let z = BetaInt::from_i64s(&[2, -1, 1]);
        let batch = g.frac_beta_powers(&z, 40).unwrap();
        for (k, f) in batch.iter().enumerate() {
            let s = g.frac_beta_power(&z, k as u64).unwrap();
            assert!((f.value - s.value).abs() <= f.error + s.error, "k = {k}");
        }
    }

    #[test]
    fn qdiv_examples() {
        let g = golden();
        let b = QBeta::from(&BetaInt::from_i64s(&[0, 1]));
        let one = QBeta::from_int(1, 2);
        assert_eq!(g.qdiv(&b, &b).unwrap(), one);
        let bm1 = QBeta::from(&BetaInt::from_i64s(&[-1, 1]));
        assert_eq!(g.qdiv(&one, &bm1).unwrap(), b);
        let b2m1 = QBeta::from(&BetaInt::from_i64s(&[0, 1])); // β² - 1 = β
        let q = g.qdiv(&one, &b2m1).unwrap();
        assert_eq!(q, bm1);
        assert_eq!(g.qmul(&q, &b2m1), one);
        assert!(matches!(
            g.qdiv(&one, &QBeta::zero(2)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn traces() {
        let g = golden();
        // Lucas numbers.
        assert_eq!(g.power_sums(10)[10], BigInt::from(123));
        assert_eq!(g.trace(&g.beta_pow(10)), BigInt::from(123));
        let t = make_pisot(&[-1, -1, -1, 1], 128).unwrap();
        let ps = t.power_sums(5);
        let want: Vec<BigInt> = [3, 1, 3, 7, 11, 21]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(ps, want);
    }

    #[test]
    fn parse_minpoly_list() {
        assert_eq!(parse_minpoly("-1, -1,1").unwrap(), vec![-1, -1, 1]);
        assert!(parse_minpoly("1,x").is_err());
    }
}
