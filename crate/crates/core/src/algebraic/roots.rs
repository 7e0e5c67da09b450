//! Certified isolation of all complex roots of a square-free monic integer
//! polynomial.
//!
//! Approximations come from Aberth iteration in `f64`, are polished by
//! Newton steps in fixed-point arithmetic, and are then certified with the
//! Weierstrass inclusion disks `|z - zᵢ| <= n |W(zᵢ)|`,
//! `W(zᵢ) = p(zᵢ) / Π_{j≠i} (zᵢ - zⱼ)`: when the disks are pairwise
//! disjoint each contains exactly one root. The certificate is evaluated in
//! exact integer arithmetic on the dyadic centres.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const GUARD_BITS: u32 = 32;

#[derive(Clone, Debug)]
pub(crate) struct IsolatedRoot {
    /// Real and imaginary part of the centre, scaled by `2^prec`.
    pub re: BigInt,
    pub im: BigInt,
    /// Disk radius, scaled by `2^prec`.
    pub radius: BigInt,
    pub prec: u32,
}

impl IsolatedRoot {
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn approx(&self) -> Complex64 {
        Complex64::new(
            crate::ball::scaled_to_f64(&self.re, self.prec),
            crate::ball::scaled_to_f64(&self.im, self.prec),
        )
    }
}

/// Aberth–Ehrlich approximations of all roots.
pub(crate) fn approximate(poly: &[BigInt]) -> Vec<Complex64> {
    let n = poly.len() - 1;
    let coeffs: Vec<f64> = poly
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::MAX))
        .collect();
    if n == 1 {
        return vec![Complex64::new(-coeffs[0], 0.0)];
    }
    let bound = 1.0 + coeffs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let radius = bound.min(1e6);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius * 0.7,
                2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4,
            )
        })
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = eval(z[k]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[derive(Clone)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

fn fx_mul(a: &Fx, b: &Fx, q: u32) -> Fx {
    Fx {
        re: (&a.re * &b.re - &a.im * &b.im) >> q,
        im: (&a.re * &b.im + &a.im * &b.re) >> q,
    }
}

fn fx_eval(poly: &[BigInt], z: &Fx, q: u32) -> (Fx, Fx) {
    let zero = Fx {
        re: BigInt::zero(),
        im: BigInt::zero(),
    };
    let mut p = zero.clone();
    let mut dp = zero;
    for c in poly.iter().rev() {
        dp = fx_mul(&dp, z, q);
        dp.re += &p.re;
        dp.im += &p.im;
        p = fx_mul(&p, z, q);
        p.re += c << q;
    }
    (p, dp)
}

fn from_f64_scaled(x: f64, q: u32) -> BigInt {
    let b = crate::ball::Ball::from_f64(x, q);
    b.mid_scaled().clone()
}

/// Newton polish of one approximation to `prec` bits.
fn refine(poly: &[BigInt], z0: Complex64, force_real: bool, prec: u32) -> (BigInt, BigInt) {
    let q = prec + GUARD_BITS;
    let mut z = Fx {
        re: from_f64_scaled(z0.re, q),
        im: if force_real {
            BigInt::zero()
        } else {
            from_f64_scaled(z0.im, q)
        },
    };
    let iterations = 6 + (q as f64 / 40.0).log2().ceil().max(0.0) as usize;
    let tiny = BigInt::from(16);
    for _ in 0..iterations {
        let (p, dp) = fx_eval(poly, &z, q);
        let den = &dp.re * &dp.re + &dp.im * &dp.im;
        if den.is_zero() {
            break;
        }
        let sre = ((&p.re * &dp.re + &p.im * &dp.im) << q) / &den;
        let sim = ((&p.im * &dp.re - &p.re * &dp.im) << q) / &den;
        z.re -= &sre;
        z.im -= &sim;
        if sre.abs() <= tiny && sim.abs() <= tiny {
            break;
        }
    }
    (z.re >> GUARD_BITS, z.im >> GUARD_BITS)
}

fn ceil_sqrt(x: &BigInt) -> BigInt {
    let s = x.sqrt();
    if &s * &s == *x {
        s
    } else {
        s + 1
    }
}

/// Isolate all roots at `prec` bits, or `None` when the certificate fails
/// (more precision needed).
pub(crate) fn isolate(
    poly: &[BigInt],
    seeds: &[Complex64],
    prec: u32,
) -> Option<Vec<IsolatedRoot>> {
    let n = poly.len() - 1;
    if n == 1 {
        return Some(vec![IsolatedRoot {
            re: -&poly[0] << prec,
            im: BigInt::zero(),
            radius: BigInt::zero(),
            prec,
        }]);
    }
    let centers: Vec<(BigInt, BigInt)> = seeds
        .iter()
        .map(|&z| {
            let force_real = z.im.abs() < 1e-7 * z.norm().max(1.0);
            refine(poly, z, force_real, prec)
        })
        .collect();
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let (zr, zi) = &centers[i];
        // P = p(z)·2^{p·n} exactly.
        let (pr, pi) = scaled_eval(poly, zr, zi, prec);
        let mut dr = BigInt::one();
        let mut di = BigInt::zero();
        for (j, (wr, wi)) in centers.iter().enumerate() {
            if j == i {
                continue;
            }
            let ar = zr - wr;
            let ai = zi - wi;
            let nr = &dr * &ar - &di * &ai;
            let ni = &dr * &ai + &di * &ar;
            dr = nr;
            di = ni;
        }
        let dnorm = &dr * &dr + &di * &di;
        if dnorm.is_zero() {
            return None;
        }
        let pnorm = &pr * &pr + &pi * &pi;
        let n2 = BigInt::from((n * n) as u64);
        let ratio = (n2 * pnorm).div_ceil(&dnorm);
        radii.push(ceil_sqrt(&ratio));
    }
    let half = BigInt::one() << (prec - prec / 2);
    if radii.iter().any(|r| *r > half) {
        return None;
    }
    for i in 0..n {
        for j in i + 1..n {
            let dr = &centers[i].0 - &centers[j].0;
            let di = &centers[i].1 - &centers[j].1;
            let dist2 = &dr * &dr + &di * &di;
            let rsum = &radii[i] + &radii[j];
            if dist2 <= &rsum * &rsum {
                return None;
            }
        }
    }
    // A real centre whose disk is isolated encloses a real root, since the
    // disk is symmetric under conjugation and holds exactly one root.
    Some(
        centers
            .into_iter()
            .zip(radii)
            .map(|((re, im), radius)| IsolatedRoot {
                re,
                im,
                radius,
                prec,
            })
            .collect(),
    )
}

/// `p(Z / 2^prec) · 2^{prec·n}` for a Gaussian integer `Z`.
fn scaled_eval(poly: &[BigInt], zr: &BigInt, zi: &BigInt, prec: u32) -> (BigInt, BigInt) {
    let mut pr = BigInt::zero();
    let mut pi = BigInt::zero();
    // acc_k represents Σ_{j>=k} c_j Z^{j-k} 2^{p(n-j)}; multiply by Z and
    // add c_k·2^{p(n-k)} each step.
    let n = poly.len() - 1;
    for (k, c) in poly.iter().enumerate().rev() {
        let nr = &pr * zr - &pi * zi;
        let ni = &pr * zi + &pi * zr;
        pr = nr + (c << (prec as usize * (n - k)));
        pi = ni;
    }
    (pr, pi)
}
