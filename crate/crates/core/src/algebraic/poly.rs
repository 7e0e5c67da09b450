//! Integer polynomial utilities (coefficients constant term first).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) fn eval(poly: &[BigInt], x: &BigInt) -> BigInt {
    poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

pub(crate) fn derivative(poly: &[BigInt]) -> Vec<BigInt> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

fn trim_q(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn rem_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    trim_q(&mut r);
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r.pop();
        trim_q(&mut r);
    }
    r
}

/// Greatest common divisor over ℚ, made primitive with integer coefficients.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let to_q = |p: &[BigInt]| {
        let mut v: Vec<BigRational> = p
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        trim_q(&mut v);
        v
    };
    let mut x = to_q(a);
    let mut y = to_q(b);
    while !y.is_empty() {
        let r = rem_q(&x, &y);
        x = y;
        y = r;
    }
    // Clear denominators and content.
    let lcm = x.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = x
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if content.is_zero() {
        return ints;
    }
    let sign = if ints.last().is_some_and(|c| c.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|c| c / &content * &sign).collect()
}

/// Positive divisors of `n`, or `None` when `n` is too large to enumerate.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// An integer root of a monic polynomial (rational roots of monic integer
/// polynomials are integers dividing the constant term).
pub(crate) fn integer_root(poly: &[BigInt]) -> Option<BigInt> {
    if poly[0].is_zero() {
        return Some(BigInt::zero());
    }
    for d in divisors(&poly[0])? {
        for cand in [d.clone(), -d] {
            if eval(poly, &cand).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

/// Monic quadratic factor `x² + a x + b` of a monic quartic, if one exists.
pub(crate) fn quartic_quadratic_factor(poly: &[BigInt]) -> Option<[BigInt; 3]> {
    debug_assert_eq!(poly.len(), 5);
    let (a0, a1, a2, a3) = (&poly[0], &poly[1], &poly[2], &poly[3]);
    if a0.is_zero() {
        return None;
    }
    // (x² + a x + b)(x² + c x + d): bd = a0, a + c = a3, b + d + ac = a2, ad + bc = a1.
    for b_abs in divisors(a0)? {
        for b in [b_abs.clone(), -b_abs] {
            let d = a0 / &b;
            // a² - a3·a + (a2 - b - d) = 0
            let disc = a3 * a3 - BigInt::from(4) * (a2 - &b - &d);
            if disc.is_negative() {
                continue;
            }
            let s = disc.sqrt();
            if &s * &s != disc {
                continue;
            }
            for num in [a3 + &s, a3 - &s] {
                if num.is_odd() {
                    continue;
                }
                let a = &num / 2;
                let c = a3 - &a;
                if &a * &d + &b * &c == *a1 {
                    return Some([b.clone(), a, BigInt::one()]);
                }
            }
        }
    }
    None
}

pub(crate) fn format_poly(poly: &[BigInt]) -> String {
    let mut terms = Vec::new();
    for (i, c) in poly.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        let coef = if i > 0 && c.is_one() {
            String::new()
        } else if i > 0 && *c == -BigInt::one() {
            "-".to_string()
        } else {
            c.to_string()
        };
        terms.push(format!("{coef}{mono}"));
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gcd_detects_repeated_factor() {
        // (x - 1)^2 (x + 2)
        let f = p(&[2, -3, 0, 1]);
        assert_eq!(gcd(&f, &derivative(&f)), p(&[-1, 1]));
        let g = p(&[-1, -1, 1]);
        assert_eq!(gcd(&g, &derivative(&g)), p(&[1]));
    }

    #[test]
    fn integer_roots() {
        assert_eq!(integer_root(&p(&[-6, 1, 1])), Some(BigInt::from(2)));
        assert_eq!(integer_root(&p(&[3, 4, 1])), Some(BigInt::from(-1)));
        assert_eq!(integer_root(&p(&[-1, -1, 1])), None);
        assert_eq!(integer_root(&p(&[0, -1, 1])), Some(BigInt::zero()));
    }

    #[test]
    fn quartic_factor_search() {
        // (x² - x - 1)(x² + 1) = x⁴ - x³ - x - 1
        let f = p(&[-1, -1, 0, -1, 1]);
        let q = quartic_quadratic_factor(&f).unwrap();
        let cand = vec![q[0].clone(), q[1].clone(), q[2].clone()];
        assert!(cand == p(&[1, 0, 1]) || cand == p(&[-1, -1, 1]));
        // x⁴ - x³ - 1 is irreducible
        assert!(quartic_quadratic_factor(&p(&[-1, 0, 0, -1, 1])).is_none());
    }

    #[test]
    fn formats() {
        assert_eq!(format_poly(&p(&[-1, -1, 1])), "x^2 - x - 1");
    }
}
