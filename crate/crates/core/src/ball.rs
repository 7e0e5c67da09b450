//! Fixed-point ball arithmetic.
//!
//! A [`Ball`] at precision `p` stores integers `mid` and `rad >= 0` and
//! denotes the closed interval `[(mid - rad) / 2^p, (mid + rad) / 2^p]`.
//! Every operation returns a ball containing the exact result of the
//! operation applied to any points of its inputs. Rounding is folded into
//! the radius, so the enclosure property holds at every precision.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

fn shr_floor(x: &BigInt, bits: u32) -> BigInt {
    x.div_floor(&(BigInt::one() << bits))
}

fn shr_ceil(x: &BigInt, bits: u32) -> BigInt {
    x.div_ceil(&(BigInt::one() << bits))
}

/// `x / 2^shift` as an `f64`, without overflowing the conversion.
pub(crate) fn scaled_to_f64(x: &BigInt, shift: u32) -> f64 {
    let drop = x.bits().saturating_sub(60) as u32;
    let head = (x >> drop).to_f64().unwrap_or(0.0);
    mul_pow2(head, drop as i64 - shift as i64)
}

/// `v · 2^e`, in steps so that no intermediate power over- or underflows.
fn mul_pow2(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

impl Ball {
    pub fn new(mid: BigInt, rad: BigInt, prec: u32) -> Self {
        debug_assert!(!rad.is_negative());
        Ball { mid, rad, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Ball::new(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        Ball::new(n << prec, BigInt::zero(), prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Ball::from_int(&BigInt::from(n), prec)
    }

    /// Ball whose scaled endpoints are `lo` and `hi` (`lo <= hi`).
    pub fn from_scaled_interval(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        let rad = &hi - &mid;
        Ball::new(mid, rad, prec)
    }

    /// Ball enclosing an `f64`.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        let (mant, exp) = decompose(x);
        let shift = exp + prec as i64;
        if shift >= 0 {
            Ball::new(mant << shift as u32, BigInt::zero(), prec)
        } else {
            let s = (-shift) as u32;
            let lo = shr_floor(&mant, s);
            let hi = shr_ceil(&mant, s);
            Ball::from_scaled_interval(lo, hi, prec)
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid_scaled(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad_scaled(&self) -> &BigInt {
        &self.rad
    }

    pub fn lo_scaled(&self) -> BigInt {
        &self.mid - &self.rad
    }

    pub fn hi_scaled(&self) -> BigInt {
        &self.mid + &self.rad
    }

    pub fn mid_f64(&self) -> f64 {
        scaled_to_f64(&self.mid, self.prec)
    }

    /// An `f64` upper bound for the radius.
    pub fn rad_f64(&self) -> f64 {
        let r = scaled_to_f64(&self.rad, self.prec);
        if r == 0.0 && !self.rad.is_zero() {
            f64::MIN_POSITIVE
        } else {
            r * (1.0 + 4.0 * f64::EPSILON)
        }
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo_scaled().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi_scaled().is_negative()
    }

    /// Radius is at most `2^(-bits)`.
    pub fn radius_at_most_pow2(&self, bits: u32) -> bool {
        if bits >= self.prec {
            return self.rad.is_zero();
        }
        self.rad <= BigInt::one() << (self.prec - bits)
    }

    /// Re-express at another precision (widening when precision drops).
    pub fn with_prec(&self, prec: u32) -> Ball {
        use std::cmp::Ordering::*;
        match prec.cmp(&self.prec) {
            Equal => self.clone(),
            Greater => {
                let s = prec - self.prec;
                Ball::new(&self.mid << s, &self.rad << s, prec)
            }
            Less => {
                let s = self.prec - prec;
                let lo = shr_floor(&self.lo_scaled(), s);
                let hi = shr_ceil(&self.hi_scaled(), s);
                Ball::from_scaled_interval(lo, hi, prec)
            }
        }
    }

    fn same_prec(&self, other: &Ball) {
        assert_eq!(self.prec, other.prec, "ball precision mismatch");
    }

    pub fn add(&self, other: &Ball) -> Ball {
        self.same_prec(other);
        Ball::new(&self.mid + &other.mid, &self.rad + &other.rad, self.prec)
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        self.same_prec(other);
        Ball::new(&self.mid - &other.mid, &self.rad + &other.rad, self.prec)
    }

    pub fn neg(&self) -> Ball {
        Ball::new(-&self.mid, self.rad.clone(), self.prec)
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        self.same_prec(other);
        let p = self.prec;
        let prod = &self.mid * &other.mid;
        let mid = shr_floor(&prod, p);
        let spread =
            self.mid.abs() * &other.rad + other.mid.abs() * &self.rad + &self.rad * &other.rad;
        let mut rad = shr_ceil(&spread, p);
        if (&mid << p) != prod {
            rad += 1;
        }
        Ball::new(mid, rad, p)
    }

    pub fn mul_int(&self, n: &BigInt) -> Ball {
        Ball::new(&self.mid * n, &self.rad * n.abs(), self.prec)
    }

    pub fn sqr(&self) -> Ball {
        let a = self.abs();
        a.mul(&a)
    }

    pub fn abs(&self) -> Ball {
        if !self.lo_scaled().is_negative() {
            self.clone()
        } else if !self.hi_scaled().is_positive() {
            self.neg()
        } else {
            let m = self.lo_scaled().abs().max(self.hi_scaled().abs());
            Ball::from_scaled_interval(BigInt::zero(), m, self.prec)
        }
    }

    /// Square root of the nonnegative part of the ball.
    pub fn sqrt(&self) -> Ball {
        let p = self.prec;
        let lo = self.lo_scaled().max(BigInt::zero());
        let hi = self.hi_scaled().max(BigInt::zero());
        let lo_s = (lo << p).sqrt();
        let hi_x = hi << p;
        let mut hi_s = hi_x.sqrt();
        if &hi_s * &hi_s != hi_x {
            hi_s += 1;
        }
        Ball::from_scaled_interval(lo_s, hi_s, p)
    }

    /// Reciprocal; `None` when the ball contains zero.
    pub fn recip(&self) -> Option<Ball> {
        if self.contains_zero() {
            return None;
        }
        let p = self.prec;
        let num = BigInt::one() << (2 * p);
        let (lo, hi) = (self.lo_scaled(), self.hi_scaled());
        // 1/x is decreasing on either side of zero, so [1/hi, 1/lo] in both cases.
        let rlo = num.div_floor(&hi);
        let rhi = num.div_ceil(&lo);
        Some(Ball::from_scaled_interval(rlo, rhi, p))
    }

    pub fn div(&self, other: &Ball) -> Option<Ball> {
        other.recip().map(|r| self.mul(&r))
    }

    /// Floor of every point of the ball, when they all share one.
    pub fn floor_unambiguous(&self) -> Option<BigInt> {
        let lo = shr_floor(&self.lo_scaled(), self.prec);
        let hi = shr_floor(&self.hi_scaled(), self.prec);
        (lo == hi).then_some(lo)
    }

    /// Strictly less than `n` at every point.
    pub fn lt_int(&self, n: &BigInt) -> bool {
        self.hi_scaled() < (n << self.prec)
    }

    /// Strictly greater than `n` at every point.
    pub fn gt_int(&self, n: &BigInt) -> bool {
        self.lo_scaled() > (n << self.prec)
    }
}

fn decompose(x: f64) -> (BigInt, i64) {
    if x == 0.0 || !x.is_finite() {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    (BigInt::from_biguint(sign, mant.into()), e)
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e} ± {:.3e}", self.mid_f64(), self.rad_f64())
    }
}

/// Rectangular complex ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn new(re: Ball, im: Ball) -> Self {
        assert_eq!(re.prec, im.prec);
        ComplexBall { re, im }
    }

    pub fn real(re: Ball) -> Self {
        let p = re.prec;
        ComplexBall::new(re, Ball::zero(p))
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBall::real(Ball::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        ComplexBall::real(Ball::from_i64(1, prec))
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        ComplexBall::real(Ball::from_int(n, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        ComplexBall::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn add(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &ComplexBall) -> ComplexBall {
        if self.im.mid.is_zero()
            && self.im.rad.is_zero()
            && o.im.mid.is_zero()
            && o.im.rad.is_zero()
        {
            return ComplexBall::real(self.re.mul(&o.re));
        }
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        ComplexBall::new(re, im)
    }

    pub fn mul_int(&self, n: &BigInt) -> ComplexBall {
        ComplexBall::new(self.re.mul_int(n), self.im.mul_int(n))
    }

    pub fn pow(&self, mut k: u64) -> ComplexBall {
        let mut base = self.clone();
        let mut acc = ComplexBall::one(self.prec());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn abs_sq(&self) -> Ball {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn abs(&self) -> Ball {
        if self.im.is_exact() && self.im.mid.is_zero() {
            return self.re.abs();
        }
        self.abs_sq().sqrt()
    }

    /// Both components have radius at most `2^(-bits)`.
    pub fn radius_at_most_pow2(&self, bits: u32) -> bool {
        self.re.radius_at_most_pow2(bits) && self.im.radius_at_most_pow2(bits)
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.mid_f64(), self.im.mid_f64())
    }

    /// Upper bound for the distance of any point of the ball to its midpoint.
    pub fn rad_f64(&self) -> f64 {
        self.re.rad_f64().hypot(self.im.rad_f64())
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}
