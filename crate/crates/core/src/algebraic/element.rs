use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Element `m₀ + m₁β + … + m_{r-1}β^{r-1}` of `ℤ[β]` in the power basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BetaInt {
    coords: Vec<BigInt>,
}

impl BetaInt {
    pub fn new(coords: Vec<BigInt>) -> Self {
        assert!(!coords.is_empty(), "degree must be at least 1");
        BetaInt { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        BetaInt::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        BetaInt::new(vec![BigInt::zero(); degree])
    }

    pub fn from_int(n: impl Into<BigInt>, degree: usize) -> Self {
        let mut z = BetaInt::zero(degree);
        z.coords[0] = n.into();
        z
    }

    pub fn one(degree: usize) -> Self {
        BetaInt::from_int(1, degree)
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `Some(n)` when the element is the rational integer `n`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coords[0])
    }

    pub fn scale(&self, s: &BigInt) -> BetaInt {
        BetaInt::new(self.coords.iter().map(|c| c * s).collect())
    }

    /// Largest absolute coordinate.
    pub fn height(&self) -> BigInt {
        self.coords
            .iter()
            .map(num_traits::Signed::abs)
            .max()
            .unwrap_or_default()
    }
}

impl Add for &BetaInt {
    type Output = BetaInt;
    fn add(self, rhs: &BetaInt) -> BetaInt {
        assert_eq!(self.degree(), rhs.degree());
        BetaInt::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &BetaInt {
    type Output = BetaInt;
    fn sub(self, rhs: &BetaInt) -> BetaInt {
        assert_eq!(self.degree(), rhs.degree());
        BetaInt::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &BetaInt {
    type Output = BetaInt;
    fn neg(self) -> BetaInt {
        BetaInt::new(self.coords.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for BetaInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Element of `ℚ(β)` with rational coordinates in the power basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QBeta {
    coords: Vec<BigRational>,
}

impl QBeta {
    pub fn new(coords: Vec<BigRational>) -> Self {
        assert!(!coords.is_empty(), "degree must be at least 1");
        QBeta { coords }
    }

    pub fn zero(degree: usize) -> Self {
        QBeta::new(vec![BigRational::zero(); degree])
    }

    pub fn from_int(n: impl Into<BigInt>, degree: usize) -> Self {
        QBeta::from(&BetaInt::from_int(n, degree))
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Write the element as `numerator / denominator` with an integral
    /// numerator and a positive integer denominator.
    pub fn split(&self) -> (BetaInt, BigInt) {
        let den = self
            .coords
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = self
            .coords
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        (BetaInt::new(num), den)
    }

    pub fn scale(&self, s: &BigRational) -> QBeta {
        QBeta::new(self.coords.iter().map(|c| c * s).collect())
    }

    /// Coordinates as `"p/q"` (or `"p"`) strings.
    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

impl From<&BetaInt> for QBeta {
    fn from(x: &BetaInt) -> Self {
        QBeta::new(
            x.coords
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl Add for &QBeta {
    type Output = QBeta;
    fn add(self, rhs: &QBeta) -> QBeta {
        assert_eq!(self.degree(), rhs.degree());
        QBeta::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &QBeta {
    type Output = QBeta;
    fn sub(self, rhs: &QBeta) -> QBeta {
        assert_eq!(self.degree(), rhs.degree());
        QBeta::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &QBeta {
    type Output = QBeta;
    fn neg(self) -> QBeta {
        QBeta::new(self.coords.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for QBeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coord_strings().join(","))
    }
}

/// Multiply two coordinate vectors and reduce modulo the monic minimal
/// polynomial (constant term first).
pub(crate) fn mul_reduce<T>(x: &[T], y: &[T], minpoly: &[BigInt]) -> Vec<T>
where
    T: Clone + Zero + From<BigInt>,
    for<'a> &'a T: Mul<&'a T, Output = T> + Add<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    let r = minpoly.len() - 1;
    let mut prod = vec![T::zero(); 2 * r - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            let t = a * b;
            prod[i + j] = &prod[i + j] + &t;
        }
    }
    reduce(prod, minpoly)
}

/// Reduce a polynomial in `β` of any length to the power basis.
pub(crate) fn reduce<T>(mut prod: Vec<T>, minpoly: &[BigInt]) -> Vec<T>
where
    T: Clone + Zero + From<BigInt>,
    for<'a> &'a T: Mul<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    let r = minpoly.len() - 1;
    let lower: Vec<T> = minpoly[..r].iter().map(|c| T::from(c.clone())).collect();
    // β^r = -Σ_{i<r} a_i β^i
    for k in (r..prod.len()).rev() {
        let lead = prod[k].clone();
        if lead.is_zero() {
            continue;
        }
        for (i, a) in lower.iter().enumerate() {
            let t = &lead * a;
            prod[k - r + i] = &prod[k - r + i] - &t;
        }
        prod[k] = T::zero();
    }
    prod.truncate(r);
    while prod.len() < r {
        prod.push(T::zero());
    }
    prod
}

impl<'a> Mul<&'a BigInt> for &'a BetaInt {
    type Output = BetaInt;
    fn mul(self, rhs: &'a BigInt) -> BetaInt {
        self.scale(rhs)
    }
}
