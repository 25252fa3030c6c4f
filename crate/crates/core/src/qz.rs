//! Exact elements of `Q/Z` and of `(Q/Z)^k`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A rational number modulo 1, kept reduced in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QZ(BigRational);

impl QZ {
    pub fn zero() -> Self {
        QZ(BigRational::zero())
    }

    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Self::from_rational(BigRational::new(num.into(), den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let f = r.floor();
        QZ(r - f)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &QZ) -> QZ {
        Self::from_rational(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &QZ) -> QZ {
        Self::from_rational(&self.0 - &other.0)
    }

    pub fn neg(&self) -> QZ {
        Self::from_rational(-&self.0)
    }

    pub fn scale(&self, n: &BigInt) -> QZ {
        Self::from_rational(&self.0 * BigRational::from_integer(n.clone()))
    }

    /// `a/(b·n)` for the reduced representative `a/b`: the root whose
    /// numerator is unchanged.
    pub fn canonical_root(&self, n: u64) -> QZ {
        assert!(n >= 1, "root index must be positive");
        Self::from_rational(BigRational::new(
            self.numer().clone(),
            self.denom() * BigInt::from(n),
        ))
    }

    /// Additive order; equal to the reduced denominator.
    pub fn order(&self) -> BigInt {
        self.denom().clone()
    }

    /// The integer `k` in `[0, m)` with `self = k/m`, when the denominator divides `m`.
    pub fn numerator_over(&self, m: &BigInt) -> Option<BigInt> {
        let (q, r) = m.div_rem(self.denom());
        r.is_zero().then(|| q * self.numer())
    }
}

impl fmt::Display for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for QZ {
    type Err = Error;

    /// Accepts `"num/den"` with `den > 0`, or an integer. Input need not be
    /// reduced.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if !d.is_positive() {
            return Err(bad());
        }
        QZ::new(n, d)
    }
}

/// An element of `(Q/Z)^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QZVector(pub Vec<QZ>);

impl QZVector {
    pub fn zero(k: usize) -> Self {
        QZVector(vec![QZ::zero(); k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(QZ::is_zero)
    }

    pub fn coords(&self) -> &[QZ] {
        &self.0
    }

    fn zip(&self, other: &QZVector, f: impl Fn(&QZ, &QZ) -> QZ) -> QZVector {
        assert_eq!(self.len(), other.len(), "QZVector length mismatch");
        QZVector(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }

    pub fn add(&self, other: &QZVector) -> QZVector {
        self.zip(other, QZ::add)
    }

    pub fn sub(&self, other: &QZVector) -> QZVector {
        self.zip(other, QZ::sub)
    }

    pub fn neg(&self) -> QZVector {
        QZVector(self.0.iter().map(QZ::neg).collect())
    }

    pub fn scale(&self, n: &BigInt) -> QZVector {
        QZVector(self.0.iter().map(|c| c.scale(n)).collect())
    }

    pub fn canonical_root(&self, n: u64) -> QZVector {
        QZVector(self.0.iter().map(|c| c.canonical_root(n)).collect())
    }

    pub fn order(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }

    pub fn parse_strings<S: AsRef<str>>(items: &[S]) -> Result<QZVector> {
        items
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<_>>>()
            .map(QZVector)
    }
}

impl fmt::Display for QZVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> QZ {
        QZ::new(n, d).unwrap()
    }

    #[test]
    fn reduction_into_unit_interval() {
        assert_eq!(q(5, 4), q(1, 4));
        assert_eq!(q(-1, 3), q(2, 3));
        assert_eq!(q(4, 2), QZ::zero());
        assert_eq!(q(6, 8).to_string(), "3/4");
        assert_eq!(QZ::zero().to_string(), "0/1");
        assert!(QZ::new(1, 0).is_err());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q(1, 4).add(&q(1, 4)), q(1, 2));
        assert_eq!(q(1, 2).add(&q(1, 2)), QZ::zero());
        assert_eq!(q(1, 3).neg(), q(2, 3));
        assert_eq!(q(1, 9).scale(&BigInt::from(3)), q(1, 3));
        assert_eq!(q(2, 3).order(), BigInt::from(3));
    }

    #[test]
    fn canonical_roots() {
        assert_eq!(q(1, 3).canonical_root(3), q(1, 9));
        assert_eq!(QZ::zero().canonical_root(3), QZ::zero());
        assert_eq!(q(2, 3).canonical_root(2), q(1, 3));
        for (n, d) in [(1i64, 3i64), (2, 5), (3, 4), (0, 1)] {
            for k in 1..6u64 {
                let r = q(n, d).canonical_root(k);
                assert_eq!(r.scale(&BigInt::from(k)), q(n, d));
            }
        }
    }

    #[test]
    fn parse_and_format() {
        assert_eq!("1/9".parse::<QZ>().unwrap(), q(1, 9));
        assert_eq!("10/4".parse::<QZ>().unwrap(), q(1, 2));
        assert_eq!("0".parse::<QZ>().unwrap(), QZ::zero());
        assert!("1/-2".parse::<QZ>().is_err());
        assert!("x/2".parse::<QZ>().is_err());
        let v = QZVector(vec![q(1, 2), q(3, 4)]);
        assert_eq!(QZVector::parse_strings(&v.to_strings()).unwrap(), v);
        assert_eq!(v.order(), BigInt::from(4));
        assert_eq!(v.to_string(), "(1/2, 3/4)");
    }
}
