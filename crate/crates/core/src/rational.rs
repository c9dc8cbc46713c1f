//! Exact rationals, parameter points and the dimension / index newtypes.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::{Error, Result};

pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact value of a finite float (its binary expansion).
pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `n`, `n/d` or a decimal. The flag is true when the input went
/// through a binary float and so may differ from the decimal typed.
pub fn parse_rational(s: &str) -> Result<(Q, bool)> {
    let t = s.trim();
    let err = || Error::Parse(String::from(s));
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok((Q::new(n, d), false));
    }
    if let Ok(n) = BigInt::from_str(t) {
        return Ok((Q::from_integer(n), false));
    }
    let x = f64::from_str(t).map_err(|_| err())?;
    from_f64(x).map(|q| (q, true)).ok_or_else(err)
}

pub fn sign(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// A point of the (p,q) or (a,b) parameter plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint2 {
    pub x: Q,
    pub y: Q,
}

impl RationalPoint2 {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Self::new(int(x), int(y))
    }

    /// `(xn/xd, yn/yd)`
    pub fn frac(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Self::new(rat(xn, xd), rat(yn, yd))
    }

    pub fn origin() -> Self {
        Self::new(Q::zero(), Q::zero())
    }

    pub fn from_f64(x: f64, y: f64) -> Option<Self> {
        Some(Self::new(from_f64(x)?, from_f64(y)?))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }

    pub fn swap(&self) -> Self {
        Self::new(self.y.clone(), self.x.clone())
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for RationalPoint2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for RationalPoint2 {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RationalPoint2", 2)?;
        st.serialize_field("x", &self.x.to_string())?;
        st.serialize_field("y", &self.y.to_string())?;
        st.end()
    }
}

/// Even matrix dimension d >= 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(d: u32) -> Result<Self> {
        if d >= 4 && d % 2 == 0 {
            Ok(Self(d))
        } else {
            Err(Error::BadDimension(d))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn usize(self) -> usize {
        self.0 as usize
    }

    pub fn k(self, k: u32) -> Result<KIndex> {
        KIndex::new(self, k)
    }

    /// All admissible k, 1..=d.
    pub fn ks(self) -> impl Iterator<Item = KIndex> {
        (1..=self.0).map(KIndex)
    }

    pub(crate) fn q(self) -> Q {
        int(self.0 as i64)
    }

    pub(crate) fn i(self) -> i64 {
        self.0 as i64
    }

    /// d² − d − 2 = (d−2)(d+1), the recurring denominator.
    pub(crate) fn dd(self) -> i64 {
        let d = self.i();
        d * d - d - 2
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Positivity index 1 <= k <= d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KIndex(u32);

impl KIndex {
    pub fn new(d: Dimension, k: u32) -> Result<Self> {
        if k >= 1 && k <= d.get() {
            Ok(Self(k))
        } else {
            Err(Error::BadK { d: d.get(), k })
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn usize(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn i(self) -> i64 {
        self.0 as i64
    }

    pub fn is_even(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for KIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/8").unwrap(), (rat(1, 8), false));
        assert_eq!(parse_rational("-1/2").unwrap(), (rat(-1, 2), false));
        assert_eq!(parse_rational("3").unwrap(), (int(3), false));
        assert_eq!(parse_rational("0.5").unwrap(), (rat(1, 2), true));
        let (x, inexact) = parse_rational("0.1").unwrap();
        assert!(inexact);
        assert_ne!(x, rat(1, 10));
        assert_eq!(to_f64(&x), 0.1);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn dimension_guard() {
        assert!(Dimension::new(4).is_ok());
        assert_eq!(Dimension::new(5), Err(Error::BadDimension(5)));
        assert_eq!(Dimension::new(2), Err(Error::BadDimension(2)));
        let d = Dimension::new(6).unwrap();
        assert!(d.k(0).is_err());
        assert!(d.k(7).is_err());
        assert_eq!(d.ks().count(), 6);
    }

    #[test]
    fn reduced_form() {
        let p = RationalPoint2::frac(2, 4, -3, -9);
        assert_eq!(p.x, rat(1, 2));
        assert_eq!(p.y, rat(1, 3));
        assert_eq!(p.to_string(), "(1/2, 1/3)");
    }
}
