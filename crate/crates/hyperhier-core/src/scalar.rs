//! Scalar values and the small ring interface shared by scalars, jets,
//! polynomials and univariate rational functions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// Commutative ring operations with partial division.
pub trait Algebra: Clone + Debug {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Returns `None` when `o` is not invertible.
    fn div(&self, o: &Self) -> Option<Self>;
    fn vanishes(&self) -> bool;
    /// The multiplicative identity in the same "shape" as `self`.
    fn one_like(&self) -> Self;

    fn powi(&self, n: u32) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A field element: exact rational or double.
pub trait Scalar: Algebra + PartialEq + Send + Sync + 'static {
    const MODE: Mode;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    fn to_text(&self) -> String;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Algebra for BigRational {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one_like(&self) -> Self {
        <BigRational as One>::one()
    }
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Exact;
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_text(&self) -> String {
        rational_text(self)
    }
    fn abs_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::NAN)
    }
}

impl Algebra for f64 {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if *o == 0.0 {
            None
        } else {
            Some(self / o)
        }
    }
    fn vanishes(&self) -> bool {
        *self == 0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(q: &BigRational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_text(&self) -> String {
        format!("{self:e}")
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` (optional leading minus) into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if Zero::is_zero(&d) {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["0", "-3", "1/2", "-7/3"] {
            assert_eq!(rational_text(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn powi_matches_repeated_product() {
        let q = rat(-2, 3);
        assert_eq!(q.powi(0), int(1));
        assert_eq!(q.powi(5), rat(-32, 243));
        assert_eq!(2.0f64.powi(10), 1024.0);
    }
}

/// The integer `n` in an algebra, built from `one` by doubling.
pub fn int_like<A: Algebra>(one: &A, n: &BigInt) -> A {
    let negative = n.sign() == num_bigint::Sign::Minus;
    let mag = n.magnitude();
    let mut acc = one.sub(one);
    for i in (0..mag.bits()).rev() {
        acc = acc.add(&acc);
        if mag.bit(i) {
            acc = acc.add(one);
        }
    }
    if negative {
        acc.neg()
    } else {
        acc
    }
}
