//! Exact Gaussian-rational scalars `re + im·i` with `re, im ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: Rational,
    im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Scalar { re, im: Rational::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::real(Rational::from_integer(BigInt::from(v)))
    }

    /// `num / den` as a real scalar. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::real(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        Scalar { re: Rational::zero(), im: Rational::one() }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Scalar {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `|re| + |im|`, a rational upper bound for the modulus.
    pub fn majorant(&self) -> Rational {
        self.re.abs() + self.im.abs()
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::real(Rational::one())
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(v: Rational) -> Self {
        Scalar::real(v)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::real(&self.re * &rhs.re);
        }
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `p/q`, `r/s*i` or `p/q+r/s*i`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => f.write_str(&fmt_rational(&self.re)),
            (true, false) => write!(f, "{}*i", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}*i", fmt_rational(&self.re), sign, fmt_rational(&self.im.abs()))
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_scalar(s)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Format(format!("bad rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(num, den))
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    re: [String; 2],
    im: [String; 2],
}

fn pair(q: &Rational) -> [String; 2] {
    [q.numer().to_string(), q.denom().to_string()]
}

fn unpair(p: &[String; 2]) -> Result<Rational> {
    parse_rational(&format!("{}/{}", p[0], p[1]))
}

/// Stored as numerator/denominator pairs in lowest terms.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScalarRepr { re: pair(&self.re), im: pair(&self.im) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ScalarRepr::deserialize(d)?;
        let re = unpair(&r.re).map_err(serde::de::Error::custom)?;
        let im = unpair(&r.im).map_err(serde::de::Error::custom)?;
        Ok(Scalar { re, im })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: i64, im: i64) -> Scalar {
        Scalar::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(c(1, 0) * c(0, 1), c(0, 1));
        assert_eq!(c(1, 1) * c(1, -1), c(2, 0));
        let a = c(3, -4);
        assert_eq!(a.checked_div(&a).unwrap(), Scalar::one());
        assert_eq!(a.checked_div(&Scalar::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn majorant_examples() {
        assert_eq!(Scalar::zero().majorant(), Rational::zero());
        assert_eq!(c(3, -4).majorant(), Rational::from_integer(7.into()));
        let (a, b) = (c(1, 1), c(1, -1));
        assert_eq!((&a * &b).majorant(), Rational::from_integer(2.into()));
        assert!((&a * &b).majorant() <= a.majorant() * b.majorant());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(c(0, 3).to_string(), "3*i");
        assert_eq!(Scalar::new(Rational::new(1.into(), 2.into()), Rational::new((-3).into(), 4.into())).to_string(), "1/2-3/4*i");
        assert_eq!(c(0, 0).to_string(), "0");
    }

    #[test]
    fn json_stores_lowest_terms() {
        let s = Scalar::ratio(2, -4);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"re":["-1","2"],"im":["0","1"]}"#);
        assert_eq!(serde_json::from_str::<Scalar>(&j).unwrap(), s);
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..9, -20i64..20, 1i64..9).prop_map(|(a, b, c, d)| {
            Scalar::new(Rational::new(a.into(), b.into()), Rational::new(c.into(), d.into()))
        })
    }

    proptest! {
        #[test]
        fn exact_no_drift(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn majorant_sub_additive_and_multiplicative(a in arb_scalar(), b in arb_scalar()) {
            prop_assert!((&a + &b).majorant() <= a.majorant() + b.majorant());
            prop_assert!((&a * &b).majorant() <= a.majorant() * b.majorant());
            prop_assert_eq!(a.majorant().is_zero(), a.is_zero());
        }

        #[test]
        fn field_inverse(a in arb_scalar()) {
            prop_assume!(!a.is_zero());
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        }

        #[test]
        fn text_roundtrip(a in arb_scalar()) {
            prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
        }
    }
}
