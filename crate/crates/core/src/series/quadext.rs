use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact element `a + b sqrt(2)` of the quadratic field Q(sqrt 2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Self::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    pub fn sqrt2() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b sqrt(2)`.
    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² - 2b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(2.into()) * &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // the norm of a nonzero element is nonzero since sqrt(2) is irrational
        let n = self.norm();
        Some(Self::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * std::f64::consts::SQRT_2
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        Self::from_ints(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
}

impl From<BigRational> for QuadExt {
    fn from(a: BigRational) -> Self {
        Self::rational(a)
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        let two = BigRational::from_integer(2.into());
        QuadExt::new(
            &self.a * &o.a + two * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a.clone(), -self.b.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $m(self, o: QuadExt) -> QuadExt {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl Div for QuadExt {
    type Output = QuadExt;
    /// Panics on division by zero, like `BigRational`.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: QuadExt) -> QuadExt {
        let inv = o.inv().expect("division by zero in Q(sqrt 2)");
        &self * &inv
    }
}

/// Formats a rational as `p/q` (the denominator is always written).
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Input(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `p/q` for rational elements, `p/q + r/s*sqrt2` or `p/q - r/s*sqrt2` otherwise.
impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&format_rational(&self.a));
        }
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{} {} {}*sqrt2",
            format_rational(&self.a),
            sign,
            format_rational(&self.b.abs())
        )
    }
}

impl FromStr for QuadExt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(body) = s.strip_suffix("*sqrt2") else {
            return Ok(QuadExt::rational(parse_rational(s)?));
        };
        let bad = || Error::Input(format!("not an element of Q(sqrt 2): {s:?}"));
        let (pos, sign) = body
            .rfind(" + ")
            .map(|i| (i, 1))
            .or_else(|| body.rfind(" - ").map(|i| (i, -1)))
            .ok_or_else(bad)?;
        let a = parse_rational(&body[..pos])?;
        let b = parse_rational(&body[pos + 3..])?;
        let b = if sign < 0 { -b } else { b };
        Ok(QuadExt::new(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn conjugate_product_is_norm() {
        let x = QuadExt::new(q(3, 5), q(-7, 2));
        assert_eq!(&x * &x.conj(), QuadExt::rational(x.norm()));
        assert_eq!(x.norm(), q(9, 25) - q(2 * 49, 4));
    }

    #[test]
    fn inverse_and_division() {
        let x = QuadExt::new(q(1, 3), q(2, 7));
        assert_eq!(&x * &x.inv().unwrap(), QuadExt::one());
        assert!(QuadExt::zero().inv().is_none());
        let s = QuadExt::sqrt2();
        assert_eq!(&s * &s, QuadExt::from_ints(2, 0));
        assert_eq!(QuadExt::one() / s.clone(), QuadExt::new(q(0, 1), q(1, 2)));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let x = QuadExt::from_ints(1, 1);
        let mut acc = QuadExt::one();
        for e in 0..9 {
            assert_eq!(x.pow(e), acc);
            acc = &acc * &x;
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(QuadExt::new(q(-2, 9), q(0, 1)).to_string(), "-2/9");
        assert_eq!(
            QuadExt::new(q(0, 1), q(4, 9)).to_string(),
            "0/1 + 4/9*sqrt2"
        );
        assert_eq!(
            QuadExt::new(q(1, 2), q(-3, 4)).to_string(),
            "1/2 - 3/4*sqrt2"
        );
        assert_eq!(QuadExt::from_ints(5, 0).to_string(), "5/1");
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "-2/9",
            "0/1 + 4/9*sqrt2",
            "1/2 - 3/4*sqrt2",
            "-7/3 + 1/1*sqrt2",
        ] {
            assert_eq!(s.parse::<QuadExt>().unwrap().to_string(), s);
        }
        assert_eq!("6".parse::<QuadExt>().unwrap(), QuadExt::from_ints(6, 0));
        assert!("1/0".parse::<QuadExt>().is_err());
        assert!("x".parse::<QuadExt>().is_err());
    }
}
