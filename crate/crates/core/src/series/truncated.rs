use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::quadext::QuadExt;
use crate::error::{Error, Result};

/// Exact coefficient field for [`TruncatedSeries`].
pub trait Coeff: Clone + Debug + PartialEq + Zero + One {
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    fn from_rational(q: BigRational) -> Self;
}

impl Coeff for BigRational {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self.clone()
    }
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn from_rational(q: BigRational) -> Self {
        q
    }
}

impl Coeff for QuadExt {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        QuadExt::inv(self)
    }
    fn from_rational(q: BigRational) -> Self {
        QuadExt::rational(q)
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Power series `sum_{k=0}^{N} c_k z^k`, exact modulo `z^{N+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncatedSeries<C> {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = C::one();
        }
        s
    }

    /// Builds a series from leading coefficients, padding with zeros or
    /// truncating to `order`.
    pub fn from_coeffs(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    fn check_order(&self, o: &Self) {
        assert_eq!(self.order(), o.order(), "truncation orders differ");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_order(o);
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.plus(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_order(o);
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.minus(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(C::negated).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.times(c)).collect(),
        }
    }

    pub fn add_constant(&self, c: &C) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = s.coeffs[0].plus(c);
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_order(o);
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Self { coeffs: out }
    }

    /// Multiplication by `z^k`, dropping terms past the truncation order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        if k <= n {
            out[k..].clone_from_slice(&self.coeffs[..=n - k]);
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(C::one(), self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inv(&self) -> Result<Self> {
        let a0inv = self.coeffs[0]
            .inverse()
            .ok_or_else(|| Error::Domain("series inverse needs a nonzero constant term".into()))?;
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(a0inv.clone());
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                acc = acc.plus(&self.coeffs[j].times(&out[k - j]));
            }
            out.push(acc.times(&a0inv).negated());
        }
        Ok(Self { coeffs: out })
    }

    /// `self^alpha` for rational `alpha`, normalised so the constant term is 1.
    ///
    /// The constant term must equal 1. Uses the recurrence
    /// `f_n = (1/n) sum_{k=1}^{n} ((alpha + 1) k - n) a_k f_{n-k}` that follows
    /// from `a f' = alpha a' f`.
    pub fn pow_unit(&self, alpha: &BigRational) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("pow_unit needs constant term 1".into()));
        }
        let n = self.order();
        let ap1 = alpha + BigRational::one();
        let mut f: Vec<C> = Vec::with_capacity(n + 1);
        f.push(C::one());
        for m in 1..=n {
            let mut acc = C::zero();
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                let w = &ap1 * rat(k as i64) - rat(m as i64);
                acc = acc.plus(&C::from_rational(w).times(&self.coeffs[k]).times(&f[m - k]));
            }
            f.push(acc.times(&C::from_rational(BigRational::new(
                1.into(),
                (m as i64).into(),
            ))));
        }
        Ok(Self { coeffs: f })
    }

    /// `self(g)` for a series `g` with zero constant term, by Horner's rule.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_order(g);
        if !g.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "composition needs an inner series with zero constant term".into(),
            ));
        }
        let mut acc = Self::zero(self.order());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add_constant(c);
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        for k in 1..=n {
            out[k - 1] = self.coeffs[k].times(&C::from_rational(rat(k as i64)));
        }
        Self { coeffs: out }
    }
}
