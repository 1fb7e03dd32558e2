//! Closed-form coefficients and the gamma/hypergeometric identities behind them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::quadext::QuadExt;
use crate::error::{Error, Result};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn frac(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn pow2(e: i64) -> BigRational {
    let p = BigRational::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

fn pow_int(base: i64, e: i64) -> BigRational {
    let p = BigRational::from_integer(BigInt::from(base).pow(e.unsigned_abs() as u32));
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn sign(n: i64) -> BigRational {
    if n.rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// `Gamma(p/2) / Gamma(q/2)` for `p ≡ q (mod 2)`, exactly.
///
/// Telescopes `Gamma(x + 1) = x Gamma(x)` in steps of one between the two
/// arguments, so both the integer and the half-odd case reduce to a product
/// of rationals `j/2`.
pub fn gamma_ratio_half(p: u64, q: u64) -> Result<BigRational> {
    if p == 0 || q == 0 {
        return Err(Error::Domain(format!(
            "gamma_ratio_half needs positive arguments, got ({p}, {q})"
        )));
    }
    if p % 2 != q % 2 {
        return Err(Error::Parity { p, q });
    }
    let (lo, hi, invert) = if p >= q { (q, p, false) } else { (p, q, true) };
    let mut acc = int(1);
    let mut j = lo;
    while j < hi {
        acc *= frac(j as i64, 2);
        j += 2;
    }
    Ok(if invert { acc.recip() } else { acc })
}

fn need_positive(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::Domain(format!("{what} is defined for n >= 1")))
    } else {
        Ok(())
    }
}

/// `[z^n] F(z) = (-1)^{n-1} 3^{1-n} / n! * Gamma(3n/2 - 1) / Gamma(n/2)`.
pub fn coef_f(n: u64) -> Result<BigRational> {
    need_positive(n, "coef_F")?;
    let n_i = n as i64;
    Ok(
        sign(n_i - 1) * pow_int(3, 1 - n_i) / BigRational::from_integer(factorial(n))
            * gamma_ratio_half(3 * n - 2, n)?,
    )
}

/// `N_0((L^0)^n e^{-sigma/2}) = (1/2) 3^{1-n} Gamma(3n/2 - 1) / Gamma(n/2)`.
pub fn weighted_moment_sigma(n: u64) -> Result<BigRational> {
    need_positive(n, "weighted_moment_sigma")?;
    Ok(frac(1, 2) * pow_int(3, 1 - n as i64) * gamma_ratio_half(3 * n - 2, n)?)
}

/// `N_0((L^0)^n e^{-sigma_+/2}) = (2 sqrt 2 / 3)^n * 2/(n+2) * Gamma(3n/2 - 1) / Gamma(n/2)`.
pub fn weighted_moment_sigma_plus(n: u64) -> Result<QuadExt> {
    need_positive(n, "weighted_moment_sigma_plus")?;
    let base = QuadExt::new(int(0), frac(2, 3)).pow(n as u32);
    let r = frac(2, n as i64 + 2) * gamma_ratio_half(3 * n - 2, n)?;
    Ok(&base * &QuadExt::rational(r))
}

/// `(3 sqrt 2)^{-n}` in Q(sqrt 2).
pub fn three_sqrt2_pow_neg(n: u64) -> QuadExt {
    let n_i = n as i64;
    // (3 sqrt 2)^{-n} = 3^{-n} 2^{-n/2}; for odd n write 2^{-n/2} = 2^{-(n+1)/2} sqrt 2
    let three = pow_int(3, -n_i);
    if n.is_multiple_of(2) {
        QuadExt::rational(three * pow2(-n_i / 2))
    } else {
        QuadExt::new(int(0), three * pow2(-(n_i + 1) / 2))
    }
}

/// `[lambda^n] F_+(lambda) = (-1)^{n+1}/n! (3 sqrt 2)^{-n} 2^{2n+1}/(n+2) Gamma(3n/2 - 1)/Gamma(n/2)`.
pub fn coef_fplus(n: u64) -> Result<QuadExt> {
    need_positive(n, "coef_Fplus")?;
    let n_i = n as i64;
    let r = sign(n_i + 1) / BigRational::from_integer(factorial(n)) * pow2(2 * n_i + 1)
        / int(n_i + 2)
        * gamma_ratio_half(3 * n - 2, n)?;
    Ok(&three_sqrt2_pow_neg(n) * &QuadExt::rational(r))
}

/// `[lambda^n] F_+` assembled from the two rational convolutions produced by
/// Lagrange inversion of `gamma~ = lambda psi~(gamma~)` composed with `R~`:
/// `(-1)^n / n (3 sqrt 2)^{-n} (-3 A + B / 3)` with
/// `A = [lambda^{n-1}](1-2lambda)^{-(n-1)}(1-lambda)^{-n}` and
/// `B = [lambda^{n-1}](1-2lambda)^{-(n+3)}(1-lambda)^{-n}`.
pub fn coef_fplus_from_products(n: u64) -> Result<QuadExt> {
    need_positive(n, "coef_Fplus")?;
    let a = coef_rational_product(n - 1, n - 1, n);
    let b = coef_rational_product(n - 1, n + 3, n);
    let r = sign(n as i64) / int(n as i64) * (int(-3) * a + b / int(3));
    Ok(&three_sqrt2_pow_neg(n) * &QuadExt::rational(r))
}

/// `[x^i](1 - c x)^{-k}` without the `c^i` factor: `C(i + k - 1, i)`, with `k = 0` giving `[i = 0]`.
fn neg_binomial(k: u64, i: u64) -> BigInt {
    if k == 0 {
        if i == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    } else {
        binomial(i + k - 1, i)
    }
}

/// `[lambda^m] (1 - 2 lambda)^{-k} (1 - lambda)^{-l}` by direct convolution.
pub fn coef_rational_product(m: u64, k: u64, l: u64) -> BigRational {
    let mut acc = BigInt::zero();
    for i in 0..=m {
        let left = neg_binomial(k, i) << i;
        acc += left * neg_binomial(l, m - i);
    }
    BigRational::from_integer(acc)
}

/// Terminating `2F1(-m, l; -m - k + 1; 1/2)` as an exact finite sum.
pub fn hypergeom_2f1_half(m: u64, l: u64, k: u64) -> Result<BigRational> {
    if k == 0 && m >= 1 {
        return Err(Error::Pole { m, k });
    }
    // Horner in integers: 1 + r_0 (1 + r_1 (1 + ... (1 + r_{m-1})))
    // with r_j = (j - m)(l + j) / ((1 - m - k + j)(j + 1) 2), reduced once at the end.
    let (m_i, l_i, k_i) = (m as i64, l as i64, k as i64);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in (0..m_i).rev() {
        let rn = BigInt::from(j - m_i) * BigInt::from(l_i + j);
        let rd = BigInt::from(1 - m_i - k_i + j) * BigInt::from(2 * (j + 1));
        num = &den * &rd + rn * num;
        den *= rd;
    }
    Ok(BigRational::new(num, den))
}

/// `2^m C(m + k - 1, m) 2F1(-m, l; -m - k + 1; 1/2)`, the hypergeometric form of
/// [`coef_rational_product`].
pub fn rational_product_hypergeometric(m: u64, k: u64, l: u64) -> Result<BigRational> {
    let lead = BigRational::from_integer(neg_binomial(k, m) << m);
    Ok(lead * hypergeom_2f1_half(m, l, k)?)
}

/// Exact value of `Gamma(x/2)` for a positive integer `x` as `r * sqrt(pi)^e`, `e ∈ {0, 1}`.
#[derive(Clone, Debug, PartialEq)]
struct HalfGamma {
    r: BigRational,
    sqrt_pi: i32,
}

impl HalfGamma {
    fn of(x: u64) -> Self {
        if x.is_multiple_of(2) {
            Self {
                r: BigRational::from_integer(factorial(x / 2 - 1)),
                sqrt_pi: 0,
            }
        } else {
            // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
            let k = (x - 1) / 2;
            Self {
                r: BigRational::new(factorial(2 * k), factorial(k) << (2 * k)),
                sqrt_pi: 1,
            }
        }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            r: &self.r * &o.r,
            sqrt_pi: self.sqrt_pi + o.sqrt_pi,
        }
    }

    fn div(&self, o: &Self) -> Self {
        Self {
            r: &self.r / &o.r,
            sqrt_pi: self.sqrt_pi - o.sqrt_pi,
        }
    }
}

/// `2^{e} / sqrt(pi) * Gamma(x1/2) Gamma(x2/2) / Gamma(y/2)`; errors unless the
/// powers of `sqrt(pi)` cancel.
fn bailey_rhs(e: i64, x1: u64, x2: u64, y: u64) -> Result<BigRational> {
    let g = HalfGamma::of(x1)
        .mul(&HalfGamma::of(x2))
        .div(&HalfGamma::of(y));
    if g.sqrt_pi != 1 {
        return Err(Error::Numeric(format!(
            "sqrt(pi) does not cancel: Gamma({x1}/2) Gamma({x2}/2) / Gamma({y}/2) carries sqrt(pi)^{}",
            g.sqrt_pi
        )));
    }
    Ok(pow2(e) * g.r)
}

/// Both sides of the two Bailey evaluations used for `[lambda^n] F_+`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaileyValues {
    pub n: u64,
    /// `2F1(-n+1, n; -2n+3; 1/2)` and `2^{2n-3}/sqrt(pi) Gamma(n/2 - 1/2) Gamma(3n/2 - 1) / Gamma(2n-2)`.
    pub first: (String, String),
    /// `2F1(-n+1, n; -2n-1; 1/2)` and `2^{2n+1}/sqrt(pi) Gamma(n/2 + 3/2) Gamma(3n/2 + 1) / Gamma(2n+2)`.
    pub second: (String, String),
    pub holds: bool,
}

pub fn bailey_values(n: u64) -> Result<BaileyValues> {
    if n < 2 {
        return Err(Error::Domain(format!("bailey_check needs n >= 2, got {n}")));
    }
    let n_i = n as i64;
    let l1 = hypergeom_2f1_half(n - 1, n, n - 1)?;
    let r1 = bailey_rhs(2 * n_i - 3, n - 1, 3 * n - 2, 4 * n - 4)?;
    let l2 = hypergeom_2f1_half(n - 1, n, n + 3)?;
    let r2 = bailey_rhs(2 * n_i + 1, n + 3, 3 * n + 2, 4 * n + 4)?;
    let holds = l1 == r1 && l2 == r2;
    let s = super::quadext::format_rational;
    Ok(BaileyValues {
        n,
        first: (s(&l1), s(&r1)),
        second: (s(&l2), s(&r2)),
        holds,
    })
}

/// True iff both Bailey evaluations hold exactly at `n >= 2`.
pub fn bailey_check(n: u64) -> bool {
    bailey_values(n).map(|b| b.holds).unwrap_or(false)
}

/// Conditioning event for [`conditional_moment`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conditioning {
    Sigma,
    SigmaPlus,
}

/// `N_0((L^0)^n | sigma = 1) = 2^{3n/4} / 3^n * Gamma(3n/4 + 1) / Gamma(n/2 + 1)`, and the
/// `sigma_+ = 1` analogue with the extra factor `2^{3n/2} * 2 / (n + 2)`.
pub fn conditional_moment(n: u32, cond: Conditioning) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("conditional_moment needs n >= 1".into()));
    }
    use statrs::function::gamma::ln_gamma;
    let nf = f64::from(n);
    let base = (0.75 * nf * 2f64.ln() - nf * 3f64.ln() + ln_gamma(0.75 * nf + 1.0)
        - ln_gamma(0.5 * nf + 1.0))
    .exp();
    Ok(match cond {
        Conditioning::Sigma => base,
        Conditioning::SigmaPlus => base * 2f64.powf(1.5 * nf) * 2.0 / (nf + 2.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_ratio_examples() {
        assert_eq!(gamma_ratio_half(4, 2).unwrap(), int(1));
        assert_eq!(gamma_ratio_half(7, 3).unwrap(), frac(15, 4));
        assert_eq!(gamma_ratio_half(2, 2).unwrap(), int(1));
        assert_eq!(gamma_ratio_half(3, 7).unwrap(), frac(4, 15));
        assert_eq!(gamma_ratio_half(10, 2).unwrap(), int(24));
        assert!(matches!(
            gamma_ratio_half(3, 2),
            Err(Error::Parity { p: 3, q: 2 })
        ));
        assert!(gamma_ratio_half(0, 2).is_err());
    }

    #[test]
    fn gamma_ratio_matches_float_gamma_for_both_parities() {
        use statrs::function::gamma::gamma;
        for (p, q) in [(9, 1), (13, 5), (12, 4), (20, 2), (5, 11)] {
            let exact = num_traits::ToPrimitive::to_f64(&gamma_ratio_half(p, q).unwrap()).unwrap();
            let float = gamma(p as f64 / 2.0) / gamma(q as f64 / 2.0);
            assert!((exact - float).abs() <= 1e-12 * float.abs(), "{p} {q}");
        }
    }

    #[test]
    fn coef_f_examples() {
        assert_eq!(coef_f(1).unwrap(), int(1));
        assert_eq!(coef_f(2).unwrap(), frac(-1, 6));
        assert!(coef_f(0).is_err());
    }

    #[test]
    fn weighted_moment_examples_and_linkage() {
        assert_eq!(weighted_moment_sigma(1).unwrap(), frac(1, 2));
        assert_eq!(weighted_moment_sigma(2).unwrap(), frac(1, 6));
        assert_eq!(weighted_moment_sigma(3).unwrap(), frac(5, 24));
        for n in 1..=40u64 {
            let lhs = frac(1, 2)
                * sign(n as i64 - 1)
                * BigRational::from_integer(factorial(n))
                * coef_f(n).unwrap();
            assert_eq!(lhs, weighted_moment_sigma(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn coef_fplus_examples() {
        assert_eq!(coef_fplus(1).unwrap(), QuadExt::new(int(0), frac(4, 9)));
        assert_eq!(coef_fplus(2).unwrap(), QuadExt::rational(frac(-2, 9)));
        for n in 1..=20u64 {
            assert_eq!(coef_fplus(n).unwrap().is_rational(), n % 2 == 0);
        }
    }

    #[test]
    fn coef_fplus_moment_identity() {
        for n in 1..=40u64 {
            let lhs = weighted_moment_sigma_plus(n).unwrap();
            let f = QuadExt::rational(sign(n as i64 + 1) * BigRational::from_integer(factorial(n)));
            assert_eq!(lhs, &f * &coef_fplus(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn coef_fplus_from_products_agrees() {
        for n in 1..=40u64 {
            assert_eq!(
                coef_fplus_from_products(n).unwrap(),
                coef_fplus(n).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn rational_product_examples() {
        assert_eq!(coef_rational_product(0, 3, 5), int(1));
        assert_eq!(coef_rational_product(1, 1, 2), int(4));
        assert_eq!(coef_rational_product(2, 1, 1), int(7));
        assert_eq!(coef_rational_product(3, 0, 1), int(1));
    }

    #[test]
    fn hypergeom_examples() {
        assert_eq!(hypergeom_2f1_half(0, 4, 2).unwrap(), int(1));
        assert_eq!(hypergeom_2f1_half(1, 2, 1).unwrap(), int(2));
        assert!(matches!(
            hypergeom_2f1_half(2, 1, 0),
            Err(Error::Pole { m: 2, k: 0 })
        ));
        assert_eq!(hypergeom_2f1_half(0, 1, 0).unwrap(), int(1));
    }

    #[test]
    fn convolution_equals_hypergeometric_form() {
        for m in 0..=12u64 {
            for k in 1..=12u64 {
                for l in 1..=12u64 {
                    assert_eq!(
                        coef_rational_product(m, k, l),
                        rational_product_hypergeometric(m, k, l).unwrap(),
                        "m={m} k={k} l={l}"
                    );
                }
            }
        }
    }

    #[test]
    fn bailey_small_n() {
        let b = bailey_values(2).unwrap();
        assert_eq!(b.first.0, "2/1");
        assert!(b.holds);
        assert!(bailey_check(3));
        for n in 2..=40 {
            assert!(bailey_check(n), "n={n}");
        }
        assert!(!bailey_check(1));
    }

    #[test]
    fn conditional_moment_examples() {
        let m1 = conditional_moment(1, Conditioning::Sigma).unwrap();
        assert!((m1 - 0.5813683170191186).abs() < 1e-14, "{m1}");
        let m2 = conditional_moment(2, Conditioning::Sigma).unwrap();
        let want = 2f64.powf(1.5) / 9.0 * statrs::function::gamma::gamma(2.5);
        assert!((m2 - want).abs() < 1e-13);
        let p1 = conditional_moment(1, Conditioning::SigmaPlus).unwrap();
        assert!((p1 - 1.0962386115499447).abs() < 1e-13, "{p1}");
        for n in 1..=6 {
            let r = conditional_moment(n, Conditioning::SigmaPlus).unwrap()
                / conditional_moment(n, Conditioning::Sigma).unwrap();
            let nf = f64::from(n);
            assert!((r - 2f64.powf(1.5 * nf) * 2.0 / (nf + 2.0)).abs() < 1e-12 * r);
        }
        assert!(conditional_moment(0, Conditioning::Sigma).is_err());
    }
}
