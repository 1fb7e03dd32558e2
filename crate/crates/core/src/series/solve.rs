//! Fixed-point series solutions for `F` and `F_+`, and the polynomials
//! `P`, `Q`, `R` that tie `F_+` to an algebraic curve.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::quadext::QuadExt;
use super::truncated::TruncatedSeries;
use crate::error::{Error, Result};

pub type RationalSeries = TruncatedSeries<BigRational>;
pub type QuadSeries = TruncatedSeries<QuadExt>;

fn frac(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn qx(p: i64, q: i64) -> QuadExt {
    QuadExt::rational(frac(p, q))
}

/// `36 sqrt 2`, the root of `Q` that `gamma_1` starts from (with a minus sign).
pub fn c36() -> QuadExt {
    QuadExt::from_ints(0, 36)
}

/// Solves `w = lambda * psi(w)` to truncation order `n` by iterating
/// `w <- lambda psi(w)` from `w = 0`. Each pass fixes one more coefficient,
/// so `n` passes suffice.
pub fn fixed_point<C, P>(n: usize, mut psi: P) -> Result<TruncatedSeries<C>>
where
    C: super::truncated::Coeff,
    P: FnMut(&TruncatedSeries<C>) -> Result<TruncatedSeries<C>>,
{
    let mut w = TruncatedSeries::zero(n);
    for _ in 0..n {
        w = psi(&w)?.shift(1);
    }
    Ok(w)
}

fn need_order(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("series order must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// The series `F` with `F(0) = 0` and `F = lambda (1 + F/3)^{-1/2}`, to order `n`.
pub fn series_solve_f(n: usize) -> Result<RationalSeries> {
    need_order(n)?;
    let third = frac(1, 3);
    let minus_half = frac(-1, 2);
    fixed_point(n, |w: &RationalSeries| {
        w.scale(&third)
            .add_constant(&BigRational::one())
            .pow_unit(&minus_half)
    })
}

/// `psi~(w) = -124416 / ((36 sqrt 2 - w)(72 sqrt 2 - w))` as a series in `w`.
pub fn psi_tilde(w: &QuadSeries) -> Result<QuadSeries> {
    let a = w.neg().add_constant(&c36());
    let b = w.neg().add_constant(&QuadExt::from_ints(0, 72));
    Ok(a.mul(&b).inv()?.scale(&qx(-124416, 1)))
}

/// `gamma~ = gamma_1 + 36 sqrt 2`, the solution of `gamma~ = lambda psi~(gamma~)`.
pub fn series_solve_gamma_tilde(n: usize) -> Result<QuadSeries> {
    need_order(n)?;
    fixed_point(n, psi_tilde)
}

/// `R(z) = z²/3456 - 1/2 + 216/z²` evaluated at a series with invertible constant term.
pub fn r_of_series(z: &QuadSeries) -> Result<QuadSeries> {
    let z2 = z.mul(z);
    Ok(z2
        .scale(&qx(1, 3456))
        .add(&z2.inv()?.scale(&qx(216, 1)))
        .add_constant(&qx(-1, 2)))
}

/// `F~_+ = F_+ - 1/3 = R(gamma~ - 36 sqrt 2) - 1/3`, to order `n`.
pub fn series_solve_fplus(n: usize) -> Result<QuadSeries> {
    let g = series_solve_gamma_tilde(n)?;
    let w = g.add_constant(&-c36());
    Ok(r_of_series(&w)?.add_constant(&qx(-1, 3)))
}

/// `P(y, z) = 96 y³z² - 36 z⁴ - 36 y z² + 12 z² - 9 y² + 6 y - 1` on series.
pub fn p_of_series<C: super::truncated::Coeff>(
    y: &TruncatedSeries<C>,
    z: &TruncatedSeries<C>,
) -> TruncatedSeries<C> {
    let c = |k: i64| C::from_rational(frac(k, 1));
    let z2 = z.mul(z);
    let y2 = y.mul(y);
    let y3 = y2.mul(y);
    y3.mul(&z2)
        .scale(&c(96))
        .sub(&z2.mul(&z2).scale(&c(36)))
        .sub(&y.mul(&z2).scale(&c(36)))
        .add(&z2.scale(&c(12)))
        .sub(&y2.scale(&c(9)))
        .add(&y.scale(&c(6)))
        .add_constant(&c(-1))
}

/// `P(1/3 + F~_+(lambda), lambda)`; zero to the truncation order when `F~_+` is correct.
pub fn fplus_cubic_residual(fplus_tilde: &QuadSeries) -> QuadSeries {
    let n = fplus_tilde.order();
    let y = fplus_tilde.add_constant(&qx(1, 3));
    p_of_series(&y, &QuadSeries::variable(n))
}

/// `F²(3 + F) - 3 lambda²`; zero to the truncation order when `F` is correct.
pub fn f_squared_residual(f: &RationalSeries) -> RationalSeries {
    let n = f.order();
    let lam = RationalSeries::variable(n);
    f.mul(f)
        .mul(&f.add_constant(&frac(3, 1)))
        .sub(&lam.mul(&lam).scale(&frac(3, 1)))
}

pub fn q_at(z: &QuadExt) -> QuadExt {
    &(&z.pow(3) * &qx(-1, 124416)) + &(z * &qx(1, 48))
}

pub fn q_prime_at(z: &QuadExt) -> QuadExt {
    &(&z.pow(2) * &qx(-3, 124416)) + &qx(1, 48)
}

pub fn r_at(z: &QuadExt) -> Result<QuadExt> {
    let z2 = z.pow(2);
    let inv = z2
        .inv()
        .ok_or_else(|| Error::Domain("R has a pole at z = 0".into()))?;
    Ok(&(&(&z2 * &qx(1, 3456)) + &(&inv * &qx(216, 1))) + &qx(-1, 2))
}

/// `z^6 P(R(z), Q(z))` as a polynomial in `z` with `Q(z) = -z³/124416 + q1 z`.
///
/// Every term has degree at most 18, so a series truncated at order 18 holds
/// the polynomial exactly. `q1 = 1/48` gives the identity `P(R, Q) = 0`.
pub fn z6_p_of_r_q(q1: &BigRational) -> RationalSeries {
    const DEG: usize = 18;
    let poly = |c: &[(usize, BigRational)]| {
        let mut v = vec![BigRational::zero(); DEG + 1];
        for (k, x) in c {
            v[*k] = x.clone();
        }
        RationalSeries::from_coeffs(v, DEG)
    };
    let q = poly(&[(1, q1.clone()), (3, frac(-1, 124416))]);
    // z² R(z) = z⁴/3456 - z²/2 + 216
    let rh = poly(&[(0, frac(216, 1)), (2, frac(-1, 2)), (4, frac(1, 3456))]);
    let q2 = q.mul(&q);
    let k = |x: i64| frac(x, 1);
    // z^6 * [96 R³Q² - 36 Q⁴ - 36 R Q² + 12 Q² - 9 R² + 6 R - 1]
    rh.pow(3)
        .mul(&q2)
        .scale(&k(96))
        .sub(&q2.mul(&q2).shift(6).scale(&k(36)))
        .sub(&rh.mul(&q2).shift(4).scale(&k(36)))
        .add(&q2.shift(6).scale(&k(12)))
        .sub(&rh.mul(&rh).shift(2).scale(&k(9)))
        .add(&rh.shift(4).scale(&k(6)))
        .sub(&RationalSeries::constant(k(1), DEG).shift(6))
}

/// True iff `P(R(z), Q(z))` vanishes identically for the given `z`-coefficient of `Q`.
pub fn q_r_identity_holds(q1: &BigRational) -> bool {
    z6_p_of_r_q(q1).is_zero()
}

/// The identity `P(R(z), Q(z)) = 0` for the stated `Q` and `R`.
pub fn q_r_identity_check() -> bool {
    q_r_identity_holds(&frac(1, 48))
}

/// A root of `Q` with the derivative `1/Q'(root)` of the local inverse branch at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub root: QuadExt,
    pub q_prime: QuadExt,
    pub derivative: QuadExt,
}

/// The three branches of `Q^{-1}` at `lambda = 0`, at roots `-36 sqrt 2`, `0`, `36 sqrt 2`.
pub fn q_branches() -> Result<[Branch; 3]> {
    let mk = |root: QuadExt| -> Result<Branch> {
        if !q_at(&root).is_zero() {
            return Err(Error::Numeric(format!("{root} is not a root of Q")));
        }
        let q_prime = q_prime_at(&root);
        let derivative = q_prime
            .inv()
            .ok_or_else(|| Error::Numeric(format!("Q' vanishes at {root}")))?;
        Ok(Branch {
            root,
            q_prime,
            derivative,
        })
    };
    Ok([mk(-c36())?, mk(QuadExt::zero())?, mk(c36())?])
}
