//! Closed-form laws under the snake excursion measure `N_0` and for
//! super-Brownian motion, the cubic functional equation for the joint law of
//! `(L^0, sigma_+, sigma_-)`, and quadrature cross-checks between densities and
//! Laplace functionals.
//!
//! Every function here is a pure function of its arguments.

use std::cell::RefCell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quad::{integrate, integrate_half_line, QuadOptions};

/// `3^{1/3} / 2`, the constant of `N_0(1 - e^{-lambda L^0})`.
pub fn local_time_constant() -> f64 {
    3f64.cbrt() / 2.0
}

/// Laplace-conjugate parameters for `(L^0, sigma_+, sigma_-)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub lambda: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
}

impl RatePoint {
    pub fn new(lambda: f64, mu_plus: f64, mu_minus: f64) -> Result<Self> {
        let p = Self {
            lambda,
            mu_plus,
            mu_minus,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        nonneg("lambda", self.lambda)?;
        nonneg("mu_plus", self.mu_plus)?;
        nonneg("mu_minus", self.mu_minus)?;
        Ok(())
    }
}

/// Value of a Laplace functional together with the defect of the equation
/// that produced it (zero for direct closed forms).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LawValue {
    pub value: f64,
    pub residual: f64,
}

fn nonneg(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        domain(format!("{name} must be finite and >= 0, got {x}"))
    }
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        domain(format!("{name} must be finite and > 0, got {x}"))
    }
}

/// `n(1 - exp(-lambda sigma)) = sqrt(lambda / 2)` under the Itô measure.
pub fn duration_laplace(lambda: f64) -> Result<f64> {
    nonneg("lambda", lambda)?;
    Ok((lambda / 2.0).sqrt())
}

/// Density of the excursion duration under the Itô measure, `(2 sqrt(2 pi))^{-1} s^{-3/2}`.
pub fn duration_density(s: f64) -> Result<f64> {
    positive("s", s)?;
    Ok(s.powf(-1.5) / (2.0 * (2.0 * PI).sqrt()))
}

/// `N_0(1 - exp(-lambda L^0)) = (3^{1/3}/2) lambda^{2/3}`.
pub fn local_time_laplace(lambda: f64) -> Result<f64> {
    nonneg("lambda", lambda)?;
    Ok(local_time_constant() * lambda.powf(2.0 / 3.0))
}

/// Density of `L^0` under `N_0`: `3^{-2/3} / Gamma(1/3) * ell^{-5/3}`.
pub fn local_time_density(ell: f64) -> Result<f64> {
    positive("ell", ell)?;
    let c = 3f64.powf(-2.0 / 3.0) / statrs::function::gamma::gamma(1.0 / 3.0);
    Ok(c * ell.powf(-5.0 / 3.0))
}

/// Left-hand side of the triple equation:
/// `sqrt(sqrt(2mu1) + v)(2v - sqrt(2mu1)) + sqrt(sqrt(2mu2) + v)(2v - sqrt(2mu2))`.
pub fn h_mu(v: f64, mu1: f64, mu2: f64) -> Result<f64> {
    nonneg("v", v)?;
    nonneg("mu1", mu1)?;
    nonneg("mu2", mu2)?;
    Ok(h_raw(v, (2.0 * mu1).sqrt(), (2.0 * mu2).sqrt()))
}

fn h_raw(v: f64, c1: f64, c2: f64) -> f64 {
    (c1 + v).sqrt() * (2.0 * v - c1) + (c2 + v).sqrt() * (2.0 * v - c2)
}

fn h_prime_raw(v: f64, c1: f64, c2: f64) -> f64 {
    let term = |c: f64| {
        let r = (c + v).sqrt();
        if r > 0.0 {
            (6.0 * v + 3.0 * c) / (2.0 * r)
        } else {
            0.0
        }
    };
    term(c1) + term(c2)
}

/// Solve `h_{mu1,mu2}(v) = sqrt(6) lambda` for
/// `v = N_0(1 - exp(-lambda L^0 - mu1 sigma_+ - mu2 sigma_-))`.
///
/// `h` is strictly increasing on `[0, ∞)` and `h(0) <= 0`, so the root is
/// bracketed and unique. The solver bisects and takes Newton steps whenever
/// they stay inside the current bracket.
pub fn solve_triple(p: RatePoint) -> Result<LawValue> {
    p.validate()?;
    let c1 = (2.0 * p.mu_plus).sqrt();
    let c2 = (2.0 * p.mu_minus).sqrt();
    let target = 6f64.sqrt() * p.lambda;
    let f = |v: f64| h_raw(v, c1, c2) - target;

    let mut lo = 0.0;
    let mut hi = ((target + c1.powf(1.5) + c2.powf(1.5)) / 2.0)
        .powf(2.0 / 3.0)
        .max(1.0);
    let mut grow = 0;
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 2000 || !hi.is_finite() {
            return Err(Error::Numeric(format!(
                "could not bracket the root of h for {p:?}"
            )));
        }
    }
    if f(lo) >= 0.0 {
        return Ok(LawValue {
            value: lo,
            residual: f(lo).abs(),
        });
    }

    let tol = 1e-13 * target.max(1.0);
    let mut v = 0.5 * (lo + hi);
    for _ in 0..300 {
        let fv = f(v);
        if fv.abs() <= tol {
            break;
        }
        if fv > 0.0 {
            hi = v;
        } else {
            lo = v;
        }
        let d = h_prime_raw(v, c1, c2);
        let newton = if d > 0.0 { v - fv / d } else { f64::NAN };
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == v || hi - lo <= f64::EPSILON * hi {
            break;
        }
        v = next;
    }
    Ok(LawValue {
        value: v,
        residual: f(v).abs(),
    })
}

/// `N_0(1 - exp(-lambda L^0 - mu sigma))` in closed form.
///
/// With `a = sqrt(3) lambda / (2 (2mu)^{3/4})` the value is
/// `sqrt(2mu) cos(2/3 arccos a)` for `a <= 1` and
/// `sqrt(2mu) cosh(2/3 arcosh a)` for `a >= 1`.
pub fn lt_sigma_laplace(lambda: f64, mu: f64) -> Result<f64> {
    nonneg("lambda", lambda)?;
    positive("mu", mu)?;
    if lambda == 0.0 {
        return duration_laplace(mu);
    }
    let scale = (2.0 * mu).sqrt();
    let a = 3f64.sqrt() * lambda / (2.0 * (2.0 * mu).powf(0.75));
    let w = if (a - 1.0).abs() <= 1e-10 {
        1.0
    } else if a < 1.0 {
        (2.0 / 3.0 * a.acos()).cos()
    } else {
        (2.0 / 3.0 * a.acosh()).cosh()
    };
    Ok(scale * w)
}

/// `N_0(1 - exp(-mu1 sigma_+ - mu2 sigma_-)) = (sqrt 2 / 3)(mu1^{3/2} - mu2^{3/2}) / (mu1 - mu2)`.
///
/// Evaluated as `(sqrt 2 / 3)(a² + ab + b²)/(a + b)` with `a = sqrt(mu1)`,
/// `b = sqrt(mu2)`, which is the same rational function with the common
/// factor `a - b` cancelled; it equals `sqrt(mu/2)` on the diagonal.
pub fn pair_laplace(mu1: f64, mu2: f64) -> Result<f64> {
    nonneg("mu1", mu1)?;
    nonneg("mu2", mu2)?;
    let (a, b) = (mu1.sqrt(), mu2.sqrt());
    if a + b == 0.0 {
        return Ok(0.0);
    }
    Ok(2f64.sqrt() / 3.0 * (a * a + a * b + b * b) / (a + b))
}

/// Joint density of `(sigma_+, sigma_-)` under `N_0`: `(2 sqrt(2 pi))^{-1} (s1 + s2)^{-5/2}`.
pub fn pair_density(s1: f64, s2: f64) -> Result<f64> {
    positive("s1", s1)?;
    positive("s2", s2)?;
    Ok((s1 + s2).powf(-2.5) / (2.0 * (2.0 * PI).sqrt()))
}

/// Density of `sigma_+` (or `sigma_-`) under `N_0`: `(3 sqrt(2 pi))^{-1} s^{-3/2}`.
pub fn pair_marginal_density(s: f64) -> Result<f64> {
    positive("s", s)?;
    Ok(s.powf(-1.5) / (3.0 * (2.0 * PI).sqrt()))
}

/// `N_x(1 - exp(-lambda Z_y)) = (lambda^{-1/2} + |y - x| sqrt(2/3))^{-2}` with `d = |y - x|`.
pub fn exit_laplace(lambda: f64, d: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    nonneg("d", d)?;
    Ok((lambda.powf(-0.5) + d * (2.0f64 / 3.0).sqrt()).powi(-2))
}

/// `N_x(y in range) = 3 / (2 (y - x)^2)`.
pub fn hitting_prob(d: f64) -> Result<f64> {
    positive("d", d)?;
    Ok(1.5 / (d * d))
}

/// `N_0(1 - exp(-lambda L^a)) = (3^{1/3}/2)(lambda^{-1/3} + 3^{-1/3}|a|)^{-2}`.
pub fn lt_level_laplace(lambda: f64, a: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    if !a.is_finite() {
        return domain(format!("level a must be finite, got {a}"));
    }
    Ok(local_time_constant() * (lambda.cbrt().recip() + a.abs() / 3f64.cbrt()).powi(-2))
}

/// `E[exp(-lambda L^a)]` for super-Brownian motion started from `alpha delta_0`
/// with branching mechanism `2u²`.
pub fn sbm_local_time_laplace(lambda: f64, a: f64, alpha: f64) -> Result<f64> {
    positive("alpha", alpha)?;
    Ok((-alpha * lt_level_laplace(lambda, a)?).exp())
}

/// `E[exp(-mu1 R_+ - mu2 R_-)]` for super-Brownian motion started from `alpha delta_0`.
pub fn sbm_pair_laplace(mu1: f64, mu2: f64, alpha: f64) -> Result<f64> {
    positive("alpha", alpha)?;
    Ok((-alpha * pair_laplace(mu1, mu2)?).exp())
}

/// `N_x(1 - exp(-mu Y_0 - theta Z_0))` for `x >= 0`, `theta >= sqrt(mu/2)`:
///
/// `sqrt(mu/2) (3 coth((2mu)^{1/4} x + arcoth sqrt(2/3 + sqrt(2/mu) theta / 3))^2 - 2)`,
/// equal to `sqrt(mu/2)` when `theta = sqrt(mu/2)`.
pub fn y0_z0_laplace(x: f64, mu: f64, theta: f64) -> Result<f64> {
    nonneg("x", x)?;
    positive("mu", mu)?;
    if !theta.is_finite() {
        return domain(format!("theta must be finite, got {theta}"));
    }
    let base = (mu / 2.0).sqrt();
    if theta < base * (1.0 - 1e-12) {
        return domain(format!("theta = {theta} is below sqrt(mu/2) = {base}"));
    }
    // y² - 1 = (sqrt(2/mu) theta - 1) / 3
    let excess = ((2.0 / mu).sqrt() * theta - 1.0) / 3.0;
    if excess <= 0.0 {
        return Ok(base);
    }
    let y = (1.0 + excess).sqrt();
    let y_minus_one = excess / (y + 1.0);
    let arcoth = 0.5 * ((y + 1.0) / y_minus_one).ln();
    let z = (2.0 * mu).powf(0.25) * x + arcoth;
    let coth = z.tanh().recip();
    Ok(base * (3.0 * coth * coth - 2.0))
}

/// `N_x(1 - exp(-lambda L^0 - mu sigma))`, composing [`y0_z0_laplace`] with
/// `theta = N_0(1 - exp(-lambda L^0 - mu sigma))`.
pub fn lt_sigma_laplace_from_x(x: f64, lambda: f64, mu: f64) -> Result<f64> {
    let theta = lt_sigma_laplace(lambda, mu)?;
    y0_z0_laplace(x, mu, theta)
}

/// `F(mu1, mu2, x) = ((1 + sqrt(2 mu1 x)) e^{-sqrt(2 mu1 x)} + (1 + sqrt(2 mu2 x)) e^{-sqrt(2 mu2 x)}) / 2`,
/// the conditional Laplace functional of an excursion of squared size `x`
/// with a fair random sign.
pub fn excursion_sign_kernel(mu1: f64, mu2: f64, x: f64) -> Result<f64> {
    nonneg("mu1", mu1)?;
    nonneg("mu2", mu2)?;
    nonneg("x", x)?;
    let k = |y: f64| (1.0 + y) * (-y).exp();
    Ok(0.5 * (k((2.0 * mu1 * x).sqrt()) + k((2.0 * mu2 * x).sqrt())))
}

/// `(1 - (1 + y) e^{-y}) / y²`, finite at `y = 0` (value 1/2).
fn kernel_defect_ratio(y: f64) -> f64 {
    if y == f64::INFINITY {
        return 0.0;
    }
    if y < 0.1 {
        // sum_{k>=2} (-1)^k (k - 1) y^{k-2} / k!
        let mut term = 0.5; // y^{k-2} / k! at k = 2
        let mut acc = 0.5;
        for k in 3..30 {
            term *= y / k as f64;
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += s * (k - 1) as f64 * term;
            if term < 1e-18 {
                break;
            }
        }
        acc
    } else {
        (1.0 - (1.0 + y) * (-y).exp()) / (y * y)
    }
}

/// `(e^{-y} - 1 + y) / y²`, finite at `y = 0` (value 1/2).
fn exp_remainder_ratio(y: f64) -> f64 {
    if y == f64::INFINITY {
        return 0.0;
    }
    if y < 0.1 {
        let mut term = 0.5; // (-y)^{k-2} / k! at k = 2
        let mut acc = 0.5;
        for k in 3..30 {
            term *= -y / k as f64;
            acc += term;
            if term.abs() < 1e-18 {
                break;
            }
        }
        acc
    } else {
        ((-y).exp_m1() + y) / (y * y)
    }
}

/// Branching mechanism of the exit-measure CSBP, `phi(u) = sqrt(8/3) u^{3/2}`.
pub fn phi(u: f64) -> f64 {
    (8.0f64 / 3.0).sqrt() * u.powf(1.5)
}

/// Inverse of [`phi`]: `(3/8)^{1/3} lambda^{2/3}`.
pub fn phi_inverse(lambda: f64) -> f64 {
    (3.0f64 / 8.0).cbrt() * lambda.powf(2.0 / 3.0)
}

/// Density of the Lévy measure `kappa(dx) = sqrt(3 / (2 pi)) x^{-5/2} dx` on `x > 0`.
pub fn kappa_density(x: f64) -> f64 {
    (3.0 / (2.0 * PI)).sqrt() * x.powf(-2.5)
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_level: 12,
    }
}

/// `∫ kappa(dx) (e^{-v x} - 1 + v x)` by quadrature (substituting `x = u²`).
pub fn phi_from_kappa(v: f64) -> Result<f64> {
    positive("v", v)?;
    let c = (3.0 / (2.0 * PI)).sqrt();
    // x = u², dx = 2u du, x^{-5/2} = u^{-5}; (e^{-vx} - 1 + vx) / x² = v² r(vx)
    let g = |u: f64| 2.0 * c * v * v * exp_remainder_ratio(v * u * u);
    Ok(integrate_half_line(g, quad_opts())?.value)
}

/// `∫ kappa(dx) e^{-v x} (F(mu1, mu2, x²) - 1)` by quadrature.
pub fn kappa_kernel_integral(v: f64, mu1: f64, mu2: f64) -> Result<f64> {
    positive("v", v)?;
    nonneg("mu1", mu1)?;
    nonneg("mu2", mu2)?;
    let c = (3.0 / (2.0 * PI)).sqrt();
    let (a1, a2) = ((2.0 * mu1).sqrt(), (2.0 * mu2).sqrt());
    // x = u², dx = 2u du, x^{-5/2} = u^{-5}; with y_i = a_i x,
    // (F(x²) - 1) / x² = -(a1² m(y1) + a2² m(y2)) / 2 where m(y) = (1 - (1+y)e^{-y}) / y²
    let g = |u: f64| {
        let x = u * u;
        let defect =
            -0.5 * (a1 * a1 * kernel_defect_ratio(a1 * x) + a2 * a2 * kernel_defect_ratio(a2 * x));
        2.0 * c * (-v * x).exp() * defect
    };
    Ok(integrate_half_line(g, quad_opts())?.value)
}

/// Residual of `phi(v) + ∫ kappa(dx) e^{-v x}(F(mu1, mu2, x²) - 1) = h_{mu1,mu2}(v) / sqrt 6`.
pub fn verify_h_integral(v: f64, mu1: f64, mu2: f64) -> Result<f64> {
    let lhs = phi(v) + kappa_kernel_integral(v, mu1, mu2)?;
    Ok(lhs - h_mu(v, mu1, mu2)? / 6f64.sqrt())
}

/// `∫ (1 - e^{-lambda ell}) h(ell) d ell` with `h` the density of `L^0` under `N_0`.
pub fn local_time_density_dual(lambda: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    // h overflows only below ell ~ 1e-185, where the integrand carries no mass
    let g = |ell: f64| {
        let h = local_time_density(ell).unwrap_or(0.0);
        if h.is_finite() {
            -(-lambda * ell).exp_m1() * h
        } else {
            0.0
        }
    };
    Ok(integrate_half_line(g, quad_opts())?.value)
}

/// `∬ g(s1, s2)(1 - e^{-mu1 s1 - mu2 s2}) ds1 ds2` with `g` = [`pair_density`].
///
/// Computed in the coordinates `s1 = s p`, `s2 = s (1 - p)` (Jacobian `s`),
/// outer integral over `p in [0, 1]`, inner over `s in (0, ∞)`.
pub fn pair_density_dual(mu1: f64, mu2: f64) -> Result<f64> {
    nonneg("mu1", mu1)?;
    nonneg("mu2", mu2)?;
    let opts = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_level: 10,
    };
    let inner = |p: f64| -> Result<f64> {
        let rate = mu1 * p + mu2 * (1.0 - p);
        if rate == 0.0 {
            return Ok(0.0);
        }
        let (s1f, s2f) = (p, 1.0 - p);
        let g = |s: f64| {
            // the s-integrand is O(s^{-1/2}) at 0; nodes this close carry no mass
            if s < 1e-60 || s1f * s == 0.0 || s2f * s == 0.0 {
                return 0.0;
            }
            let dens = pair_density(s1f * s, s2f * s).unwrap_or(0.0);
            dens * -(-rate * s).exp_m1() * s
        };
        Ok(integrate_half_line(g, opts)?.value)
    };
    let failure = RefCell::new(None);
    let outer = integrate(
        |p| match inner(p) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        0.0,
        1.0,
        opts,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(outer?.value)
}
