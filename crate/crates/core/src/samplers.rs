//! Exact samplers for the laws that appear in the local-time results: the
//! positive 2/3-stable variable `T`, the size-bias factor `D`, the
//! conditional laws of `L^0` given `sigma` or `sigma_+`, the excursion kernel
//! `U`, the total local time of super-Brownian motion, and increments of the
//! spectrally positive 3/2-stable process.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::distr::{Distribution, Open01};
use rand::Rng;
use rand_distr::{ChiSquared, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rng::{RngStream, StreamInfo};

/// Draws of `T` below this are resampled so that `T^{-1/2}` stays finite.
pub const STABLE_FLOOR: f64 = 1e-300;

/// Which law a [`SampleBatch`] was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawTag {
    StableTwoThirds,
    SizeBiasD,
    LtGivenSigma,
    LtGivenSigmaPlus,
    ExcursionU,
    SbmTotalLt,
    SpectrallyPositive,
    HittingTime,
    SnakeZeroCount,
    Other,
}

impl std::fmt::Display for LawTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LawTag::StableTwoThirds => "stable-two-thirds",
            LawTag::SizeBiasD => "size-bias-d",
            LawTag::LtGivenSigma => "lt-given-sigma",
            LawTag::LtGivenSigmaPlus => "lt-given-sigma-plus",
            LawTag::ExcursionU => "excursion-u",
            LawTag::SbmTotalLt => "sbm-total-lt",
            LawTag::SpectrallyPositive => "spectrally-positive",
            LawTag::HittingTime => "hitting-time",
            LawTag::SnakeZeroCount => "snake-zero-count",
            LawTag::Other => "other",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub law_tag: LawTag,
    pub seed_info: StreamInfo,
    /// Number of stable draws rejected by [`STABLE_FLOOR`].
    pub resampled: u64,
}

impl SampleBatch {
    pub fn new(values: Vec<f64>, law_tag: LawTag, seed_info: StreamInfo) -> Self {
        Self {
            values,
            law_tag,
            seed_info,
            resampled: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&x| f(x)).collect(),
            ..self.clone()
        }
    }
}

fn open01(rng: &mut RngStream) -> f64 {
    Open01.sample(rng)
}

fn exp1(rng: &mut RngStream) -> f64 {
    Exp1.sample(rng)
}

/// Positive `alpha`-stable variable with `E[exp(-lambda T)] = exp(-lambda^alpha)`,
/// `0 < alpha < 1`, by Kanter's representation
/// `T = sin(alpha U) / sin(U)^{1/alpha} * (sin((1-alpha) U) / E)^{(1-alpha)/alpha}`
/// with `U` uniform on `(0, pi)` and `E` standard exponential.
pub fn sample_positive_stable(alpha: f64, rng: &mut RngStream) -> f64 {
    let u = PI * open01(rng);
    let e = exp1(rng);
    let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
    let b = ((1.0 - alpha) * u).sin() / e;
    a * b.powf((1.0 - alpha) / alpha)
}

fn stable_two_thirds_counted(rng: &mut RngStream) -> (f64, u64) {
    let mut rejected = 0;
    loop {
        let t = sample_positive_stable(2.0 / 3.0, rng);
        if t >= STABLE_FLOOR {
            return (t, rejected);
        }
        rejected += 1;
    }
}

/// `T` with `E[exp(-lambda T)] = exp(-lambda^{2/3})`.
pub fn sample_stable_two_thirds(rng: &mut RngStream) -> f64 {
    stable_two_thirds_counted(rng).0
}

/// `D` with density `2x` on `[0, 1]`.
pub fn sample_d(rng: &mut RngStream) -> f64 {
    rng.random::<f64>().sqrt()
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be finite and > 0, got {x}"))
    }
}

/// `2^{3/4} / 3`.
pub fn lt_sigma_constant() -> f64 {
    2f64.powf(0.75) / 3.0
}

/// `2^{9/4} / 3`.
pub fn lt_sigma_plus_constant() -> f64 {
    2f64.powf(2.25) / 3.0
}

/// `L^0` under `N_0(· | sigma = s)`: `(2^{3/4}/3) s^{3/4} T^{-1/2}`.
pub fn sample_lt_given_sigma(s: f64, rng: &mut RngStream) -> Result<f64> {
    check_positive("s", s)?;
    let t = sample_stable_two_thirds(rng);
    Ok(lt_sigma_constant() * s.powf(0.75) / t.sqrt())
}

/// `L^0` under `N_0(· | sigma_+ = s)`: `(2^{9/4}/3) s^{3/4} D T^{-1/2}`, with `D`
/// drawn from `d_rng` and `T` from `t_rng`.
pub fn sample_lt_given_sigma_plus(
    s: f64,
    d_rng: &mut RngStream,
    t_rng: &mut RngStream,
) -> Result<f64> {
    check_positive("s", s)?;
    let d = sample_d(d_rng);
    let t = sample_stable_two_thirds(t_rng);
    Ok(lt_sigma_plus_constant() * s.powf(0.75) * d / t.sqrt())
}

/// `U` with density `(2 pi u^5)^{-1/2} exp(-1/(2u))`, i.e. inverse-gamma with
/// shape 3/2 and scale 1/2, realised as `1 / chi²_3`.
pub fn sample_u(rng: &mut RngStream) -> f64 {
    let chi = ChiSquared::new(3.0).expect("3 degrees of freedom is valid");
    1.0 / chi.sample(rng)
}

/// `(alpha 3^{1/3} / 2)^{3/2}`, the scale turning `T` into the total local
/// time at 0 of super-Brownian motion started from `alpha delta_0`.
pub fn sbm_total_lt_scale(alpha: f64) -> f64 {
    (alpha * 3f64.cbrt() / 2.0).powf(1.5)
}

/// Total local time at 0 of super-Brownian motion started from `alpha delta_0`.
pub fn sample_sbm_total_lt(alpha: f64, rng: &mut RngStream) -> Result<f64> {
    check_positive("alpha", alpha)?;
    Ok(sbm_total_lt_scale(alpha) * sample_stable_two_thirds(rng))
}

/// Increment over `dt` of the spectrally positive 3/2-stable process `Y`
/// with `E[exp(-lambda (Y_{t+dt} - Y_t))] = exp(dt sqrt(8/3) lambda^{3/2})`.
#[derive(Clone, Copy, Debug)]
pub struct StableIncrement {
    scale: f64,
}

// Chambers–Mallows–Stuck constants for alpha = 3/2, beta = 1:
// B = arctan(beta tan(pi alpha/2)) / alpha = -pi/6, S = (1 + tan²(pi alpha/2))^{1/(2 alpha)} = 2^{1/3}.
const SP_ALPHA: f64 = 1.5;
const SP_B: f64 = -PI / 6.0;

impl StableIncrement {
    /// For `beta = 1`, `1 < alpha < 2`, a standard CMS variate `X` of scale
    /// `c` satisfies `E[exp(-lambda c X)] = exp(c^alpha lambda^alpha / |cos(pi alpha/2)|)`;
    /// here `|cos(3 pi/4)| = 1/sqrt 2`, so `c^{3/2} = sqrt(8/3) dt / sqrt 2 = (2/sqrt 3) dt`.
    pub fn new(dt: f64) -> Result<Self> {
        check_positive("dt", dt)?;
        Ok(Self {
            scale: (2.0 / 3f64.sqrt() * dt).powf(2.0 / 3.0),
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.scale * standard_spectrally_positive(rng)
    }
}

/// Standard CMS variate with `alpha = 3/2`, `beta = 1`, unit scale, zero mean.
pub fn standard_spectrally_positive(rng: &mut RngStream) -> f64 {
    let v = PI * open01(rng) - FRAC_PI_2;
    let w = exp1(rng);
    let s = 2f64.cbrt();
    let shifted = SP_ALPHA * (v + SP_B);
    let num = shifted.sin() / v.cos().powf(1.0 / SP_ALPHA);
    let tail = ((v - shifted).cos() / w).powf((1.0 - SP_ALPHA) / SP_ALPHA);
    s * num * tail
}

/// One increment over `dt`; see [`StableIncrement`].
pub fn sample_spectrally_positive_increment(dt: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(StableIncrement::new(dt)?.sample(rng))
}

/// `n` draws of `T` with the resampling count recorded.
pub fn stable_two_thirds_batch(n: usize, rng: &mut RngStream) -> SampleBatch {
    let info = rng.info();
    let mut resampled = 0;
    let values = (0..n)
        .map(|_| {
            let (t, r) = stable_two_thirds_counted(rng);
            resampled += r;
            t
        })
        .collect();
    SampleBatch {
        values,
        law_tag: LawTag::StableTwoThirds,
        seed_info: info,
        resampled,
    }
}

/// `n` draws of `L^0 | sigma_+ = s`, with `D` and `T` taken from two disjoint
/// substreams of `rng`.
pub fn lt_given_sigma_plus_batch(s: f64, n: usize, rng: &RngStream) -> Result<SampleBatch> {
    let mut d_rng = rng.substream(0);
    let mut t_rng = rng.substream(1);
    let values = (0..n)
        .map(|_| sample_lt_given_sigma_plus(s, &mut d_rng, &mut t_rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleBatch::new(
        values,
        LawTag::LtGivenSigmaPlus,
        rng.info(),
    ))
}

/// `n` draws from `f`, tagged.
pub fn batch(
    n: usize,
    tag: LawTag,
    rng: &mut RngStream,
    mut f: impl FnMut(&mut RngStream) -> f64,
) -> SampleBatch {
    let info = rng.info();
    let values = (0..n).map(|_| f(rng)).collect();
    SampleBatch::new(values, tag, info)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, (v / n).sqrt())
    }

    fn laplace(xs: &[f64], lambda: f64) -> (f64, f64) {
        let e: Vec<f64> = xs.iter().map(|x| (-lambda * x).exp()).collect();
        mean_se(&e)
    }

    #[test]
    fn reproducible_draws() {
        let a: Vec<f64> = (0..50)
            .map({
                let mut r = RngStream::new(3, 1);
                move |_| sample_stable_two_thirds(&mut r)
            })
            .collect();
        let b: Vec<f64> = (0..50)
            .map({
                let mut r = RngStream::new(3, 1);
                move |_| sample_stable_two_thirds(&mut r)
            })
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn stable_laplace_small_batch() {
        let mut r = RngStream::new(11, 0);
        let b = stable_two_thirds_batch(200_000, &mut r);
        assert!(b.values.iter().all(|&t| t > 0.0 && t.is_finite()));
        let (m, se) = laplace(&b.values, 1.0);
        assert!((m - (-1f64).exp()).abs() < 4.0 * se, "{m} {se}");
    }

    #[test]
    fn d_moments_and_range() {
        let mut r = RngStream::new(2, 0);
        let xs: Vec<f64> = (0..200_000).map(|_| sample_d(&mut r)).collect();
        assert!(xs.iter().all(|&x| (0.0..=1.0).contains(&x)));
        let (m, se) = mean_se(&xs);
        assert!((m - 2.0 / 3.0).abs() < 4.0 * se);
        let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let (m2, se2) = mean_se(&sq);
        assert!((m2 - 0.5).abs() < 4.0 * se2);
    }

    #[test]
    fn lt_given_sigma_scales_per_draw() {
        for s in [0.3, 2.0, 17.0] {
            let mut r1 = RngStream::new(9, 4);
            let mut r2 = RngStream::new(9, 4);
            for _ in 0..100 {
                let a = sample_lt_given_sigma(s, &mut r1).unwrap();
                let b = sample_lt_given_sigma(1.0, &mut r2).unwrap();
                assert!((a - s.powf(0.75) * b).abs() <= 1e-14 * a);
            }
        }
        assert!(sample_lt_given_sigma(0.0, &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn lt_given_sigma_plus_positive() {
        let r = RngStream::new(4, 4);
        let b = lt_given_sigma_plus_batch(1.0, 10_000, &r).unwrap();
        assert!(b.values.iter().all(|&x| x > 0.0 && x.is_finite()));
        let mut d = RngStream::new(0, 0);
        let mut t = RngStream::new(0, 1);
        assert!(sample_lt_given_sigma_plus(-1.0, &mut d, &mut t).is_err());
    }

    #[test]
    fn u_kernel_laplace_small_batch() {
        let mut r = RngStream::new(5, 0);
        let xs: Vec<f64> = (0..200_000).map(|_| sample_u(&mut r)).collect();
        assert!(xs.iter().all(|&x| x > 0.0));
        let (m, se) = laplace(&xs, 0.5);
        assert!((m - 2.0 * (-1f64).exp()).abs() < 4.0 * se, "{m}");
    }

    #[test]
    fn sbm_scale_at_unit_mass() {
        let c = sbm_total_lt_scale(1.0);
        assert!((c - 3f64.sqrt() * 2f64.powf(-1.5)).abs() < 1e-15);
        assert!((c.powf(2.0 / 3.0) - 3f64.cbrt() / 2.0).abs() < 1e-15);
        assert!(sample_sbm_total_lt(0.0, &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn spectrally_positive_laplace_and_mean() {
        let inc = StableIncrement::new(0.01).unwrap();
        let mut r = RngStream::new(8, 0);
        let xs: Vec<f64> = (0..200_000).map(|_| inc.sample(&mut r)).collect();
        let (m, se) = laplace(&xs, 1.0);
        let want = (0.01 * (8.0f64 / 3.0).sqrt()).exp();
        assert!((m - want).abs() < 4.0 * se, "{m} vs {want} se {se}");
        assert!(sample_spectrally_positive_increment(0.0, &mut r).is_err());
    }
}
