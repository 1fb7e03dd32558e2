//! Empirical comparisons: Kolmogorov-Smirnov distances, means with standard
//! errors, Laplace-functional gates and chi-square goodness of fit.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::report::ComparisonReport;
use crate::error::{Error, Result};
use crate::samplers::SampleBatch;

/// Standard errors allowed in Monte Carlo gates.
pub const SE_BAND: f64 = 4.0;

fn sorted(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.is_empty() {
        return Err(Error::Input("empty sample".into()));
    }
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::Input("sample contains NaN".into()));
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `sup_x |F_a(x) - F_b(x)|` for the empirical CDFs of `a` and `b`.
pub fn ks_two_sample_values(a: &[f64], b: &[f64]) -> Result<f64> {
    let (a, b) = (sorted(a)?, sorted(b)?);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

pub fn ks_two_sample(a: &SampleBatch, b: &SampleBatch) -> Result<f64> {
    ks_two_sample_values(&a.values, &b.values)
}

/// `sup_x |F_n(x) - F(x)|` against a continuous CDF.
pub fn ks_one_sample(xs: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let v = sorted(xs)?;
    let n = v.len() as f64;
    Ok(v.iter().enumerate().fold(0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    }))
}

pub fn uniform01_cdf(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub se: f64,
    pub n: usize,
}

/// Sample mean and its standard error `s / sqrt(n)`.
pub fn mean_se(xs: impl IntoIterator<Item = f64>) -> Result<MeanEstimate> {
    // Welford
    let (mut n, mut mean, mut m2) = (0usize, 0f64, 0f64);
    for x in xs {
        n += 1;
        let d = x - mean;
        mean += d / n as f64;
        m2 += d * (x - mean);
    }
    if n == 0 {
        return Err(Error::Input("empty sample".into()));
    }
    let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    Ok(MeanEstimate {
        mean,
        se: (var / n as f64).sqrt(),
        n,
    })
}

/// `mean(e^{-lambda x})` with its standard error.
pub fn laplace_estimate(xs: &[f64], lambda: f64) -> Result<MeanEstimate> {
    mean_se(xs.iter().map(|&x| (-lambda * x).exp()))
}

/// One report per `lambda`, passing iff the estimate is within
/// [`SE_BAND`] standard errors of `theory(lambda)`.
pub fn laplace_gate(
    test_id: &str,
    citation: &str,
    batch: &SampleBatch,
    lambdas: &[f64],
    theory: impl Fn(f64) -> f64,
) -> Result<Vec<ComparisonReport>> {
    laplace_gate_band(test_id, citation, batch, lambdas, theory, SE_BAND)
}

/// [`laplace_gate`] with `band` standard errors.
pub fn laplace_gate_band(
    test_id: &str,
    citation: &str,
    batch: &SampleBatch,
    lambdas: &[f64],
    theory: impl Fn(f64) -> f64,
    band: f64,
) -> Result<Vec<ComparisonReport>> {
    lambdas
        .iter()
        .map(|&lam| {
            let est = laplace_estimate(&batch.values, lam)?;
            Ok(ComparisonReport::numeric(
                format!("{test_id}[lambda={lam}]"),
                citation,
                theory(lam),
                est.mean,
                Some(est.se),
                band * est.se,
            )
            .with_seed(batch.seed_info))
        })
        .collect()
}

/// Moment gate: `mean(x^k)` within `band` standard errors of `theory`.
pub fn moment_gate(
    test_id: &str,
    citation: &str,
    batch: &SampleBatch,
    k: i32,
    theory: f64,
    band: f64,
) -> Result<ComparisonReport> {
    let est = mean_se(batch.values.iter().map(|x| x.powi(k)))?;
    Ok(ComparisonReport::numeric(
        test_id,
        citation,
        theory,
        est.mean,
        Some(est.se),
        band * est.se,
    )
    .with_seed(batch.seed_info))
}

/// Pearson chi-square statistic and upper-tail p-value for observed counts
/// against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> Result<(f64, f64)> {
    if counts.len() < 2 {
        return Err(Error::Input("need at least two cells".into()));
    }
    let total: u64 = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    let stat = counts
        .iter()
        .map(|&c| (c as f64 - e).powi(2) / e)
        .sum::<f64>();
    let dist = ChiSquared::new((counts.len() - 1) as f64)
        .map_err(|e| Error::Numeric(e.to_string()))?;
    Ok((stat, 1.0 - dist.cdf(stat)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use crate::samplers::{batch, sample_d, LawTag};

    #[test]
    fn ks_extremes() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(ks_two_sample_values(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_two_sample_values(&a, &[4.0, 5.0]).unwrap(), 1.0);
        assert!(ks_two_sample_values(&a, &[]).is_err());
        assert!((ks_two_sample_values(&[1.0, 2.0], &[1.5]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_same_law_calibration() {
        let mut r1 = RngStream::new(11, 0);
        let mut r2 = RngStream::new(11, 1);
        let a = batch(10_000, LawTag::SizeBiasD, &mut r1, sample_d);
        let b = batch(10_000, LawTag::SizeBiasD, &mut r2, sample_d);
        assert!(ks_two_sample(&a, &b).unwrap() <= 0.03);
    }

    #[test]
    fn ks_one_sample_uniform() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!((ks_one_sample(&xs, uniform01_cdf).unwrap() - 0.0005).abs() < 1e-12);
    }

    #[test]
    fn mean_and_se() {
        let m = mean_se([1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m.mean, 2.5);
        assert!((m.se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert!(mean_se(std::iter::empty()).is_err());
    }

    #[test]
    fn chi_square() {
        let (s, p) = chi_square_uniform(&[100, 100, 100]).unwrap();
        assert_eq!(s, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
        let (_, p) = chi_square_uniform(&[200, 100, 100]).unwrap();
        assert!(p < 1e-6);
    }

    #[test]
    fn gate_sensitivity() {
        let mut r = RngStream::new(12, 0);
        let b = batch(100_000, LawTag::SizeBiasD, &mut r, sample_d);
        // E[e^{-D}] for density 2x on [0,1] is 2(1 - 2/e)
        let exact = |_: f64| 2.0 * (1.0 - 2.0 / std::f64::consts::E);
        assert!(laplace_gate("d", "c", &b, &[1.0], exact).unwrap()[0].passed());
        let wrong = |l: f64| 1.1 * exact(l);
        assert!(!laplace_gate("d", "c", &b, &[1.0], wrong).unwrap()[0].passed());
    }
}
