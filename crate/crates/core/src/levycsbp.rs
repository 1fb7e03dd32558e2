//! The spectrally positive stable process `Y` with Laplace exponent
//! `phi(u) = sqrt(8/3) u^{3/2}` started at `y0`, its hitting time `T_0` of 0,
//! and the CSBP obtained from the stopped path by the Lamperti time change.
//!
//! Paths are stepped with exact stable increments. With `max_step == dt`
//! the grid is uniform. A larger `max_step` lets the step grow with the level,
//! `h = (sqrt 3 / 2) (Y / STEP_SCALES)^{3/2}` clamped to `[dt, max_step]`, so
//! the increment scale `((2/sqrt 3) h)^{2/3}` stays below `Y / STEP_SCALES`;
//! the step is `dt` whenever `Y` is within `STEP_SCALES` increment scales of
//! the barrier.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{domain, Error, Result};
use crate::exactlaws::phi_inverse;
use crate::harness::ComparisonReport;
use crate::rng::{RngStream, StreamInfo};
use crate::samplers::standard_spectrally_positive;

/// Distance to the barrier, in increment scales, below which the step is `dt`.
pub const STEP_SCALES: f64 = 10.0;

/// `T_0` has the law of `HITTING_SCALE * T` with `E[e^{-lambda T}] = e^{-lambda^{2/3}}`.
pub fn hitting_scale() -> f64 {
    (3.0f64 / 8.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    pub dt: f64,
    pub t_max: f64,
    pub y0: f64,
    /// Largest step; equal to `dt` for a uniform grid.
    pub max_step: f64,
}

impl PathConfig {
    /// Uniform grid of step `dt`.
    pub fn new(dt: f64, t_max: f64, y0: f64) -> Result<Self> {
        let c = Self {
            dt,
            t_max,
            y0,
            max_step: dt,
        };
        c.validate()?;
        Ok(c)
    }

    /// Level-dependent steps between `dt` and `max_step`.
    pub fn adaptive(self, max_step: f64) -> Result<Self> {
        let c = Self { max_step, ..self };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !(ok(self.dt) && ok(self.t_max) && ok(self.y0) && ok(self.max_step)) {
            return domain(format!("path parameters must be finite and > 0: {self:?}"));
        }
        if self.dt > self.t_max {
            return domain("dt must not exceed t_max");
        }
        if self.max_step < self.dt {
            return domain("max_step must be >= dt");
        }
        Ok(())
    }

    pub fn is_uniform(&self) -> bool {
        self.max_step == self.dt
    }

    fn step(&self, y: f64) -> f64 {
        if self.is_uniform() {
            return self.dt;
        }
        let h = 0.75f64.sqrt() * (y / STEP_SCALES).powf(1.5);
        h.clamp(self.dt, self.max_step)
    }
}

impl Default for PathConfig {
    fn default() -> Self {
        Self {
            dt: 1e-4,
            t_max: 100.0,
            y0: 1.0,
            max_step: 1e-4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingSample {
    pub t0: f64,
    pub censored: bool,
}

/// A stopped path: grid times and levels up to the last positive level, plus
/// the interpolated hitting time (or `t_max` if censored).
#[derive(Clone, Debug, PartialEq)]
pub struct StoppedPath {
    pub times: Vec<f64>,
    pub levels: Vec<f64>,
    pub hit: HittingSample,
}

fn increment(h: f64, rng: &mut RngStream) -> f64 {
    (2.0 / 3f64.sqrt() * h).powf(2.0 / 3.0) * standard_spectrally_positive(rng)
}

fn walk(cfg: &PathConfig, rng: &mut RngStream, mut visit: impl FnMut(f64, f64)) -> HittingSample {
    let (mut t, mut y) = (0.0, cfg.y0);
    visit(t, y);
    loop {
        let h = cfg.step(y).min(cfg.t_max - t);
        if h <= 0.0 {
            return HittingSample {
                t0: cfg.t_max,
                censored: true,
            };
        }
        let next = y + increment(h, rng);
        if next <= 0.0 {
            return HittingSample {
                t0: (t + h * y / (y - next)).min(cfg.t_max),
                censored: false,
            };
        }
        t += h;
        y = next;
        visit(t, y);
    }
}

/// First passage of `Y` below 0, linearly interpolated within the crossing step.
pub fn simulate_hitting_time(cfg: &PathConfig, rng: &mut RngStream) -> Result<HittingSample> {
    cfg.validate()?;
    Ok(walk(cfg, rng, |_, _| {}))
}

/// Like [`simulate_hitting_time`], keeping the grid.
pub fn simulate_path(cfg: &PathConfig, rng: &mut RngStream) -> Result<StoppedPath> {
    cfg.validate()?;
    let (mut times, mut levels) = (Vec::new(), Vec::new());
    let hit = walk(cfg, rng, |t, y| {
        times.push(t);
        levels.push(y);
    });
    Ok(StoppedPath { times, levels, hit })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingBatch {
    pub samples: Vec<HittingSample>,
    pub config: PathConfig,
    pub seed_info: StreamInfo,
}

impl HittingBatch {
    pub fn t0(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t0).collect()
    }

    pub fn censored(&self) -> usize {
        self.samples.iter().filter(|s| s.censored).count()
    }

    pub fn censored_fraction(&self) -> f64 {
        self.censored() as f64 / self.samples.len().max(1) as f64
    }

    /// CSV rows `t0,censored,seed` with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t0,censored,seed\n");
        for (i, s) in self.samples.iter().enumerate() {
            out.push_str(&format!(
                "{:e},{},{}:{}\n",
                s.t0, s.censored, self.seed_info, i
            ));
        }
        out
    }
}

/// `n` independent hitting times; path `i` uses `rng.substream(i)`.
pub fn hitting_batch(cfg: &PathConfig, n: usize, rng: &RngStream) -> Result<HittingBatch> {
    cfg.validate()?;
    let samples = (0..n as u64)
        .map(|i| walk(cfg, &mut rng.substream(i), |_, _| {}))
        .collect();
    Ok(HittingBatch {
        samples,
        config: *cfg,
        seed_info: rng.info(),
    })
}

/// `E[e^{-lambda T_0}] = e^{-phi^{-1}(lambda)} = e^{-(3/8)^{1/3} lambda^{2/3}}`.
pub fn hitting_laplace(lambda: f64) -> f64 {
    (-phi_inverse(lambda)).exp()
}

/// `P(T > x)` for `E[e^{-lambda T}] = e^{-lambda^{2/3}}` by the convergent
/// series `(1/pi) sum_k (-1)^{k+1} Gamma(2k/3) sin(2 pi k/3) x^{-2k/3} / k!`.
/// Intended for `x >= 1`.
pub fn stable_two_thirds_tail(x: f64) -> Result<f64> {
    if !(x >= 1.0 && x.is_finite()) {
        return domain(format!("tail series needs finite x >= 1, got {x}"));
    }
    let a = 2.0f64 / 3.0;
    let z = x.powf(-a);
    let (mut sum, mut zk, mut fact) = (0.0, 1.0, 1.0);
    for k in 1..200 {
        let kf = k as f64;
        zk *= z;
        fact *= kf;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let size = gamma(a * kf) / fact * zk;
        sum += sign * size * (std::f64::consts::PI * a * kf).sin();
        if size < 1e-17 * sum.abs() {
            return Ok(sum / std::f64::consts::PI);
        }
    }
    Err(Error::Numeric(format!("tail series did not converge at x={x}")))
}

/// `P(T_0 > t_max)` from the exact law `(3/8)^{1/2} T`.
pub fn censoring_probability(t_max: f64) -> Result<f64> {
    stable_two_thirds_tail(t_max / hitting_scale())
}

/// Lamperti reconstruction of one stopped path.
#[derive(Clone, Debug, PartialEq)]
pub struct LampertiPath {
    /// CSBP clock `r_k = sum_{j<k} h_j / Y_j` at the grid points, then at extinction.
    pub r: Vec<f64>,
    /// `X_{r_k} = Y_{t_k}`, ending with the absorbed value 0.
    pub x: Vec<f64>,
    /// `int X dr` over the reconstructed path.
    pub integral: f64,
}

impl LampertiPath {
    /// Extinction time of the CSBP.
    pub fn extinction(&self) -> f64 {
        *self.r.last().expect("nonempty")
    }

    /// `X_r`, right-continuous, 0 after extinction.
    pub fn x_at(&self, r: f64) -> f64 {
        match self.r.partition_point(|&s| s <= r) {
            0 => self.x[0],
            k => self.x[k - 1],
        }
    }
}

/// Time change `dr = dt / Y_t` applied to the stepped path, which holds the
/// level `Y_{t_k}` on `[t_k, t_{k+1})` and on the final partial step up to
/// the interpolated crossing. The CSBP is `X_r = Y_{t(r)}`, absorbed at 0.
pub fn lamperti(path: &StoppedPath) -> Result<LampertiPath> {
    let n = path.levels.len();
    if n == 0 || n != path.times.len() {
        return Err(Error::Numeric("empty or inconsistent path grid".into()));
    }
    if path.hit.censored {
        return Err(Error::Numeric("censored path has no extinction time".into()));
    }
    let mut r = Vec::with_capacity(n + 1);
    let mut x = Vec::with_capacity(n + 1);
    let mut clock = 0.0;
    for k in 0..n {
        let y = path.levels[k];
        if y.is_nan() || y <= 0.0 {
            return Err(Error::Numeric(format!("level {y} at grid point {k} is not positive")));
        }
        r.push(clock);
        x.push(y);
        let t_next = if k + 1 < n { path.times[k + 1] } else { path.hit.t0 };
        let dr = (t_next - path.times[k]) / y;
        if !dr.is_finite() || dr < 0.0 {
            return Err(Error::Numeric(format!(
                "time-change grid exhausted at step {k}: dr = {dr}, y = {y}"
            )));
        }
        clock += dr;
    }
    r.push(clock);
    x.push(0.0);
    let integral = r.windows(2).zip(&x).map(|(w, &v)| v * (w[1] - w[0])).sum();
    Ok(LampertiPath { r, x, integral })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LampertiSummary {
    pub paths: usize,
    pub censored: usize,
    pub max_rel_deviation: f64,
    pub mean_rel_deviation: f64,
    pub nonnegative: bool,
}

/// Per-path agreement of `int_0^infty X_r dr` with `T_0`, over `n` paths.
pub fn lamperti_summary(cfg: &PathConfig, n: usize, rng: &RngStream) -> Result<LampertiSummary> {
    cfg.validate()?;
    let mut s = LampertiSummary {
        paths: n,
        censored: 0,
        max_rel_deviation: 0.0,
        mean_rel_deviation: 0.0,
        nonnegative: true,
    };
    let mut used = 0usize;
    for i in 0..n as u64 {
        let path = simulate_path(cfg, &mut rng.substream(i))?;
        if path.hit.censored {
            s.censored += 1;
            continue;
        }
        let lp = lamperti(&path)?;
        s.nonnegative &= lp.x.iter().all(|&v| v >= 0.0) && lp.x.last() == Some(&0.0);
        let dev = (lp.integral - path.hit.t0).abs() / path.hit.t0;
        s.max_rel_deviation = s.max_rel_deviation.max(dev);
        s.mean_rel_deviation += dev;
        used += 1;
    }
    if used > 0 {
        s.mean_rel_deviation /= used as f64;
    }
    Ok(s)
}

/// Relative tolerance on the per-path Lamperti identity.
pub const LAMPERTI_TOLERANCE: f64 = 0.01;

pub const LAMPERTI_CITATION: &str =
    "Lamperti transformation: int_0^infty X_r dr has the law of T_0";

/// Max relative deviation of `int X dr` from `T_0` against [`LAMPERTI_TOLERANCE`];
/// censored paths are excluded and counted in the test id.
pub fn csbp_integral_consistency(
    cfg: &PathConfig,
    n: usize,
    rng: &RngStream,
) -> Result<ComparisonReport> {
    let s = lamperti_summary(cfg, n, rng)?;
    let ok = s.nonnegative && s.max_rel_deviation <= LAMPERTI_TOLERANCE;
    let mut rep = ComparisonReport::upper_bound(
        format!("csbp-lamperti[n={n},censored={}]", s.censored),
        LAMPERTI_CITATION,
        s.max_rel_deviation,
        LAMPERTI_TOLERANCE,
    )
    .with_seed(rng.info());
    if !ok {
        rep.verdict = crate::harness::Verdict::Fail;
    }
    Ok(rep)
}

/// Laplace estimate of `e^{-lambda T_0}` at each step size, finest last.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementLevel {
    pub dt: f64,
    pub estimate: f64,
    pub se: f64,
}

pub fn refinement_levels(
    base: &PathConfig,
    dts: &[f64],
    lambda: f64,
    n: usize,
    rng: &RngStream,
) -> Result<Vec<RefinementLevel>> {
    dts.iter()
        .map(|&dt| {
            let max_step = if base.is_uniform() { dt } else { base.max_step.max(dt) };
            let cfg = PathConfig {
                dt,
                max_step,
                ..*base
            };
            let b = hitting_batch(&cfg, n, rng)?;
            let est = crate::harness::stats::laplace_estimate(&b.t0(), lambda)?;
            Ok(RefinementLevel {
                dt,
                estimate: est.mean,
                se: est.se,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(PathConfig::new(1e-3, 10.0, 1.0).is_ok());
        assert!(PathConfig::new(0.0, 10.0, 1.0).is_err());
        assert!(PathConfig::new(1.0, 0.5, 1.0).is_err());
        assert!(PathConfig::new(1e-3, 10.0, 1.0).unwrap().adaptive(1e-4).is_err());
        let c = PathConfig::new(1e-3, 10.0, 1.0).unwrap().adaptive(0.5).unwrap();
        assert_eq!(c.step(1e-6), 1e-3);
        assert_eq!(c.step(1e6), 0.5);
    }

    #[test]
    fn step_keeps_increments_small_relative_to_level() {
        let c = PathConfig::new(1e-6, 10.0, 1.0).unwrap().adaptive(10.0).unwrap();
        for y in [0.01, 0.1, 1.0, 5.0] {
            let scale = (2.0 / 3f64.sqrt() * c.step(y)).powf(2.0 / 3.0);
            assert!((scale * STEP_SCALES / y - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn censoring_and_bounds() {
        let cfg = PathConfig::new(0.01, 0.05, 50.0).unwrap();
        let mut r = RngStream::new(5, 0);
        let s = simulate_hitting_time(&cfg, &mut r).unwrap();
        assert!(s.censored);
        assert_eq!(s.t0, 0.05);
        let cfg = PathConfig::new(1e-3, 5.0, 0.2).unwrap();
        for _ in 0..50 {
            let s = simulate_hitting_time(&cfg, &mut r).unwrap();
            assert!(s.t0 > 0.0 && s.t0 <= 5.0);
            assert!(!s.censored || s.t0 == 5.0);
        }
    }

    #[test]
    fn start_near_boundary_hits_fast() {
        let cfg = PathConfig::new(1e-5, 10.0, 1e-3).unwrap();
        let b = hitting_batch(&cfg, 500, &RngStream::new(6, 0)).unwrap();
        let m = b.t0().iter().map(|t| (-t).exp()).sum::<f64>() / 500.0;
        assert!(m > 0.99, "{m}");
    }

    #[test]
    fn tail_series_matches_laplace_scale() {
        // the tail decays like x^{-2/3} / Gamma(1/3)
        let x = 1e8f64;
        let lead = x.powf(-2.0 / 3.0) / gamma(1.0 / 3.0);
        assert!((stable_two_thirds_tail(x).unwrap() / lead - 1.0).abs() < 1e-4);
        let p = censoring_probability(100.0).unwrap();
        assert!(p > 0.0 && p < 0.05);
        assert!(stable_two_thirds_tail(0.5).is_err());
    }

    #[test]
    fn tail_matches_sampled_law() {
        let mut r = RngStream::new(7, 0);
        let n = 200_000;
        let hits = (0..n)
            .filter(|_| crate::samplers::sample_stable_two_thirds(&mut r) > 3.0)
            .count() as f64
            / n as f64;
        let p = stable_two_thirds_tail(3.0).unwrap();
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits - p).abs() < 4.0 * se, "{hits} vs {p}");
    }

    #[test]
    fn lamperti_reconstruction_is_consistent() {
        let cfg = PathConfig::new(1e-4, 100.0, 1.0).unwrap().adaptive(1.0).unwrap();
        let s = lamperti_summary(&cfg, 50, &RngStream::new(8, 0)).unwrap();
        assert!(s.nonnegative);
        assert!(s.max_rel_deviation < LAMPERTI_TOLERANCE, "{s:?}");
    }

    #[test]
    fn lamperti_rejects_bad_paths() {
        let censored = StoppedPath {
            times: vec![0.0],
            levels: vec![1.0],
            hit: HittingSample {
                t0: 1.0,
                censored: true,
            },
        };
        assert!(lamperti(&censored).is_err());
        let bad = StoppedPath {
            times: vec![0.0, 0.1],
            levels: vec![1.0, 0.0],
            hit: HittingSample {
                t0: 0.2,
                censored: false,
            },
        };
        assert!(lamperti(&bad).is_err());
    }
}
