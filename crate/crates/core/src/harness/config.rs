//! Run configuration: a flat `key = value` file, then the output-directory
//! environment override, then command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable that overrides `out_dir`.
pub const OUT_DIR_ENV: &str = "TREELAWS_OUT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    Exact,
    ClosedForm,
    McFast,
    McSlow,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::Exact, Group::ClosedForm, Group::McFast, Group::McSlow];

    pub fn name(self) -> &'static str {
        match self {
            Group::Exact => "exact",
            Group::ClosedForm => "closed-form",
            Group::McFast => "mc-fast",
            Group::McSlow => "mc-slow",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown group {s:?}")))
    }
}

/// Everything a run depends on. Two runs with equal configs write identical
/// report files apart from `runtime_ms`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub groups: Vec<Group>,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Exact series truncation order.
    pub series_order: usize,
    /// Largest `m`, `k`, `l` in the convolution/hypergeometric comparison.
    pub product_max: u64,
    /// Draws per sampler gate.
    pub n_mc: usize,
    pub n_edges: usize,
    pub n_trees: usize,
    pub n_paths: usize,
    pub n_lamperti: usize,
    pub dt: f64,
    pub t_max: f64,
    pub y0: f64,
    /// Largest Euler step away from the barrier; equal to `dt` for a uniform grid.
    pub max_step: f64,
    pub se_band: f64,
    pub ks_tol: f64,
    pub levy_ks_tol: f64,
    pub levy_laplace_tol: f64,
    pub snake_mean_rel_tol: f64,
    pub lamperti_rel_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            groups: vec![Group::Exact, Group::ClosedForm, Group::McFast],
            seed: 42,
            out_dir: PathBuf::from("reports"),
            series_order: 40,
            product_max: 30,
            n_mc: 1_000_000,
            n_edges: 5000,
            n_trees: 20_000,
            n_paths: 100_000,
            n_lamperti: 1000,
            dt: 1e-4,
            t_max: 100.0,
            y0: 1.0,
            max_step: 1.0,
            se_band: 4.0,
            ks_tol: 0.03,
            levy_ks_tol: 0.02,
            levy_laplace_tol: 0.02,
            snake_mean_rel_tol: 0.05,
            lamperti_rel_tol: 0.01,
        }
    }
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("bad value for {key}: {v:?}")))
}

impl RunConfig {
    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "groups" | "group" => {
                self.groups = v
                    .split(',')
                    .map(|g| g.trim().parse())
                    .collect::<Result<_>>()?;
                if self.groups.is_empty() {
                    return Err(Error::Config("no groups selected".into()));
                }
            }
            "seed" => self.seed = parse(key, v)?,
            "out_dir" => self.out_dir = PathBuf::from(v),
            "series_order" => self.series_order = parse(key, v)?,
            "product_max" => self.product_max = parse(key, v)?,
            "n_mc" => self.n_mc = parse(key, v)?,
            "n_edges" => self.n_edges = parse(key, v)?,
            "n_trees" => self.n_trees = parse(key, v)?,
            "n_paths" => self.n_paths = parse(key, v)?,
            "n_lamperti" => self.n_lamperti = parse(key, v)?,
            "dt" => self.dt = parse(key, v)?,
            "t_max" => self.t_max = parse(key, v)?,
            "y0" => self.y0 = parse(key, v)?,
            "max_step" => self.max_step = parse(key, v)?,
            "se_band" => self.se_band = parse(key, v)?,
            "ks_tol" => self.ks_tol = parse(key, v)?,
            "levy_ks_tol" => self.levy_ks_tol = parse(key, v)?,
            "levy_laplace_tol" => self.levy_laplace_tol = parse(key, v)?,
            "snake_mean_rel_tol" => self.snake_mean_rel_tol = parse(key, v)?,
            "lamperti_rel_tol" => self.lamperti_rel_tol = parse(key, v)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v)
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut c = Self::default();
        c.apply_text(&text)?;
        Ok(c)
    }

    /// Applies `TREELAWS_OUT` if it is set and non-empty.
    pub fn apply_env(&mut self) {
        if let Some(dir) = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty()) {
            self.out_dir = PathBuf::from(dir);
        }
    }

    /// Applies `key=value` override strings.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        for o in overrides {
            let (k, v) = o
                .as_ref()
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override {:?}: expected key=value", o.as_ref())))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be > 0, got {x}")))
            }
        };
        for (n, x) in [
            ("dt", self.dt),
            ("t_max", self.t_max),
            ("y0", self.y0),
            ("max_step", self.max_step),
            ("se_band", self.se_band),
            ("ks_tol", self.ks_tol),
            ("levy_ks_tol", self.levy_ks_tol),
            ("levy_laplace_tol", self.levy_laplace_tol),
            ("snake_mean_rel_tol", self.snake_mean_rel_tol),
            ("lamperti_rel_tol", self.lamperti_rel_tol),
        ] {
            pos(n, x)?;
        }
        for (n, x) in [
            ("series_order", self.series_order),
            ("n_mc", self.n_mc),
            ("n_edges", self.n_edges),
            ("n_trees", self.n_trees),
            ("n_paths", self.n_paths),
            ("n_lamperti", self.n_lamperti),
        ] {
            if x == 0 {
                return Err(Error::Config(format!("{n} must be >= 1")));
            }
        }
        if self.max_step < self.dt || self.dt > self.t_max {
            return Err(Error::Config("need dt <= max_step and dt <= t_max".into()));
        }
        if self.groups.is_empty() {
            return Err(Error::Config("no groups selected".into()));
        }
        Ok(())
    }

    /// The `key = value` form read back by [`RunConfig::apply_text`].
    pub fn to_text(&self) -> String {
        let groups = self
            .groups
            .iter()
            .map(|g| g.name())
            .collect::<Vec<_>>()
            .join(",");
        let mut out = format!("groups = {groups}\nseed = {}\nout_dir = {}\n", self.seed, self.out_dir.display());
        let nums = [
            ("series_order", self.series_order.to_string()),
            ("product_max", self.product_max.to_string()),
            ("n_mc", self.n_mc.to_string()),
            ("n_edges", self.n_edges.to_string()),
            ("n_trees", self.n_trees.to_string()),
            ("n_paths", self.n_paths.to_string()),
            ("n_lamperti", self.n_lamperti.to_string()),
            ("dt", self.dt.to_string()),
            ("t_max", self.t_max.to_string()),
            ("y0", self.y0.to_string()),
            ("max_step", self.max_step.to_string()),
            ("se_band", self.se_band.to_string()),
            ("ks_tol", self.ks_tol.to_string()),
            ("levy_ks_tol", self.levy_ks_tol.to_string()),
            ("levy_laplace_tol", self.levy_laplace_tol.to_string()),
            ("snake_mean_rel_tol", self.snake_mean_rel_tol.to_string()),
            ("lamperti_rel_tol", self.lamperti_rel_tol.to_string()),
        ];
        for (k, v) in nums {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}
