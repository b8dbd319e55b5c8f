//! Run configuration: flat `key = value` text with `[section]` headers.
//!
//! ```text
//! [domain]
//! kind = ellipse
//! a = 2
//! b = 1
//!
//! [sweep]
//! h_min = 0.0001
//! h_max = 0.01
//! count = 200
//! spacing = quarter
//! ```
//!
//! Unknown sections or keys are rejected. [`RunConfig::to_text`] writes
//! every field, and its output parses back to an equal value.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Domain {
    Ellipse { a: f64, b: f64 },
    Curve { path: PathBuf },
}

/// How the sweep points are spread over `[h_min, h_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Spacing {
    /// Uniform in `h^{-1/4}`.
    Quarter,
    /// Uniform in `1/h`.
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub domain: Domain,
    pub t_max: f64,
    pub grid_n: usize,
    pub samples: usize,
    pub h_min: f64,
    pub h_max: f64,
    pub count: usize,
    pub spacing: Spacing,
    pub alpha0: Option<f64>,
    pub effective1d: bool,
    pub boundary2d: bool,
    pub n_s: usize,
    pub n_tau: usize,
    pub out: PathBuf,
    pub strict_paper_signs: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            domain: Domain::Ellipse { a: 2.0, b: 1.0 },
            t_max: 20.0,
            grid_n: 4000,
            samples: 4096,
            h_min: 1e-4,
            h_max: 1e-2,
            count: 200,
            spacing: Spacing::Quarter,
            alpha0: None,
            effective1d: true,
            boundary2d: false,
            n_s: 256,
            n_tau: 120,
            out: PathBuf::from("out"),
            strict_paper_signs: false,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("bad value for {key}: {v:?}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("bad boolean for {key}: {v:?}"))),
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        let mut kind = String::from("ellipse");
        let (mut a, mut b) = (2.0, 1.0);
        let mut curve: Option<PathBuf> = None;
        let mut section = String::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                if !["domain", "degennes", "geometry", "sweep", "oracles", "output"].contains(&section.as_str()) {
                    return Err(Error::Config(format!("line {}: unknown section [{section}]", no + 1)));
                }
                continue;
            }
            let (key, val) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
            match (section.as_str(), key) {
                ("domain", "kind") => kind = val.to_string(),
                ("domain", "a") => a = parse_num(key, val)?,
                ("domain", "b") => b = parse_num(key, val)?,
                ("domain", "curve") => curve = Some(PathBuf::from(val)),
                ("degennes", "t_max") => c.t_max = parse_num(key, val)?,
                ("degennes", "n") => c.grid_n = parse_num(key, val)?,
                ("geometry", "samples") => c.samples = parse_num(key, val)?,
                ("sweep", "h_min") => c.h_min = parse_num(key, val)?,
                ("sweep", "h_max") => c.h_max = parse_num(key, val)?,
                ("sweep", "count") => c.count = parse_num(key, val)?,
                ("sweep", "spacing") => {
                    c.spacing = match val {
                        "quarter" => Spacing::Quarter,
                        "inverse" => Spacing::Inverse,
                        _ => return Err(Error::Config(format!("bad spacing {val:?}"))),
                    }
                }
                ("sweep", "alpha0") => {
                    c.alpha0 = if val == "fit" || val.is_empty() { None } else { Some(parse_num(key, val)?) }
                }
                ("oracles", "effective1d") => c.effective1d = parse_bool(key, val)?,
                ("oracles", "boundary2d") => c.boundary2d = parse_bool(key, val)?,
                ("oracles", "n_s") => c.n_s = parse_num(key, val)?,
                ("oracles", "n_tau") => c.n_tau = parse_num(key, val)?,
                ("output", "dir") => c.out = PathBuf::from(val),
                ("output", "strict_paper_signs") => c.strict_paper_signs = parse_bool(key, val)?,
                _ => {
                    return Err(Error::Config(format!("line {}: unknown key {key:?} in [{section}]", no + 1)));
                }
            }
        }
        c.domain = match kind.as_str() {
            "ellipse" => Domain::Ellipse { a, b },
            "curve" => Domain::Curve {
                path: curve.ok_or_else(|| Error::Config("curve domain needs a curve = PATH key".into()))?,
            },
            _ => return Err(Error::Config(format!("unknown domain kind {kind:?}"))),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h_min > 0.0 && self.h_min <= self.h_max && self.h_max < 1.0) {
            return Err(Error::Config(format!("h range [{}, {}] must satisfy 0 < h_min <= h_max < 1", self.h_min, self.h_max)));
        }
        if self.count == 0 || (self.count == 1 && self.h_min != self.h_max) {
            return Err(Error::Config("sweep count must be at least 2 for a range".into()));
        }
        if let Domain::Ellipse { a, b } = self.domain {
            if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
                return Err(Error::Config(format!("ellipse semi-axes {a}, {b} must be positive")));
            }
        }
        if let Some(a0) = self.alpha0 {
            if !a0.is_finite() {
                return Err(Error::Config("alpha0 must be finite".into()));
            }
        }
        Ok(())
    }

    /// Sweep points in increasing `h`.
    pub fn h_grid(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.h_min];
        }
        let n = self.count;
        let mut hs: Vec<f64> = (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Quarter => {
                        let (x0, x1) = (self.h_max.powf(-0.25), self.h_min.powf(-0.25));
                        (x0 + f * (x1 - x0)).powi(-4)
                    }
                    Spacing::Inverse => {
                        let (x0, x1) = (1.0 / self.h_max, 1.0 / self.h_min);
                        1.0 / (x0 + f * (x1 - x0))
                    }
                }
            })
            .collect();
        hs.reverse();
        hs
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("[domain]\n");
        match &self.domain {
            Domain::Ellipse { a, b } => {
                let _ = writeln!(s, "kind = ellipse\na = {a:?}\nb = {b:?}");
            }
            Domain::Curve { path } => {
                let _ = writeln!(s, "kind = curve\ncurve = {}", path.display());
            }
        }
        let _ = writeln!(s, "\n[degennes]\nt_max = {:?}\nn = {}", self.t_max, self.grid_n);
        let _ = writeln!(s, "\n[geometry]\nsamples = {}", self.samples);
        let _ = writeln!(
            s,
            "\n[sweep]\nh_min = {:?}\nh_max = {:?}\ncount = {}\nspacing = {}\nalpha0 = {}",
            self.h_min,
            self.h_max,
            self.count,
            match self.spacing {
                Spacing::Quarter => "quarter",
                Spacing::Inverse => "inverse",
            },
            self.alpha0.map_or("fit".to_string(), |v| format!("{v:?}"))
        );
        let _ = writeln!(
            s,
            "\n[oracles]\neffective1d = {}\nboundary2d = {}\nn_s = {}\nn_tau = {}",
            self.effective1d, self.boundary2d, self.n_s, self.n_tau
        );
        let _ = writeln!(
            s,
            "\n[output]\ndir = {}\nstrict_paper_signs = {}",
            self.out.display(),
            self.strict_paper_signs
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_default() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_key() {
        assert!(RunConfig::parse("[sweep]\nh_mim = 0.1\n").is_err());
        assert!(RunConfig::parse("[nope]\n").is_err());
    }

    #[test]
    fn grid_is_increasing() {
        let c = RunConfig { count: 7, ..RunConfig::default() };
        let h = c.h_grid();
        assert_eq!(h.len(), 7);
        assert!(h.windows(2).all(|w| w[0] < w[1]));
        assert!((h[0] - c.h_min).abs() < 1e-15 && (h[6] - c.h_max).abs() < 1e-15);
    }
}
