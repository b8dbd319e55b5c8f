//! Orchestration: constants, geometry, effective potential, splitting
//! formulas and the two oracles, with CSV output.

use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::boundary2d::{self, EigenOptions, EigenSolveResult, Flux, TubularGrid, Variant};
use crate::config::{Domain, RunConfig};
use crate::degennes::{self, DeGennesConstants, HalfLineGrid};
use crate::effective::{self, AgmonData, EffectivePotential};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, Geometry};
use crate::splitting::{self, SplittingInputs};

/// Environment variable replacing the computed `C1` (for exercising the
/// identity checks).
pub const C1_OVERRIDE_ENV: &str = "MAGTUNNEL_C1_OVERRIDE";

/// Smallest and largest `hbar = h^{1/2}` accepted by the 2D oracle.
pub const BOUNDARY2D_HBAR_RANGE: (f64, f64) = (0.06, 0.25);
/// Gaps below this fraction of the lowest eigenvalue are not resolved.
pub const GAP_RESOLUTION: f64 = 1e-10;

/// Formats `x` with `sig` significant digits, without exponent when the
/// magnitude allows.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..=6).contains(&e) {
        let dec = (sig as i32 - 1 - e).max(0) as usize;
        format!("{x:.dec$}")
    } else {
        format!("{:.*e}", sig - 1, x)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `|value| <= tolerance`.
    pub fn within(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, pass: value.abs() <= tolerance }
    }

    pub fn flag(name: &str, ok: bool) -> Self {
        Self { name: name.into(), value: if ok { 0.0 } else { 1.0 }, tolerance: 0.0, pass: ok }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

pub fn curve_from(domain: &Domain) -> Result<BoundaryCurve> {
    match domain {
        Domain::Ellipse { a, b } => BoundaryCurve::ellipse(*a, *b),
        Domain::Curve { path } => BoundaryCurve::from_file(path),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub constants: DeGennesConstants,
    pub grid: HalfLineGrid,
    pub checks: Vec<Check>,
}

/// Computes the constants and the identity table. An under-resolved grid
/// still produces values; the resolution check then fails.
pub fn constants_report(grid: &HalfLineGrid) -> Result<ConstantsReport> {
    let mut c = degennes::constants_unchecked(grid)?;
    if let Ok(v) = std::env::var(C1_OVERRIDE_ENV) {
        c.c1 = v.parse().map_err(|_| Error::Config(format!("{C1_OVERRIDE_ENV}={v:?} is not a number")))?;
    }
    let mut checks = vec![Check::flag(
        "grid_resolution",
        grid.n >= degennes::MIN_EXTRACTION_NODES,
    )];
    checks.push(Check::within("xi0^2 - theta0", c.xi0 * c.xi0 - c.theta0, 1e-6));
    let mu0 = degennes::mu_n(0.0, 1, grid)?.mu;
    checks.push(Check::within("mu1(0) - 1", mu0 - 1.0, 1e-5));
    let (r1, r2) = degennes::moment_residuals(grid, c.xi0, c.mu2, 0.05)?;
    checks.push(Check::within("moment r1", r1, 1e-6));
    checks.push(Check::within("moment r2", r2, 1e-3));
    checks.push(Check::within(
        "(mu1'' - 6 C1 sqrt(theta0)) / mu1''",
        (c.mu2 - 6.0 * c.c1 * c.theta0.sqrt()) / c.mu2,
        1e-3,
    ));
    let c2 = degennes::c2(c.xi0, c.theta0, grid)?;
    checks.push(Check::within("(C2 - mu1''/2) / (mu1''/2)", (c2 - 0.5 * c.mu2) / (0.5 * c.mu2), 1e-3));
    Ok(ConstantsReport { constants: c, grid: *grid, checks })
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometryReport {
    pub perimeter: f64,
    pub half_perimeter: f64,
    pub s_r: f64,
    pub s_l: f64,
    pub kappa_max: f64,
    pub kappa_min: f64,
    pub k2: f64,
    pub k2_left: f64,
    pub symmetric: bool,
    pub area: f64,
    pub gamma0: f64,
    pub turning_defect: f64,
    pub mirror_defect: f64,
}

pub fn geometry_report(geo: &Geometry) -> GeometryReport {
    let w = &geo.wells;
    GeometryReport {
        perimeter: 2.0 * geo.table.l,
        half_perimeter: geo.table.l,
        s_r: w.s_r,
        s_l: w.s_l,
        kappa_max: w.kappa_max,
        kappa_min: w.kappa_min,
        k2: w.k2,
        k2_left: w.k2_left,
        symmetric: w.symmetric,
        area: geo.flux.area,
        gamma0: geo.flux.gamma0,
        turning_defect: geo.table.turning_integral() - 2.0 * std::f64::consts::PI,
        mirror_defect: geo.table.mirror_defect(),
    }
}

/// Everything downstream of the configuration.
#[derive(Debug, Clone)]
pub struct Model {
    pub constants: DeGennesConstants,
    pub geometry: Geometry,
    pub potential: EffectivePotential,
    pub agmon: AgmonData,
    pub inputs: SplittingInputs,
}

impl Model {
    pub fn build(cfg: &RunConfig) -> Result<Self> {
        let grid = HalfLineGrid::new(cfg.t_max, cfg.grid_n)?;
        let constants = degennes::constants(&grid)?;
        Self::with_constants(cfg, constants)
    }

    pub fn with_constants(cfg: &RunConfig, constants: DeGennesConstants) -> Result<Self> {
        let curve = curve_from(&cfg.domain)?;
        let geometry = Geometry::new(&curve, cfg.samples)?;
        let potential = effective::potential(&geometry.table, &geometry.wells, &constants);
        let agmon = effective::agmon_data(&potential)?;
        let inputs = SplittingInputs::new(&constants, &geometry, &agmon, cfg.alpha0.unwrap_or(0.0));
        inputs.validate()?;
        Ok(Self { constants, geometry, potential, agmon, inputs })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub h: f64,
    pub inv_h: f64,
    pub gap_formula: f64,
    pub envelope: f64,
    pub phase_mod_2pi: f64,
    pub gap_conjecture: f64,
    pub gap_effective: f64,
    pub gap_2d: f64,
    pub reason: String,
}

pub const SWEEP_COLUMNS: [&str; 9] =
    ["h", "inv_h", "gap_formula", "envelope", "phase_mod_2pi", "gap_conjecture", "gap_effective", "gap_2d", "reason"];

/// Effective-oracle gap in physical units at flux phase `f(h)`.
pub fn effective_gap(model: &Model, h: f64) -> std::result::Result<f64, String> {
    let theta = model.inputs.flux_phase(h);
    match effective::effective_eigs(&model.potential, h, theta, 2) {
        Ok(e) => {
            let gap = e[1] - e[0];
            if gap < GAP_RESOLUTION * e[0].abs() {
                Err("effective gap below eigensolver resolution".into())
            } else {
                Ok(gap * h.powf(1.5))
            }
        }
        Err(e) => Err(format!("effective oracle: {e}")),
    }
}

/// 2D-oracle lowest pair at `hbar = h^{1/2}`.
pub fn boundary_pair(
    model: &Model,
    h: f64,
    n_s: usize,
    n_tau: usize,
    warm: Option<&EigenSolveResult>,
) -> Result<EigenSolveResult> {
    let hbar = h.sqrt();
    let (lo, hi) = BOUNDARY2D_HBAR_RANGE;
    if !(hbar >= lo && hbar <= hi) {
        return Err(Error::Precondition(format!("hbar = {hbar} outside the 2D oracle range [{lo}, {hi}]")));
    }
    let l = model.geometry.l();
    let c = &model.constants;
    let need = TubularGrid::required_ns(l, c.xi0, hbar).next_multiple_of(8);
    let grid = TubularGrid::new(n_s.max(need), n_tau, hbar, 12.0, 0.1)?;
    let op = boundary2d::assemble(
        &model.geometry.table,
        &model.geometry.wells,
        &grid,
        Flux::Gamma(model.geometry.flux.gamma0),
        Variant::TwoWell,
        c.xi0,
    )?;
    let mut opts = EigenOptions::near(c.theta0 - c.c1 * model.geometry.wells.kappa_max * hbar);
    if let Some(w) = warm {
        opts.shift = Some(w.nu1 - 0.002);
    }
    boundary2d::lowest_pair_with(&op, &opts, warm)
}

pub fn sweep(model: &Model, cfg: &RunConfig, hs: &[f64]) -> Vec<SweepRow> {
    let inp = &model.inputs;
    let mut warm: Option<EigenSolveResult> = None;
    hs.iter()
        .map(|&h| {
            let mut reasons = Vec::new();
            let gap_effective = if cfg.effective1d {
                effective_gap(model, h).unwrap_or_else(|r| {
                    reasons.push(r);
                    f64::NAN
                })
            } else {
                f64::NAN
            };
            let gap_2d = if cfg.boundary2d {
                match boundary_pair(model, h, cfg.n_s, cfg.n_tau, warm.as_ref()) {
                    Ok(r) => {
                        let g = r.gap();
                        let out = if g < GAP_RESOLUTION * r.nu1.abs() {
                            reasons.push("2D gap below eigensolver resolution".into());
                            f64::NAN
                        } else {
                            g * h
                        };
                        warm = Some(r);
                        out
                    }
                    Err(e) => {
                        reasons.push(format!("2D oracle: {e}"));
                        f64::NAN
                    }
                }
            } else {
                f64::NAN
            };
            SweepRow {
                h,
                inv_h: 1.0 / h,
                gap_formula: splitting::ln_gap_formula(inp, h).exp(),
                envelope: (2f64.ln() + splitting::ln_envelope(inp, h)).exp(),
                phase_mod_2pi: inp.phase_mod_2pi(h),
                gap_conjecture: splitting::ln_gap_conjecture(inp, h).exp(),
                gap_effective,
                gap_2d,
                reason: reasons.join("; "),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub s: f64,
    /// Slope of `-ln` of the formula envelope against `h^{-1/4}`.
    pub slope_envelope: f64,
    pub zeros_formula: Vec<f64>,
    pub zeros_effective: Vec<f64>,
    pub zeros_2d: Vec<f64>,
    pub predicted_spacing: f64,
    /// Largest step of the grid in `1/h` is below a quarter of the
    /// predicted zero spacing; the zero lists are empty otherwise.
    pub resolves_oscillation: bool,
}

pub fn summarize(model: &Model, rows: &[SweepRow]) -> SweepSummary {
    use splitting::{GapSeries, Normalization};
    let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let col = |f: fn(&SweepRow) -> f64| -> Vec<f64> { rows.iter().map(f).collect() };
    let predicted_spacing = std::f64::consts::PI / (model.geometry.l() * model.geometry.flux.gamma0);
    let max_step = h.windows(2).map(|w| (1.0 / w[0] - 1.0 / w[1]).abs()).fold(0.0, f64::max);
    let resolves_oscillation = h.len() >= 3 && max_step < 0.25 * predicted_spacing;
    let zeros = |g: Vec<f64>| {
        if resolves_oscillation {
            GapSeries::new(h.clone(), g, Normalization::Physical).observable_zeros()
        } else {
            Vec::new()
        }
    };
    let env = col(|r| r.envelope);
    let slope_envelope = if h.len() >= 2 { splitting::rate_slope(&h, &env) } else { f64::NAN };
    SweepSummary {
        s: model.agmon.s,
        slope_envelope,
        zeros_formula: zeros(col(|r| r.gap_formula)),
        zeros_effective: zeros(col(|r| r.gap_effective)),
        zeros_2d: zeros(col(|r| r.gap_2d)),
        predicted_spacing,
        resolves_oscillation,
    }
}

/// Writes a CSV with `#` comment lines, a header, and values with 15
/// significant digits.
pub fn write_csv(path: &Path, comments: &[String], columns: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for c in comments {
        writeln!(f, "# {c}")?;
    }
    writeln!(f, "{}", columns.join(","))?;
    for r in rows {
        writeln!(f, "{}", r.join(","))?;
    }
    f.flush()?;
    Ok(())
}

pub fn csv_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.14e}")
    } else {
        "NaN".into()
    }
}

pub fn sweep_csv_rows(rows: &[SweepRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            let mut v: Vec<String> = [r.h, r.inv_h, r.gap_formula, r.envelope, r.phase_mod_2pi, r.gap_conjecture, r.gap_effective, r.gap_2d]
                .iter()
                .map(|&x| csv_num(x))
                .collect();
            v.push(if r.reason.is_empty() { String::new() } else { format!("\"{}\"", r.reason.replace('"', "'")) });
            v
        })
        .collect()
}

pub fn sweep_comments() -> Vec<String> {
    vec![
        "h: semiclassical parameter; inv_h = 1/h".into(),
        "gap_formula = 2|w~(h)|; envelope = 2 h^{3/2} w(h) (aligned phases); physical eigenvalue units".into(),
        "phase_mod_2pi = L f(h) mod 2 pi, f(h) = gamma0/h - xi0/h^{1/2} - alpha0".into(),
        "gap_conjecture: symmetric-domain closed form".into(),
        "gap_effective = h^{3/2} (lambda2 - lambda1) of the effective flux operator at theta = f(h)".into(),
        "gap_2d = h (nu2 - nu1) of the rescaled boundary operator at hbar = h^{1/2}".into(),
        "NaN entries carry a reason".into(),
    ]
}
