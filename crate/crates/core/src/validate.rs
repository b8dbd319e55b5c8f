//! Invariant suite behind `magtunnel validate`, grouped by module.
//!
//! Every section except `degennes` runs on the reference constants, so a
//! section can be selected alone.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::boundary2d::{self, EigenOptions, Flux, TubularGrid, Variant};
use crate::config::RunConfig;
use crate::degennes::{self, HalfLineGrid, REFERENCE};
use crate::effective::{self, EffectivePotential, EffectiveSolver};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, Geometry};
use crate::pipeline::{constants_report, Check};
use crate::splitting::{self, GapSeries, Normalization, SplittingInputs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Module {
    Degennes,
    Geometry,
    Effective,
    Splitting,
    Boundary2d,
    Cli,
}

impl Module {
    pub const ALL: [Module; 6] =
        [Module::Degennes, Module::Geometry, Module::Effective, Module::Splitting, Module::Boundary2d, Module::Cli];

    pub fn name(&self) -> &'static str {
        match self {
            Module::Degennes => "degennes",
            Module::Geometry => "geometry",
            Module::Effective => "effective",
            Module::Splitting => "splitting",
            Module::Boundary2d => "boundary2d",
            Module::Cli => "cli",
        }
    }
}

impl FromStr for Module {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Module::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown module {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub module: Module,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub sections: Vec<Section>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.sections.iter().all(|s| s.checks.iter().all(|c| c.pass))
    }
}

pub fn run(cfg: &RunConfig, only: Option<Module>) -> Result<ValidationReport> {
    let mut sections = Vec::new();
    for m in Module::ALL {
        if only.is_some_and(|o| o != m) {
            continue;
        }
        let checks = match m {
            Module::Degennes => degennes_checks(cfg)?,
            Module::Geometry => geometry_checks()?,
            Module::Effective => effective_checks()?,
            Module::Splitting => splitting_checks()?,
            Module::Boundary2d => boundary2d_checks()?,
            Module::Cli => cli_checks(cfg)?,
        };
        sections.push(Section { module: m, checks });
    }
    Ok(ValidationReport { sections })
}

fn degennes_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let grid = HalfLineGrid::new(cfg.t_max, cfg.grid_n)?;
    let mut checks = constants_report(&grid)?.checks;
    let c = REFERENCE;
    checks.push(Check::within("C1 vs curvature response", degennes::curvature_response(c.xi0, &grid)? - c.c1, 1e-5));
    let mut monotone = true;
    let mut prev = f64::INFINITY;
    for k in 1..=50 {
        let xi = c.xi0 * k as f64 / 50.0;
        let mu = degennes::mu_n(xi, 1, &grid)?.mu;
        monotone &= mu < prev;
        prev = mu;
    }
    checks.push(Check::flag("mu1 decreasing on (0, xi0)", monotone));
    Ok(checks)
}

fn reference_geometry(scale: f64) -> Result<Geometry> {
    Geometry::new(&BoundaryCurve::ellipse(2.0 * scale, scale)?, 4096)
}

fn geometry_checks() -> Result<Vec<Check>> {
    let geo = reference_geometry(1.0)?;
    let w = &geo.wells;
    let l = geo.l();
    let mut checks = vec![
        Check::within("ellipse kappa_max - 2", w.kappa_max - 2.0, 1e-10),
        Check::within("ellipse kappa_min - 1/4", w.kappa_min - 0.25, 1e-10),
        Check::within("turning integral - 2 pi", geo.table.turning_integral() - 2.0 * PI, 1e-6),
        Check::within("s_r + quarter perimeter", w.s_r + 0.5 * l, 1e-6),
        Check::within("s_l - quarter perimeter", w.s_l - 0.5 * l, 1e-6),
        Check::within("perimeter vs AGM", 2.0 * l - crate::geometry::ellipse_perimeter(2.0, 1.0), 1e-9),
    ];
    let lam = 1.7;
    let big = reference_geometry(lam)?;
    let v1 = effective::potential(&geo.table, &geo.wells, &REFERENCE);
    let v2 = effective::potential(&big.table, &big.wells, &REFERENCE);
    let s1 = effective::actions(&v1).s;
    let s2 = effective::actions(&v2).s;
    checks.push(Check::within("scaling: kappa_max lambda", big.wells.kappa_max * lam - w.kappa_max, 1e-9));
    checks.push(Check::within("scaling: L / lambda", big.l() / lam - l, 1e-9));
    checks.push(Check::within("scaling: gamma0 / lambda", big.flux.gamma0 / lam - geo.flux.gamma0, 1e-9));
    checks.push(Check::within("scaling: k2 lambda^3", big.wells.k2 * lam.powi(3) / w.k2 - 1.0, 1e-6));
    checks.push(Check::within("scaling: S lambda^{-1/2}", s2 / lam.sqrt() / s1 - 1.0, 1e-8));
    checks.push(Check::flag("circle has no wells", matches!(Geometry::new(&BoundaryCurve::circle(1.0)?, 1024), Err(Error::NoWells))));
    Ok(checks)
}

fn effective_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    // V = g^2 d(s)^2 with d the distance to the nearer well
    let g: f64 = 1.3;
    let harm = EffectivePotential::synthetic(PI, -0.5 * PI, 0.5 * PI, 2.0, 1024, move |s| {
        let d = (s.abs() - 0.5 * PI).abs();
        g * g * d * d
    });
    let p = effective::prefactors(&harm)?;
    checks.push(Check::within("harmonic prefactor A_u - 1", p.a_u - 1.0, 1e-12));
    checks.push(Check::within("harmonic prefactor A_d - 1", p.a_d - 1.0, 1e-12));

    let geo = reference_geometry(1.0)?;
    let v = effective::potential(&geo.table, &geo.wells, &REFERENCE);
    let p = effective::prefactors(&v)?;
    let m = effective::prefactors_mirrored(&v)?;
    checks.push(Check::within("ellipse (A_u - A_d) / A_u", (p.a_u - p.a_d) / p.a_u, 1e-6));
    checks.push(Check::within("mirrored prefactor", (m.a_u - p.a_u) / p.a_u, 1e-6));
    checks.push(Check::within(
        "amplitude normalization / A_u - 1",
        effective::amplitude_normalization(&v)? / p.a_u - 1.0,
        1e-8,
    ));
    let fine = Geometry::new(&BoundaryCurve::ellipse(2.0, 1.0)?, 8192)?;
    let vf = effective::potential(&fine.table, &fine.wells, &REFERENCE);
    checks.push(Check::within("S_u at n and 2n", effective::actions(&vf).s_u - effective::actions(&v).s_u, 1e-8));

    let free = EffectivePotential::synthetic(PI, -0.5 * PI, 0.5 * PI, 2.0, 256, |_| 0.0);
    let s = EffectiveSolver::new(&free, 20)?;
    let e = s.eigenvalues(1.0 - 1e-15, 0.5, 4)?;
    let err = e.iter().zip([0.25, 0.25, 2.25, 2.25]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    checks.push(Check::within("free circle with half flux", err, 1e-6));

    let h = 0.002;
    let period = PI / v.l;
    let e0 = effective::effective_eigs(&v, h, 0.3, 4)?;
    let e1 = effective::effective_eigs(&v, h, 0.3 + period, 4)?;
    let e2 = effective::effective_eigs(&v, h, -0.3, 4)?;
    let d1 = e0.iter().zip(&e1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let d2 = e0.iter().zip(&e2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    checks.push(Check::within("flux period pi/L", d1, 1e-8));
    checks.push(Check::within("flux reversal", d2, 1e-8));
    Ok(checks)
}

fn reference_inputs(alpha0: f64) -> Result<SplittingInputs> {
    let geo = reference_geometry(1.0)?;
    let v = effective::potential(&geo.table, &geo.wells, &REFERENCE);
    let agmon = effective::agmon_data(&v)?;
    Ok(SplittingInputs::new(&REFERENCE, &geo, &agmon, alpha0))
}

fn splitting_checks() -> Result<Vec<Check>> {
    let inp = reference_inputs(0.0)?;
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let h = 1e-4 * (100f64).powf(k as f64 / 199.0);
        let a = splitting::ln_gap_formula(&inp, h);
        let b = splitting::ln_gap_conjecture(&inp, h);
        if a.is_finite() && b.is_finite() {
            worst = worst.max(((a - b).exp() - 1.0).abs());
        }
    }
    let mut checks = vec![Check::within("general vs ellipse form, relative", worst, 1e-10)];
    let zero_err = splitting::predicted_zeros(&inp, 50.0, 80.0)
        .iter()
        .map(|z| (inp.l * inp.flux_phase(1.0 / z)).cos().abs())
        .fold(0.0, f64::max);
    checks.push(Check::within("predicted zeros are cosine zeros", zero_err, 1e-10));

    // synthetic series from the formula itself
    let truth = 0.4;
    let shifted = inp.with_alpha0(truth);
    let hs: Vec<f64> = (0..400).map(|i| 1.0 / (150.0 + 0.01 * i as f64)).collect();
    let gaps: Vec<f64> = hs.iter().map(|&h| splitting::ln_gap_formula(&shifted, h).exp()).collect();
    let series = GapSeries::new(hs, gaps, Normalization::Physical);
    let fit = splitting::fit_alpha0(&series, &inp)?;
    let period = PI / inp.l;
    let d = (fit.alpha0 - truth).rem_euclid(period);
    checks.push(Check::within("alpha0 round trip", d.min(period - d), 1e-8));
    Ok(checks)
}

fn boundary2d_checks() -> Result<Vec<Check>> {
    let c = REFERENCE;
    let mut checks = Vec::new();
    let hbar = 0.1;
    let grid = TubularGrid::new(256, 120, hbar, 12.0, 0.1)?;
    let ds = 40.0 / 256.0;
    let s: Vec<f64> = (0..256).map(|j| -20.0 + ds * j as f64).collect();
    let strip = boundary2d::assemble_profile(&grid, s, vec![0.0; 256], true, c.xi0, ds)?;
    let r = boundary2d::lowest_pair_with(&strip, &EigenOptions { want: 1, ..EigenOptions::near(c.theta0) }, None)?;
    let band = degennes::mu_n(c.xi0, 1, &HalfLineGrid { t_max: 12.0, n: 120 })?.mu;
    checks.push(Check::within("flat strip vs half-line band", r.nu1 - band, 1e-10));

    let geo = reference_geometry(1.0)?;
    let small = TubularGrid::new(64, 32, 0.2, 12.0, 0.1)?;
    let op = boundary2d::assemble(&geo.table, &geo.wells, &small, Flux::Gamma(geo.flux.gamma0), Variant::TwoWell, c.xi0)?;
    let n = op.dim();
    let u: Vec<Complex64> = (0..n).map(|i| Complex64::new((0.7 * i as f64).sin(), (1.3 * i as f64).cos())).collect();
    let v: Vec<Complex64> = (0..n).map(|i| Complex64::new((0.37 * i as f64).cos(), (2.1 * i as f64).sin())).collect();
    let d = (op.inner(&op.apply(&u), &v) - op.inner(&u, &op.apply(&v))).norm();
    checks.push(Check::within(
        "weighted symmetry / (|N| |u| |v|)",
        d / (op.norm_bound() * op.norm(&u) * op.norm(&v)),
        1e-12,
    ));
    let amin = op.weight.iter().cloned().fold(f64::INFINITY, f64::min);
    checks.push(Check::flag("weight a in (1/2, 1]", amin > boundary2d::WEIGHT_FLOOR));

    let need = TubularGrid::required_ns(geo.l(), c.xi0, hbar);
    let coarse = TubularGrid::new(need - 1, 32, hbar, 12.0, 0.1)?;
    checks.push(Check::flag(
        "coarse tangential grid refused",
        matches!(
            boundary2d::assemble(&geo.table, &geo.wells, &coarse, Flux::Zero, Variant::TwoWell, c.xi0),
            Err(Error::Resolution(_))
        ),
    ));

    let opts = EigenOptions { want: 1, ..EigenOptions::near(c.theta0 - c.c1 * geo.wells.kappa_max * 0.2) };
    let well = |variant| -> Result<f64> {
        let op = boundary2d::assemble(&geo.table, &geo.wells, &small, Flux::Zero, variant, c.xi0)?;
        Ok(boundary2d::lowest_pair_with(&op, &opts, None)?.nu1)
    };
    checks.push(Check::within("one-well right vs left", well(Variant::OneWellRight)? - well(Variant::OneWellLeft)?, 1e-10));
    Ok(checks)
}

fn cli_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let echo = RunConfig::parse(&cfg.to_text())?;
    Ok(vec![Check::flag("config echo re-parses equal", &echo == cfg)])
}
