//! Closed-form tunneling predictions and their comparison with numerics.
//!
//! With `eps = h^{1/4}` and `f(h) = gamma0/h - xi0/h^{1/2} - alpha0`:
//!
//! * effective interaction
//!   `w = mu2 h^{1/8} pi^{-1/2} g^{1/2} (A_u sqrt V(0) e^{-S_u/eps} + A_d sqrt V(L) e^{-S_d/eps})`,
//! * full interaction, same with `h^{13/8}` and phases `e^{+-i L f(h)}` on the
//!   two terms; the predicted gap is `2 |w~|`.
//!
//! Magnitudes are carried as logarithms so that nothing underflows.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::degennes::DeGennesConstants;
use crate::effective::AgmonData;
use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::linalg::roots::{brent, golden_min, linear_fit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplittingInputs {
    pub theta0: f64,
    pub xi0: f64,
    pub c1: f64,
    pub mu2: f64,
    pub l: f64,
    pub gamma0: f64,
    pub k2: f64,
    pub kappa_max: f64,
    pub kappa_min: f64,
    pub s_u: f64,
    pub s_d: f64,
    pub g: f64,
    pub a_u: f64,
    pub a_d: f64,
    pub v0: f64,
    pub vl: f64,
    pub alpha0: f64,
}

impl SplittingInputs {
    pub fn new(consts: &DeGennesConstants, geo: &Geometry, agmon: &AgmonData, alpha0: f64) -> Self {
        Self {
            theta0: consts.theta0,
            xi0: consts.xi0,
            c1: consts.c1,
            mu2: consts.mu2,
            l: geo.table.l,
            gamma0: geo.flux.gamma0,
            k2: geo.wells.k2,
            kappa_max: geo.wells.kappa_max,
            kappa_min: geo.wells.kappa_min,
            s_u: agmon.s_u,
            s_d: agmon.s_d,
            g: agmon.g,
            a_u: agmon.a_u,
            a_d: agmon.a_d,
            v0: agmon.v_top,
            vl: agmon.v_bottom,
            alpha0,
        }
    }

    pub fn with_alpha0(&self, alpha0: f64) -> Self {
        Self { alpha0, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("theta0", self.theta0),
            ("xi0", self.xi0),
            ("c1", self.c1),
            ("mu2", self.mu2),
            ("L", self.l),
            ("gamma0", self.gamma0),
            ("k2", self.k2),
            ("S_u", self.s_u),
            ("S_d", self.s_d),
            ("g", self.g),
            ("A_u", self.a_u),
            ("A_d", self.a_d),
            ("V(0)", self.v0),
            ("V(L)", self.vl),
        ];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Precondition(format!("{name} = {v} must be positive and finite")));
            }
        }
        if !self.alpha0.is_finite() {
            return Err(Error::Precondition("alpha0 must be finite".into()));
        }
        Ok(())
    }

    pub fn s(&self) -> f64 {
        self.s_u.min(self.s_d)
    }

    /// `f(h) = gamma0/h - xi0/h^{1/2} - alpha0`.
    pub fn flux_phase(&self, h: f64) -> f64 {
        self.gamma0 / h - self.xi0 / h.sqrt() - self.alpha0
    }

    /// `L f(h)` reduced to `[0, 2 pi)`.
    pub fn phase_mod_2pi(&self, h: f64) -> f64 {
        (self.l * self.flux_phase(h)).rem_euclid(2.0 * PI)
    }

    fn log_terms(&self) -> (f64, f64) {
        (
            (self.a_u * self.v0.sqrt()).ln(),
            (self.a_d * self.vl.sqrt()).ln(),
        )
    }

    fn ln_common(&self, h: f64, power: f64) -> f64 {
        self.mu2.ln() + power * h.ln() - 0.5 * PI.ln() + 0.5 * self.g.ln()
    }
}

/// A real number stored as `sign * exp(ln_mag)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogReal {
    pub ln_mag: f64,
    pub sign: f64,
}

impl LogReal {
    pub fn value(&self) -> f64 {
        self.sign * self.ln_mag.exp()
    }
}

/// A complex number stored as `exp(ln_mag + i arg)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogComplex {
    pub ln_mag: f64,
    pub arg: f64,
}

impl LogComplex {
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.ln_mag.exp(), self.arg)
    }

    pub fn norm(&self) -> f64 {
        self.ln_mag.exp()
    }
}

fn log_sum(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// The effective flux-free interaction `w(h)`.
pub fn w_effective(inp: &SplittingInputs, h: f64) -> LogReal {
    let eps = h.powf(0.25);
    let (lu, ld) = inp.log_terms();
    let ln = inp.ln_common(h, 0.125) + log_sum(lu - inp.s_u / eps, ld - inp.s_d / eps);
    LogReal { ln_mag: ln, sign: 1.0 }
}

/// The full interaction `w~(h)` including the flux phase.
pub fn w_tilde(inp: &SplittingInputs, h: f64) -> LogComplex {
    let eps = h.powf(0.25);
    let (lu, ld) = inp.log_terms();
    let eu = lu - inp.s_u / eps;
    let ed = ld - inp.s_d / eps;
    let m = eu.max(ed);
    let ph = inp.phase_mod_2pi(h);
    let z = Complex64::from_polar((eu - m).exp(), ph) + Complex64::from_polar((ed - m).exp(), -ph);
    let ln = inp.ln_common(h, 1.625) + m + z.norm().ln();
    LogComplex { ln_mag: ln, arg: z.arg() }
}

/// `ln` of the envelope `h^{3/2} w(h)`, the value of `|w~|` with aligned phases.
pub fn ln_envelope(inp: &SplittingInputs, h: f64) -> f64 {
    w_effective(inp, h).ln_mag + 1.5 * h.ln()
}

/// `ln (2 |w~(h)|)`.
pub fn ln_gap_formula(inp: &SplittingInputs, h: f64) -> f64 {
    2f64.ln() + w_tilde(inp, h).ln_mag
}

/// The displayed ellipse form: `h^{13/8} A 2^{5/2} C1^{3/4} pi^{-1/2}
/// (k2 mu2)^{1/4} (kappa_max - kappa_min)^{1/2} e^{-S/h^{1/4}} |cos(L f(h))|`,
/// written in `C1, k2, kappa` instead of `g, V(0)`. Returns `ln`.
pub fn ln_gap_conjecture(inp: &SplittingInputs, h: f64) -> f64 {
    let eps = h.powf(0.25);
    1.625 * h.ln()
        + inp.a_u.ln()
        + 2.5 * 2f64.ln()
        + 0.75 * inp.c1.ln()
        - 0.5 * PI.ln()
        + 0.25 * (inp.k2 * inp.mu2).ln()
        + 0.5 * (inp.kappa_max - inp.kappa_min).ln()
        - inp.s_u / eps
        + inp.phase_mod_2pi(h).cos().abs().ln()
}

/// Units in which a numerical gap series is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Normalization {
    /// Eigenvalues `lambda` of the physical operator: `2 |w~|`.
    Physical,
    /// Rescaled `nu = lambda / h`: `2 |w~| / h`.
    Rescaled,
    /// Effective operator units: `2 |w~| / h^{3/2}`.
    Effective,
}

impl Normalization {
    pub fn ln_factor(&self, h: f64) -> f64 {
        match self {
            Normalization::Physical => 0.0,
            Normalization::Rescaled => -h.ln(),
            Normalization::Effective => -1.5 * h.ln(),
        }
    }
}

/// `ln` of the predicted gap in the given units.
pub fn ln_gap_in(inp: &SplittingInputs, h: f64, norm: Normalization) -> f64 {
    ln_gap_formula(inp, h) + norm.ln_factor(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictionRow {
    pub h: f64,
    pub inv_h: f64,
    pub gap_formula: f64,
    pub envelope: f64,
    pub phase_mod_2pi: f64,
    pub w_eff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplittingPrediction {
    pub rows: Vec<PredictionRow>,
}

pub fn predict(inp: &SplittingInputs, hs: &[f64]) -> SplittingPrediction {
    let rows = hs
        .iter()
        .map(|&h| PredictionRow {
            h,
            inv_h: 1.0 / h,
            gap_formula: ln_gap_formula(inp, h).exp(),
            envelope: ln_envelope(inp, h).exp(),
            phase_mod_2pi: inp.phase_mod_2pi(h),
            w_eff: w_effective(inp, h).value(),
        })
        .collect();
    SplittingPrediction { rows }
}

/// Values of `x = 1/h` in `[lo, hi]` where `cos(L f(1/x)) = 0`, ascending.
pub fn predicted_zeros(inp: &SplittingInputs, lo: f64, hi: f64) -> Vec<f64> {
    // phi(x) = L (gamma0 x - xi0 sqrt x - alpha0) is increasing once
    // sqrt x > xi0 / (2 gamma0)
    let phi = |x: f64| inp.l * (inp.gamma0 * x - inp.xi0 * x.sqrt() - inp.alpha0);
    let xmin = (inp.xi0 / (2.0 * inp.gamma0)).powi(2);
    let lo = lo.max(xmin);
    if hi <= lo {
        return Vec::new();
    }
    let m0 = ((phi(lo) - 0.5 * PI) / PI).ceil() as i64;
    let m1 = ((phi(hi) - 0.5 * PI) / PI).floor() as i64;
    (m0..=m1)
        .filter_map(|m| {
            let target = 0.5 * PI + m as f64 * PI;
            brent(|x| phi(x) - target, lo, hi, 1e-13).ok()
        })
        .collect()
}

/// A numerical gap series over `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSeries {
    pub h: Vec<f64>,
    pub gap: Vec<f64>,
    pub normalization: Normalization,
}

impl GapSeries {
    pub fn new(h: Vec<f64>, gap: Vec<f64>, normalization: Normalization) -> Self {
        Self { h, gap, normalization }
    }

    /// Points sorted by increasing `1/h`, non-positive gaps dropped.
    fn sorted(&self) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = self
            .h
            .iter()
            .zip(&self.gap)
            .filter(|(_, g)| **g > 0.0 && g.is_finite())
            .map(|(h, g)| (1.0 / h, *g))
            .collect();
        v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        v
    }

    /// Interior local minima of the detrended log-gap that dip more than one
    /// unit below the exponential trend, refined by a parabola through the
    /// three points. Positions are in `1/h`.
    pub fn observable_zeros(&self) -> Vec<f64> {
        let pts = self.sorted();
        if pts.len() < 5 {
            return Vec::new();
        }
        let x: Vec<f64> = pts.iter().map(|p| p.0.powf(0.25)).collect();
        let y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
        // robust trend: upper envelope slope via fit on the points above a first fit
        let (c0, c1) = linear_fit(&x, &y);
        let upper: Vec<usize> = (0..x.len()).filter(|&i| y[i] >= c0 + c1 * x[i]).collect();
        let (c0, c1) = if upper.len() >= 2 {
            let xu: Vec<f64> = upper.iter().map(|&i| x[i]).collect();
            let yu: Vec<f64> = upper.iter().map(|&i| y[i]).collect();
            linear_fit(&xu, &yu)
        } else {
            (c0, c1)
        };
        let d: Vec<f64> = (0..x.len()).map(|i| y[i] - c0 - c1 * x[i]).collect();
        let mut zeros = Vec::new();
        for i in 1..d.len() - 1 {
            if d[i] < d[i - 1] && d[i] <= d[i + 1] && d[i] < -1.0 {
                zeros.push(vee_minimum(pts[i - 1].0, pts[i].0, pts[i + 1].0, y[i - 1], y[i], y[i + 1]));
            }
        }
        zeros
    }
}

/// Zero of a model `c |x - z|` through three points around a dip, `y` being
/// log-gaps. Log-gaps near a simple zero behave like `ln |x - z|`, so a
/// parabola would be biased.
fn vee_minimum(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> f64 {
    let (g0, g1, g2) = (y0.exp(), y1.exp(), y2.exp());
    let z = if g2 < g0 {
        // zero right of x1: slope from the left pair
        let c = (g0 - g1) / (x1 - x0);
        x1 + g1 / c
    } else {
        let c = (g2 - g1) / (x2 - x1);
        x1 - g1 / c
    };
    if z.is_finite() && z >= x0 && z <= x2 {
        z
    } else {
        x1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Alpha0Fit {
    pub alpha0: f64,
    /// Root-mean-square log residual over the points used.
    pub residual: f64,
    pub points_used: usize,
    pub zeros_observed: usize,
    /// Log-amplitude offset, zero unless fitted.
    pub ln_amplitude: f64,
}

/// Options for [`fit_alpha0_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Points whose phase lies within this fraction of `pi` from a zero of
    /// the formula are excluded.
    pub exclusion: f64,
    /// Also fit a constant log-amplitude offset.
    pub free_amplitude: bool,
    pub grid: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { exclusion: 0.05, free_amplitude: false, grid: 720 }
    }
}

pub fn fit_alpha0(series: &GapSeries, inp: &SplittingInputs) -> Result<Alpha0Fit> {
    fit_alpha0_with(series, inp, FitOptions::default())
}

pub fn fit_alpha0_with(series: &GapSeries, inp: &SplittingInputs, opt: FitOptions) -> Result<Alpha0Fit> {
    let zeros = series.observable_zeros();
    if zeros.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} observable zeros in the gap series, at least 3 needed",
            zeros.len()
        )));
    }
    let pts: Vec<(f64, f64)> = series.h.iter().cloned().zip(series.gap.iter().cloned()).filter(|p| p.1 > 0.0).collect();
    let objective = |alpha: f64| -> (f64, usize, f64) {
        let inp = inp.with_alpha0(alpha);
        let mut res = Vec::with_capacity(pts.len());
        for &(h, gap) in &pts {
            let ph = inp.phase_mod_2pi(h);
            let dz = ((ph - 0.5 * PI).rem_euclid(PI)).min(PI - (ph - 0.5 * PI).rem_euclid(PI));
            if dz < opt.exclusion * PI {
                continue;
            }
            res.push(gap.ln() - ln_gap_in(&inp, h, series.normalization));
        }
        if res.is_empty() {
            return (f64::INFINITY, 0, 0.0);
        }
        let off = if opt.free_amplitude { res.iter().sum::<f64>() / res.len() as f64 } else { 0.0 };
        let ms = res.iter().map(|r| (r - off).powi(2)).sum::<f64>() / res.len() as f64;
        (ms, res.len(), off)
    };
    let period = PI / inp.l;
    let mut best = (0.0, f64::INFINITY);
    for k in 0..opt.grid {
        let a = period * k as f64 / opt.grid as f64;
        let v = objective(a).0;
        if v < best.1 {
            best = (a, v);
        }
    }
    let step = period / opt.grid as f64;
    let (a, _) = golden_min(|a| objective(a).0, best.0 - step, best.0 + step, 1e-12 * period);
    let alpha0 = a.rem_euclid(period);
    let (ms, used, off) = objective(alpha0);
    Ok(Alpha0Fit { alpha0, residual: ms.sqrt(), points_used: used, zeros_observed: zeros.len(), ln_amplitude: off })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub h: f64,
    pub ln_numeric: f64,
    pub ln_formula: f64,
    /// `(ln numeric - ln formula) / |ln formula|`.
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub normalization: Normalization,
    pub rows: Vec<ComparisonRow>,
    /// Slope of `-ln gap` against `h^{-1/4}` for the numeric series.
    pub slope_numeric: f64,
    pub slope_formula: f64,
    /// Observed numeric zeros paired with the nearest formula zero, in `1/h`.
    pub zero_offsets: Vec<(f64, f64)>,
    pub max_abs_rel_err: f64,
    pub rms_rel_err: f64,
    pub max_abs_ln_ratio: f64,
}

/// Slope of `-ln gap` against `h^{-1/4}` by least squares.
pub fn rate_slope(h: &[f64], gap: &[f64]) -> f64 {
    let x: Vec<f64> = h.iter().map(|h| h.powf(-0.25)).collect();
    let y: Vec<f64> = gap.iter().map(|g| -g.ln()).collect();
    linear_fit(&x, &y).1
}

/// Compares a numeric series with a formula series on the same `h` grid.
pub fn compare(numeric: &GapSeries, formula: &GapSeries) -> Result<ComparisonReport> {
    if numeric.h.len() != formula.h.len()
        || numeric.h.iter().zip(&formula.h).any(|(a, b)| (a - b).abs() > 1e-14 * a.abs())
    {
        return Err(Error::Precondition("numeric and formula series must share the h grid".into()));
    }
    let scale = |s: &GapSeries, i: usize| s.gap[i].ln() - s.normalization.ln_factor(s.h[i]);
    let mut rows = Vec::new();
    for i in 0..numeric.h.len() {
        // bring both to physical units
        let ln_n = scale(numeric, i);
        let ln_f = scale(formula, i);
        rows.push(ComparisonRow { h: numeric.h[i], ln_numeric: ln_n, ln_formula: ln_f, rel_err: (ln_n - ln_f) / ln_f.abs() });
    }
    let finite: Vec<&ComparisonRow> = rows.iter().filter(|r| r.rel_err.is_finite()).collect();
    let max_abs_rel_err = finite.iter().map(|r| r.rel_err.abs()).fold(0.0, f64::max);
    let rms_rel_err = if finite.is_empty() {
        0.0
    } else {
        (finite.iter().map(|r| r.rel_err.powi(2)).sum::<f64>() / finite.len() as f64).sqrt()
    };
    let max_abs_ln_ratio = finite.iter().map(|r| (r.ln_numeric - r.ln_formula).abs()).fold(0.0, f64::max);
    let slope_numeric = rate_slope(&numeric.h, &numeric.gap);
    let slope_formula = rate_slope(&formula.h, &formula.gap);
    let zn = numeric.observable_zeros();
    let zf = formula.observable_zeros();
    let zero_offsets = zn
        .iter()
        .filter_map(|&z| {
            zf.iter()
                .cloned()
                .min_by(|a, b| (a - z).abs().partial_cmp(&(b - z).abs()).unwrap())
                .map(|f| (z, z - f))
        })
        .collect();
    Ok(ComparisonReport {
        normalization: Normalization::Physical,
        rows,
        slope_numeric,
        slope_formula,
        zero_offsets,
        max_abs_rel_err,
        rms_rel_err,
        max_abs_ln_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SplittingInputs {
        SplittingInputs {
            theta0: 0.59,
            xi0: 0.768,
            c1: 0.254,
            mu2: 1.171,
            l: 4.844,
            gamma0: 0.6485,
            k2: 18.0,
            kappa_max: 2.0,
            kappa_min: 0.25,
            s_u: 3.58,
            s_d: 3.58,
            g: 1.976,
            a_u: 150.0,
            a_d: 150.0,
            v0: 0.759,
            vl: 0.759,
            alpha0: 0.0,
        }
    }

    #[test]
    fn symmetric_reduction() {
        let p = sample();
        let h: f64 = 0.01;
        let w = w_effective(&p, h).value();
        let direct = 2.0 * p.mu2 * h.powf(0.125) / PI.sqrt() * p.g.sqrt() * p.a_u * p.v0.sqrt()
            * (-p.s_u / h.powf(0.25)).exp();
        assert!((w - direct).abs() / direct < 1e-13);
    }

    #[test]
    fn no_underflow_at_tiny_h() {
        let p = sample();
        let h = 1e-12;
        let lw = w_effective(&p, h).ln_mag;
        assert!(lw.is_finite() && lw < -3000.0);
        assert!(ln_gap_formula(&p, h).is_finite() || ln_gap_formula(&p, h) == f64::NEG_INFINITY);
    }

    #[test]
    fn zeros_are_cosine_zeros() {
        let p = sample();
        for z in predicted_zeros(&p, 50.0, 60.0) {
            assert!((p.l * p.flux_phase(1.0 / z)).cos().abs() < 1e-11);
        }
    }
}
