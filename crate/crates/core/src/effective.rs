//! Effective boundary potential, Agmon distances, actions, tunneling
//! prefactors, the leading WKB amplitude, and a Fourier eigensolver for the
//! effective flux operator `(mu2/2) (h^{1/2} (D_s + theta)^2 + V)` on the
//! circle of length `2L`.
//!
//! Near each well `V(s) = x^2 P(x)`, `x = s - s_well`, with `P` represented by
//! a Chebyshev interpolant on `|x| < 0.02 L`. This keeps `sqrt V = |x| sqrt P`
//! and the prefactor integrand free of cancellation at the well.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::degennes::DeGennesConstants;
use crate::error::{Error, Result};
use crate::geometry::{ArcLengthTable, WellData};
use crate::linalg::GaussRule;

/// Radius of the near-well expansion, in units of `L`.
pub const WELL_RADIUS: f64 = 0.02;
const CHEB_NODES: usize = 20;
const GAUSS_ORDER: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Well {
    Right,
    Left,
}

/// `P(x) = V(s_w + x) / x^2` as a polynomial in `y = x / r`.
#[derive(Debug, Clone)]
struct WellExpansion {
    s_w: f64,
    r: f64,
    /// Monomial coefficients in `y`.
    c: Vec<f64>,
}

impl WellExpansion {
    fn new(v: &dyn Fn(f64) -> f64, s_w: f64, r: f64) -> Self {
        let n = CHEB_NODES;
        let nodes: Vec<f64> = (0..n).map(|k| (PI * (k as f64 + 0.5) / n as f64).cos()).collect();
        let vals: Vec<f64> = nodes
            .iter()
            .map(|&y| {
                let x = r * y;
                v(s_w + x) / (x * x)
            })
            .collect();
        // Chebyshev coefficients
        let cheb: Vec<f64> = (0..n)
            .map(|j| {
                let s: f64 = (0..n)
                    .map(|k| vals[k] * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos())
                    .sum();
                s * if j == 0 { 1.0 / n as f64 } else { 2.0 / n as f64 }
            })
            .collect();
        // T_j in the monomial basis by the three-term recurrence
        let mut c = vec![0.0; n];
        let mut t_prev = vec![0.0; n];
        let mut t_cur = vec![0.0; n];
        t_prev[0] = 1.0;
        t_cur[1] = 1.0;
        c[0] += cheb[0];
        for k in 0..n {
            c[k] += cheb[1] * t_cur[k];
        }
        for coef in cheb.iter().skip(2) {
            let mut t_next = vec![0.0; n];
            for k in 0..n {
                if k > 0 {
                    t_next[k] += 2.0 * t_cur[k - 1];
                }
                t_next[k] -= t_prev[k];
            }
            for k in 0..n {
                c[k] += coef * t_next[k];
            }
            t_prev = t_cur;
            t_cur = t_next;
        }
        Self { s_w, r, c }
    }

    fn p(&self, x: f64) -> f64 {
        let y = x / self.r;
        self.c.iter().rev().fold(0.0, |acc, c| acc * y + c)
    }

    fn p0(&self) -> f64 {
        self.c[0]
    }

    fn dp(&self, x: f64) -> f64 {
        let y = x / self.r;
        let mut acc = 0.0;
        for k in (1..self.c.len()).rev() {
            acc = acc * y + k as f64 * self.c[k];
        }
        acc / self.r
    }

    /// `(P(x) - P(0)) / x`.
    fn q(&self, x: f64) -> f64 {
        let y = x / self.r;
        let mut acc = 0.0;
        for k in (1..self.c.len()).rev() {
            acc = acc * y + self.c[k];
        }
        acc / self.r
    }
}

type PotentialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The effective potential `V(s) = 2 C1 (kappa_max - kappa(s)) / mu2` on the
/// circle `[-L, L)`, or any other nonnegative even-order double well.
#[derive(Clone)]
pub struct EffectivePotential {
    pub l: f64,
    pub s_r: f64,
    pub s_l: f64,
    /// `mu_1''(xi0)`, the kinetic prefactor of the effective operator.
    pub mu2: f64,
    /// Samples on the uniform grid `s_j = -L + j 2L / n`.
    pub samples: Vec<f64>,
    raw: PotentialFn,
    wells: [WellExpansion; 2],
}

impl std::fmt::Debug for EffectivePotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EffectivePotential")
            .field("l", &self.l)
            .field("s_r", &self.s_r)
            .field("s_l", &self.s_l)
            .field("mu2", &self.mu2)
            .field("n", &self.samples.len())
            .finish()
    }
}

/// Builds the effective potential of a boundary.
pub fn potential(table: &ArcLengthTable, wells: &WellData, consts: &DeGennesConstants) -> EffectivePotential {
    let table = Arc::new(table.clone());
    let coef = 2.0 * consts.c1 / consts.mu2;
    let kmax = wells.kappa_max;
    let t = table.clone();
    let raw: PotentialFn = Arc::new(move |s| (coef * (kmax - t.kappa_exact(s))).max(0.0));
    EffectivePotential::from_fn(table.l, wells.s_r, wells.s_l, consts.mu2, table.len(), raw)
}

impl EffectivePotential {
    /// A potential given pointwise, `2L`-periodic, vanishing quadratically at
    /// `s_r` and `s_l`. `n` is the sample count of the uniform grid.
    pub fn from_fn(l: f64, s_r: f64, s_l: f64, mu2: f64, n: usize, v: PotentialFn) -> Self {
        let r = WELL_RADIUS * l;
        let wells = [WellExpansion::new(&*v, s_r, r), WellExpansion::new(&*v, s_l, r)];
        let mut out = Self { l, s_r, s_l, mu2, samples: Vec::new(), raw: v, wells };
        out.samples = (0..n).map(|j| out.value(-l + 2.0 * l * j as f64 / n as f64)).collect();
        out
    }

    /// Builds from a closure; convenience for synthetic potentials.
    pub fn synthetic<F>(l: f64, s_r: f64, s_l: f64, mu2: f64, n: usize, v: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_fn(l, s_r, s_l, mu2, n, Arc::new(v))
    }

    pub fn well_position(&self, w: Well) -> f64 {
        match w {
            Well::Right => self.s_r,
            Well::Left => self.s_l,
        }
    }

    fn expansion(&self, w: Well) -> &WellExpansion {
        match w {
            Well::Right => &self.wells[0],
            Well::Left => &self.wells[1],
        }
    }

    /// Offset from the nearest periodic copy of a well, if within the
    /// expansion radius.
    fn near_well(&self, s: f64) -> Option<(&WellExpansion, f64)> {
        for e in &self.wells {
            let x = (s - e.s_w + self.l).rem_euclid(2.0 * self.l) - self.l;
            if x.abs() < e.r {
                return Some((e, x));
            }
        }
        None
    }

    pub fn value(&self, s: f64) -> f64 {
        match self.near_well(s) {
            Some((e, x)) => x * x * e.p(x),
            None => (self.raw)(s),
        }
    }

    pub fn sqrt_value(&self, s: f64) -> f64 {
        match self.near_well(s) {
            Some((e, x)) => x.abs() * e.p(x).max(0.0).sqrt(),
            None => (self.raw)(s).max(0.0).sqrt(),
        }
    }

    /// `V(0)`, at the upper axis point.
    pub fn v_top(&self) -> f64 {
        self.value(0.0)
    }

    /// `V(L)`, at the lower axis point.
    pub fn v_bottom(&self) -> f64 {
        self.value(self.l)
    }

    /// Harmonic frequency `g = sqrt(V''(s_w) / 2)`.
    pub fn frequency(&self, w: Well) -> f64 {
        self.expansion(w).p0().sqrt()
    }

    /// `int_a^b sqrt(V)` for `a <= b` on the real line (periodic `V`),
    /// split at every well so each panel integrand is analytic.
    pub fn integrate_sqrt(&self, a: f64, b: f64) -> f64 {
        self.integrate_split(a, b, |s| self.sqrt_value(s))
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let mut pts = vec![a, b];
        let p = 2.0 * self.l;
        for e in &self.wells {
            let r = e.r;
            let k0 = ((a - e.s_w - r) / p).floor() as i64;
            let k1 = ((b - e.s_w + r) / p).ceil() as i64;
            for k in k0..=k1 {
                let c = e.s_w + k as f64 * p;
                for q in [c - r, c, c + r] {
                    if q > a && q < b {
                        pts.push(q);
                    }
                }
            }
        }
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        pts.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        pts
    }

    fn integrate_split<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        thread_local! {
            static RULE: GaussRule = GaussRule::new(GAUSS_ORDER);
        }
        if b <= a {
            return 0.0;
        }
        let pts = self.breakpoints(a, b);
        let target = 0.05 * self.l;
        RULE.with(|rule| {
            pts.windows(2)
                .map(|w| {
                    let panels = ((w[1] - w[0]) / target).ceil().max(1.0) as usize;
                    rule.composite(w[0], w[1], panels, &f)
                })
                .sum()
        })
    }

    /// Prefactor exponent `int ((sqrt V)' - g) / sqrt V` along the path from
    /// well `w` to `end` (either direction), with derivatives taken along the
    /// path.
    fn prefactor_exponent(&self, w: Well, end: f64) -> Result<f64> {
        let e = self.expansion(w);
        let g = e.p0().sqrt();
        let dir = if end >= e.s_w { 1.0 } else { -1.0 };
        let len = (end - e.s_w).abs();
        let r = e.r.min(len);
        // near part: with P(y) along the path, f = Q / ((sqrt P + g) sqrt P) + P'/(2P)
        let near = {
            let rule = GaussRule::new(GAUSS_ORDER);
            rule.composite(0.0, r, 4, |y| {
                let x = dir * y;
                let p = e.p(x);
                let sp = p.sqrt();
                dir * e.q(x) / ((sp + g) * sp) + dir * e.dp(x) / (2.0 * p)
            })
        };
        if len <= r {
            return Ok(near);
        }
        let (a, b) = if dir > 0.0 { (e.s_w + r, end) } else { (end, e.s_w - r) };
        let sa = self.sqrt_value(e.s_w + dir * r);
        let sb = self.sqrt_value(end);
        if !(sb > 0.0 && sa > 0.0) {
            return Err(Error::Numerical("prefactor integrand singular: V vanishes on the arc".into()));
        }
        let inv = self.integrate_split(a, b, |s| 1.0 / self.sqrt_value(s));
        if !inv.is_finite() {
            return Err(Error::Numerical("prefactor integrand singular: V vanishes on the arc".into()));
        }
        Ok(near + (sb / sa).ln() - g * inv)
    }

    /// Agmon distance to well `w` along the counter-clockwise arc from the
    /// well to `sigma`.
    pub fn agmon_distance(&self, w: Well, sigma: f64) -> f64 {
        let s_w = self.well_position(w);
        let mut t = sigma;
        while t < s_w {
            t += 2.0 * self.l;
        }
        while t >= s_w + 2.0 * self.l {
            t -= 2.0 * self.l;
        }
        self.integrate_sqrt(s_w, t)
    }

    /// Agmon distance along the straight path from the well to `sigma` on the
    /// universal cover, `|int_{s_w}^{sigma} sqrt V|`.
    pub fn agmon_line(&self, w: Well, sigma: f64) -> f64 {
        let s_w = self.well_position(w);
        if sigma >= s_w {
            self.integrate_sqrt(s_w, sigma)
        } else {
            self.integrate_sqrt(sigma, s_w)
        }
    }

    /// Geodesic Agmon distance on the circle (shorter of the two arcs).
    pub fn agmon_circle(&self, w: Well, sigma: f64) -> f64 {
        let ccw = self.agmon_distance(w, sigma);
        let total = self.integrate_sqrt(self.s_r, self.s_r + 2.0 * self.l);
        ccw.min(total - ccw)
    }

    /// Agmon profile on an increasing grid of points on the universal cover,
    /// accumulated panel by panel.
    pub fn agmon_profile(&self, w: Well, sigmas: &[f64]) -> Vec<f64> {
        let s_w = self.well_position(w);
        let mut out = vec![0.0; sigmas.len()];
        let split = sigmas.partition_point(|&s| s < s_w);
        let mut acc = 0.0;
        let mut prev = s_w;
        for k in split..sigmas.len() {
            acc += self.integrate_sqrt(prev, sigmas[k]);
            prev = sigmas[k];
            out[k] = acc;
        }
        acc = 0.0;
        prev = s_w;
        for k in (0..split).rev() {
            acc += self.integrate_sqrt(sigmas[k], prev);
            prev = sigmas[k];
            out[k] = acc;
        }
        out
    }

    /// Number of uniform samples.
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Actions {
    /// Along the upper arc, through `s = 0`.
    pub s_u: f64,
    /// Along the lower arc, through `s = +-L`.
    pub s_d: f64,
    pub s: f64,
}

pub fn actions(v: &EffectivePotential) -> Actions {
    let s_u = v.integrate_sqrt(v.s_r, v.s_l);
    let s_d = v.integrate_sqrt(v.s_l, v.s_r + 2.0 * v.l);
    Actions { s_u, s_d, s: s_u.min(s_d) }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prefactors {
    pub a_u: f64,
    pub a_d: f64,
    pub g: f64,
}

/// `A_u = exp(-int_{[s_r, 0]} ((sqrt V)' - g) / sqrt V)` and `A_d` likewise
/// on `[s_l, L]`.
pub fn prefactors(v: &EffectivePotential) -> Result<Prefactors> {
    let g = v.frequency(Well::Right);
    if !(g > 0.0) {
        return Err(Error::Assumption("degenerate well: V''(s_r) is not positive".into()));
    }
    let a_u = (-v.prefactor_exponent(Well::Right, 0.0)?).exp();
    let a_d = (-v.prefactor_exponent(Well::Left, v.l)?).exp();
    Ok(Prefactors { a_u, a_d, g })
}

/// Prefactors with the other pairing of arcs (left well to the top point,
/// right well to the bottom point); equal to [`prefactors`] on domains with
/// both reflection symmetries.
pub fn prefactors_mirrored(v: &EffectivePotential) -> Result<Prefactors> {
    let g = v.frequency(Well::Left);
    let a_u = (-v.prefactor_exponent(Well::Left, 0.0)?).exp();
    let a_d = (-v.prefactor_exponent(Well::Right, -v.l)?).exp();
    Ok(Prefactors { a_u, a_d, g })
}

/// The `+g` variant of the upper prefactor integrand, cut off at distance
/// `eps` from the well. It diverges like `2 log(1/eps)`; the value is
/// returned to document the divergence.
pub fn prefactor_plus_g_truncated(v: &EffectivePotential, eps: f64) -> Result<f64> {
    let g = v.frequency(Well::Right);
    let e = v.expansion(Well::Right);
    let base = v.prefactor_exponent(Well::Right, 0.0)?;
    // (f + 2g / sqrt V) integrated on [eps, |s_r|]
    let r = e.r;
    let rule = GaussRule::new(GAUSS_ORDER);
    let near = rule.composite(eps.ln(), r.ln(), 16, |ly| {
        let y = ly.exp();
        y * 2.0 * g / (y * e.p(y).sqrt())
    });
    let far = v.integrate_split(v.s_r + r, 0.0, |s| 2.0 * g / v.sqrt_value(s));
    let small = rule.composite(0.0, eps, 1, |y| {
        let p = e.p(y);
        let sp = p.sqrt();
        e.q(y) / ((sp + g) * sp) + e.dp(y) / (2.0 * p)
    });
    Ok((-(base - small + near + far)).exp())
}

/// Leading WKB amplitude `f(s) = (g/pi)^{1/4} exp(int_{s_w}^s (g - (sqrt V)')/(2 sqrt V))`
/// evaluated along the straight path from the well on the universal cover.
pub fn wkb_amplitude(v: &EffectivePotential, w: Well, sigmas: &[f64]) -> Result<Vec<f64>> {
    let g = v.frequency(w);
    let norm = (g / PI).powf(0.25);
    sigmas
        .iter()
        .map(|&s| {
            let e = v.prefactor_exponent(w, s)?;
            Ok(norm * (-0.5 * e).exp())
        })
        .collect()
}

/// `A_u` read back from the amplitude normalization `f(0)^2 (pi/g)^{1/2}`.
pub fn amplitude_normalization(v: &EffectivePotential) -> Result<f64> {
    let f0 = wkb_amplitude(v, Well::Right, &[0.0])?[0];
    Ok(f0 * f0 * (PI / v.frequency(Well::Right)).sqrt())
}

/// Everything computed from the potential, for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AgmonData {
    pub s_u: f64,
    pub s_d: f64,
    pub s: f64,
    pub g: f64,
    pub g_left: f64,
    pub a_u: f64,
    pub a_d: f64,
    pub v_top: f64,
    pub v_bottom: f64,
}

pub fn agmon_data(v: &EffectivePotential) -> Result<AgmonData> {
    let a = actions(v);
    let p = prefactors(v)?;
    Ok(AgmonData {
        s_u: a.s_u,
        s_d: a.s_d,
        s: a.s,
        g: p.g,
        g_left: v.frequency(Well::Left),
        a_u: p.a_u,
        a_d: p.a_d,
        v_top: v.v_top(),
        v_bottom: v.v_bottom(),
    })
}

/// Dense Fourier-space solver for the effective operator.
#[derive(Debug, Clone)]
pub struct EffectiveSolver {
    l: f64,
    mu2: f64,
    /// `vhat[m]` for `m = 0..` and `vhat_neg[m]` for `-m`.
    vhat: Vec<Complex64>,
    vhat_neg: Vec<Complex64>,
    real: bool,
    /// Retained modes `k_c - K ..= k_c + K`.
    pub half_modes: usize,
}

impl EffectiveSolver {
    /// `half_modes = K`, basis size `2K + 1`; needs `4K < samples`.
    pub fn new(v: &EffectivePotential, half_modes: usize) -> Result<Self> {
        let n = v.samples.len();
        if 4 * half_modes + 1 > n {
            return Err(Error::Resolution(format!(
                "{half_modes} modes need more than {n} potential samples"
            )));
        }
        let mut buf: Vec<Complex64> = v.samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        // samples start at s = -L: shift phase by e^{i pi m}
        let coef = |m: i64| {
            let idx = m.rem_euclid(n as i64) as usize;
            let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            buf[idx] * (sign / n as f64)
        };
        let mm = 2 * half_modes + 1;
        let vhat: Vec<Complex64> = (0..mm as i64).map(coef).collect();
        let vhat_neg: Vec<Complex64> = (0..mm as i64).map(|m| coef(-m)).collect();
        let scale = vhat[0].norm().max(1e-300);
        let real = vhat.iter().chain(&vhat_neg).all(|c| c.im.abs() <= 1e-13 * scale);
        Ok(Self { l: v.l, mu2: v.mu2, vhat, vhat_neg, real, half_modes })
    }

    /// Basis size guided by the de Broglie wavelength at `V_max`: at least
    /// 16 modes per wavelength plus a margin for the harmonic tails.
    pub fn modes_for(v: &EffectivePotential, h: f64) -> usize {
        let vmax = v.samples.iter().cloned().fold(0.0, f64::max);
        let p = (vmax / h.sqrt()).sqrt();
        let per_wavelength = 16.0 * 2.0 * v.l * p / (2.0 * PI);
        ((0.5 * per_wavelength).ceil() as usize).max(48)
    }

    fn vh(&self, m: i64) -> Complex64 {
        if m >= 0 {
            self.vhat[m as usize]
        } else {
            self.vhat_neg[(-m) as usize]
        }
    }

    /// The lowest `m` eigenvalues, ascending.
    pub fn eigenvalues(&self, h: f64, theta: f64, m: usize) -> Result<Vec<f64>> {
        let k = self.half_modes as i64;
        let kq = PI / self.l;
        let kc = (-theta / kq).round() as i64;
        let dim = (2 * k + 1) as usize;
        if m > dim {
            return Err(Error::Precondition(format!("{m} eigenvalues requested from a basis of {dim}")));
        }
        let kin = |i: usize| {
            let kk = kc - k + i as i64;
            let p = kq * kk as f64 + theta;
            h.sqrt() * p * p
        };
        let half = 0.5 * self.mu2;
        let mut vals: Vec<f64> = if self.real {
            let a = DMatrix::from_fn(dim, dim, |i, j| {
                let d = if i == j { kin(i) } else { 0.0 };
                half * (d + self.vh(i as i64 - j as i64).re)
            });
            SymmetricEigen::new(a).eigenvalues.iter().cloned().collect()
        } else {
            let a = DMatrix::from_fn(dim, dim, |i, j| {
                let d = if i == j { kin(i) } else { 0.0 };
                (Complex64::new(d, 0.0) + self.vh(i as i64 - j as i64)) * half
            });
            SymmetricEigen::new(a).eigenvalues.iter().cloned().collect()
        };
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals.truncate(m);
        Ok(vals)
    }
}

/// Lowest `m` eigenvalues of `(mu2/2)(h^{1/2}(D_s + theta)^2 + V)` with a basis
/// sized by [`EffectiveSolver::modes_for`], checked against a basis 1.5 times
/// larger.
pub fn effective_eigs(v: &EffectivePotential, h: f64, theta: f64, m: usize) -> Result<Vec<f64>> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::Precondition(format!("h = {h} outside (0, 1)")));
    }
    let k = EffectiveSolver::modes_for(v, h);
    let a = EffectiveSolver::new(v, k)?.eigenvalues(h, theta, m)?;
    let b = EffectiveSolver::new(v, k + k / 2)?.eigenvalues(h, theta, m)?;
    let tol = 1e-12 * a.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let drift = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    if drift > tol {
        return Err(Error::Resolution(format!("effective eigenvalues drift by {drift:e} under basis refinement")));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_circle_spectrum() {
        let v = EffectivePotential::synthetic(PI, -0.5 * PI, 0.5 * PI, 2.0, 256, |_| 0.0);
        let s = EffectiveSolver::new(&v, 20).unwrap();
        let e = s.eigenvalues(1.0 - 1e-15, 0.0, 5).unwrap();
        for (x, y) in e.iter().zip([0.0, 1.0, 1.0, 4.0, 4.0]) {
            assert!((x - y).abs() < 1e-6);
        }
        let e = s.eigenvalues(1.0 - 1e-15, 0.5, 4).unwrap();
        for (x, y) in e.iter().zip([0.25, 0.25, 2.25, 2.25]) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn chebyshev_expansion_reproduces_polynomial() {
        let f = |s: f64| (s - 0.3).powi(2) * (2.0 + (s - 0.3) + 0.5 * (s - 0.3).powi(3));
        let e = WellExpansion::new(&f, 0.3, 0.1);
        for x in [-0.09, -0.01, 0.0, 0.04] {
            assert!((e.p(x) - (2.0 + x + 0.5 * x.powi(3))).abs() < 1e-12);
            assert!((e.q(x) - (1.0 + 0.5 * x * x)).abs() < 1e-10);
            assert!((e.dp(x) - (1.0 + 1.5 * x * x)).abs() < 1e-10);
        }
    }
}
