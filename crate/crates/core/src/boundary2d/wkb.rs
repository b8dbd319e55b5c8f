//! Leading-order one-well quasimode and its residual.

use num_complex::Complex64;
use serde::Serialize;

use super::{smoothstep, MagneticOperator2D, Variant, COLLAR};
use crate::degennes::{mu_n, phase_coefficients, DeGennesConstants, HalfLineGrid};
use crate::effective::{wkb_amplitude, EffectivePotential, Well};
use crate::error::{Error, Result};

/// Which terms of the expansion enter the quasimode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct QuasimodeTerms {
    /// Tangential phase `e^{i alpha(sigma)}`, so the amplitude is `f_{1,0}`
    /// rather than its modulus.
    pub phase: bool,
    /// Normal correction `i hbar^{1/2} Phi' f (d_xi u)_{xi0}` (the part of
    /// `b_{1,1}` fixed by the leading amplitude; `f_{1,1} u` is left out).
    pub normal_correction: bool,
}

impl QuasimodeTerms {
    pub const LEADING: Self = Self { phase: false, normal_correction: false };
    pub const PHASED: Self = Self { phase: true, normal_correction: false };
    pub const ALL: Self = Self { phase: true, normal_correction: true };
}

#[derive(Debug, Clone, Serialize)]
pub struct WkbResidual {
    pub hbar: f64,
    pub terms: QuasimodeTerms,
    /// `Theta0 - C1 kappa_max hbar + delta13 hbar^{3/2}`.
    pub delta1: f64,
    /// `|(N - delta1) Psi|_a / |Psi|_a`.
    pub residual: f64,
    #[serde(skip)]
    pub psi: Vec<Complex64>,
}

/// `Psi = hbar^{-1/8} f(sigma) u_{xi0}(tau) exp(-Phi_r(sigma) / hbar^{1/2})`
/// on a one-well-right operator (flux gauged to `xi0`, so the tangential
/// phase `exp(i sigma xi0 / hbar)` is absorbed). The amplitude is switched
/// off smoothly across the collars, where it is exponentially small.
pub fn wkb_residual(
    op: &MagneticOperator2D,
    v: &EffectivePotential,
    consts: &DeGennesConstants,
    kappa_max: f64,
    k2: f64,
) -> Result<WkbResidual> {
    quasimode_residual(op, v, consts, kappa_max, k2, QuasimodeTerms::LEADING)
}

pub fn quasimode_residual(
    op: &MagneticOperator2D,
    v: &EffectivePotential,
    consts: &DeGennesConstants,
    kappa_max: f64,
    k2: f64,
    terms: QuasimodeTerms,
) -> Result<WkbResidual> {
    let psi = quasimode(op, v, consts, terms)?;
    let hbar = op.grid.hbar;
    let delta1 = consts.theta0 - consts.c1 * kappa_max * hbar + consts.delta13(k2) * hbar.powf(1.5);
    let npsi = op.apply(&psi);
    let r: Vec<Complex64> = npsi.iter().zip(&psi).map(|(a, b)| a - b * delta1).collect();
    let residual = op.norm(&r) / op.norm(&psi);
    Ok(WkbResidual { hbar, terms, delta1, residual, psi })
}

/// The quasimode in storage order of a one-well-right operator.
pub fn quasimode(
    op: &MagneticOperator2D,
    v: &EffectivePotential,
    consts: &DeGennesConstants,
    terms: QuasimodeTerms,
) -> Result<Vec<Complex64>> {
    if op.variant != Variant::OneWellRight {
        return Err(Error::Precondition("WKB quasimode needs the one-well-right operator".into()));
    }
    let g = &op.grid;
    let hbar = g.hbar;
    let hg = HalfLineGrid::unchecked(g.tau_max, g.n_tau);
    let dg = mu_n(consts.xi0, 1, &hg)?;
    let dxi = 1e-4;
    let up = mu_n(consts.xi0 + dxi, 1, &hg)?;
    let dn = mu_n(consts.xi0 - dxi, 1, &hg)?;
    let du: Vec<f64> = up.u.iter().zip(&dn.u).map(|(a, b)| (a - b) / (2.0 * dxi)).collect();
    let l = v.l;
    let s_r = v.s_r;
    let lo = v.s_l - 2.0 * l + COLLAR * l;
    let hi = v.s_l - COLLAR * l;
    let inside: Vec<f64> = op.sigma.iter().cloned().filter(|&s| s > lo && s < hi).collect();
    let amp = wkb_amplitude(v, Well::Right, &inside)?;
    let ns = op.n_sigma();
    let mut profile = vec![0.0; ns];
    let mut slope = vec![0.0; ns];
    let mut k = 0;
    // switch-off length: half the distance from the well to the nearer collar
    let taper = 0.5 * (s_r - lo).min(hi - s_r);
    for (j, &s) in op.sigma.iter().enumerate() {
        if s > lo && s < hi {
            let phi = v.agmon_line(Well::Right, s);
            let edge = ((s - lo).min(hi - s) / taper).min(1.0);
            profile[j] = smoothstep(edge) * amp[k] * (-phi / hbar.sqrt()).exp();
            slope[j] = (s - s_r).signum() * v.sqrt_value(s);
            k += 1;
        }
    }
    let mut alpha = vec![0.0; ns];
    if terms.phase {
        // the coefficients want the long default grid, not the tau_max of op
        let pc = phase_coefficients(consts.xi0, &HalfLineGrid::default())?;
        let rate: Vec<f64> = op
            .sigma
            .iter()
            .zip(&op.kappa)
            .map(|(&s, &kap)| -(kap * pc.a1 + v.value(s) * pc.a2) / consts.mu2)
            .collect();
        for j in 1..ns {
            alpha[j] = alpha[j - 1] + 0.5 * (rate[j] + rate[j - 1]) * (op.sigma[j] - op.sigma[j - 1]);
        }
    }
    let corr = if terms.normal_correction { hbar.sqrt() } else { 0.0 };
    let scale = hbar.powf(-0.125);
    let mut psi = vec![Complex64::new(0.0, 0.0); op.dim()];
    for j in 0..ns {
        let ph = Complex64::from_polar(scale * profile[j], alpha[j]);
        for m in 0..g.n_tau {
            psi[op.index(j, m)] = Complex64::new(dg.u[m], corr * slope[j] * du[m]) * ph;
        }
    }
    Ok(psi)
}

/// `|<Psi, v>_a| / (|Psi|_a |v|_a)`.
pub fn overlap(op: &MagneticOperator2D, psi: &[Complex64], v: &[Complex64]) -> f64 {
    op.inner(psi, v).norm() / (op.norm(psi) * op.norm(v))
}
