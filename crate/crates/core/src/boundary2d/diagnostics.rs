//! Localization checks on computed eigenvectors.

use num_complex::Complex64;
use serde::Serialize;

use super::MagneticOperator2D;
use crate::effective::{EffectivePotential, Well};

#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    /// Weighted mass of `|v1|^2 + |v2|^2` with `tau > 6`, relative.
    pub normal_tail: f64,
    /// `|e^{tau / 4} v|_a / |v|_a`, worst of the pair.
    pub normal_exp_norm: f64,
    /// Largest local maxima of the tangential profile, by height.
    pub peaks: Vec<f64>,
    /// Distance in cells from each well to the nearest of the two largest peaks.
    pub peak_offset_cells: [f64; 2],
    /// `max |p(sigma) - p(-sigma)| / max p`, two-well operator only.
    pub mirror_defect: f64,
    /// `min (-hbar^{1/2} ln p - (1 - eta) Phi)` away from the wells, with `p`
    /// scaled to maximum 1 and `Phi` the geodesic distance to the nearer well.
    pub agmon_margin: f64,
}

/// Tangential profile `p(sigma_j) = (int a |v|^2 dtau)^{1/2}` of a vector.
pub fn tangential_profile(op: &MagneticOperator2D, v: &[Complex64]) -> Vec<f64> {
    let nt = op.grid.n_tau;
    (0..op.n_sigma())
        .map(|j| {
            (0..nt)
                .map(|m| {
                    let i = op.index(j, m);
                    op.mass[i] * v[i].norm_sqr()
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

pub fn decay_diagnostics(op: &MagneticOperator2D, v: &EffectivePotential, pair: &[Vec<Complex64>; 2]) -> DecayReport {
    let nt = op.grid.n_tau;
    let hbar = op.grid.hbar;
    let mut tail = 0.0;
    let mut total = 0.0;
    let mut exp_norm: f64 = 0.0;
    for vec in pair {
        let mut e = 0.0;
        let mut nrm = 0.0;
        for j in 0..op.n_sigma() {
            for m in 0..nt {
                let i = op.index(j, m);
                let tau = op.grid.tau(m);
                let w = op.mass[i] * vec[i].norm_sqr();
                nrm += w;
                e += w * (0.5 * tau).exp();
                if tau > 6.0 {
                    tail += w;
                }
            }
        }
        total += nrm;
        exp_norm = exp_norm.max((e / nrm).sqrt());
    }
    let p1 = tangential_profile(op, &pair[0]);
    let p2 = tangential_profile(op, &pair[1]);
    let p: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| (a * a + b * b).sqrt()).collect();
    let n = p.len();
    let pmax = p.iter().cloned().fold(0.0, f64::max);

    let mut maxima: Vec<(f64, f64)> = (0..n)
        .filter(|&j| {
            let (l, r) = if op.periodic {
                (p[(j + n - 1) % n], p[(j + 1) % n])
            } else {
                (if j > 0 { p[j - 1] } else { 0.0 }, if j + 1 < n { p[j + 1] } else { 0.0 })
            };
            p[j] >= l && p[j] > r
        })
        .map(|j| (p[j], op.sigma[j]))
        .collect();
    maxima.sort_by(|a, b| b.0.total_cmp(&a.0));
    let peaks: Vec<f64> = maxima.iter().take(2).map(|m| m.1).collect();
    let period = 2.0 * v.l;
    let circ = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(period);
        if op.periodic { d.min(period - d) } else { (a - b).abs() }
    };
    let offset = |s: f64| {
        peaks.iter().map(|&q| circ(q, s)).fold(f64::INFINITY, f64::min) / op.dsigma
    };
    let peak_offset_cells = [offset(v.s_r), offset(v.s_l)];

    let mirror_defect = if op.periodic {
        (1..n).map(|j| (p[j] - p[n - j]).abs()).fold(0.0, f64::max) / pmax
    } else {
        f64::NAN
    };

    let exclude = 0.1 * v.l;
    let mut margin = f64::INFINITY;
    for (j, &s) in op.sigma.iter().enumerate() {
        if circ(s, v.s_r) < exclude || circ(s, v.s_l) < exclude || p[j] <= 0.0 {
            continue;
        }
        if !op.periodic && (s < v.s_l - 2.0 * v.l || s > v.s_l) {
            continue;
        }
        let phi = if op.periodic {
            v.agmon_circle(Well::Right, s).min(v.agmon_circle(Well::Left, s))
        } else {
            v.agmon_line(Well::Right, s)
        };
        let lhs = -hbar.sqrt() * (p[j] / pmax).ln();
        margin = margin.min(lhs - (1.0 - op.grid.eta) * phi);
    }
    DecayReport {
        normal_tail: tail / total,
        normal_exp_norm: exp_norm,
        peaks,
        peak_offset_cells,
        mirror_defect,
        agmon_margin: margin,
    }
}
