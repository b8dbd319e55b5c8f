//! The rescaled boundary operator
//!
//! `N = -a^{-1} d_tau a d_tau + a^{-1} D a^{-1} D`,
//! `D = -i hbar d_sigma + F - tau + hbar c_mu(tau) kappa(sigma) tau^2 / 2`,
//! `a = 1 - hbar tau kappa(sigma) c_mu(tau)`,
//!
//! on the tube `sigma` in the boundary circle (or a line, for the one-well
//! variants) and `tau` in `[0, tau_max]`, with Neumann data at `tau = 0` and
//! Dirichlet data at `tau_max`. The flux `F = gamma0 / hbar` is reduced by
//! integer flux quanta `hbar pi / L` towards `xi0`, an exact gauge
//! equivalence on the circle that removes the fast tangential oscillation.
//!
//! Discretization is by the quadratic form `int a |d_tau u|^2 + a^{-1} |D u|^2`
//! with mass `int a |u|^2`: nodes `tau_m = m dtau` with a half cell at
//! `m = 0`, a compact three-point tangential Laplacian, and a centered
//! symmetric discretization of the first-order part of `D a^{-1} D`.

mod diagnostics;
mod eigen;
mod wkb;

pub use diagnostics::{decay_diagnostics, tangential_profile, DecayReport};
pub use eigen::{lowest_pair, lowest_pair_with, EigenOptions, EigenSolveResult};
pub use wkb::{overlap, quasimode, quasimode_residual, wkb_residual, QuasimodeTerms, WkbResidual};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ArcLengthTable, WellData};
use crate::linalg::HermitianBand;

/// `max_x x c(x)` for the cutoff [`cutoff`].
pub const CUTOFF_MOMENT: f64 = 1.130_5;
/// Lower bound kept on the weight `a` over the grid.
pub const WEIGHT_FLOOR: f64 = 0.5;
/// Collar width of the one-well curvature extension, in units of `L`.
pub const COLLAR: f64 = 0.05;
/// Padding beyond the one-well curvature support.
pub const ONE_WELL_PAD: f64 = 10.0;

/// `c = 1` on `[0, 1]`, `0` on `[2, inf)`, quintic `C^2` blend between.
pub fn cutoff(x: f64) -> f64 {
    if x <= 1.0 {
        1.0
    } else if x >= 2.0 {
        0.0
    } else {
        1.0 - smoothstep(x - 1.0)
    }
}

pub(crate) fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubularGrid {
    /// Tangential points on the circle `[-L, L)`; the one-well variants use
    /// the same spacing `2L / n_s`.
    pub n_s: usize,
    /// Normal unknowns `tau_m = m tau_max / n_tau`, `m < n_tau`.
    pub n_tau: usize,
    pub hbar: f64,
    pub tau_max: f64,
    pub eta: f64,
}

impl TubularGrid {
    pub fn new(n_s: usize, n_tau: usize, hbar: f64, tau_max: f64, eta: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar < 1.0) {
            return Err(Error::Precondition(format!("hbar = {hbar} outside (0, 1)")));
        }
        if !(tau_max >= 12.0) {
            return Err(Error::Resolution(format!("tau_max = {tau_max} below 12")));
        }
        if !(eta > 0.0 && eta < 0.25) {
            return Err(Error::Precondition(format!("eta = {eta} outside (0, 1/4)")));
        }
        if n_tau < 24 || n_s < 16 {
            return Err(Error::Resolution(format!("grid {n_s} x {n_tau} too small")));
        }
        Ok(Self { n_s, n_tau, hbar, tau_max, eta })
    }

    /// Default spacing `dtau = 0.1`, `tau_max = 12`, `eta = 0.1`, and the
    /// smallest even `n_s >= 256` meeting [`Self::required_ns`].
    pub fn standard(hbar: f64, l: f64, xi0: f64) -> Result<Self> {
        let n_s = Self::required_ns(l, xi0, hbar).max(256).next_multiple_of(8);
        Self::new(n_s, 120, hbar, 12.0, 0.1)
    }

    pub fn dtau(&self) -> f64 {
        self.tau_max / self.n_tau as f64
    }

    pub fn tau(&self, m: usize) -> f64 {
        m as f64 * self.dtau()
    }

    /// Ten points per tangential wavelength `2 pi hbar / xi0`.
    pub fn required_ns(l: f64, xi0: f64, hbar: f64) -> usize {
        (10.0 * l * xi0 / (std::f64::consts::PI * hbar)).ceil() as usize
    }

    /// Cutoff scale: `hbar^{1/2 + 2 eta}`, raised where needed to keep
    /// `a >= WEIGHT_FLOOR` on the grid.
    pub fn cutoff_scale(&self, kappa_max: f64) -> f64 {
        let nominal = self.hbar.powf(0.5 + 2.0 * self.eta);
        let floor = self.hbar * kappa_max.max(0.0) * CUTOFF_MOMENT / (1.0 - WEIGHT_FLOOR);
        nominal.max(floor)
    }

    pub fn with_n_tau(&self, n_tau: usize) -> Self {
        Self { n_tau, ..*self }
    }

    pub fn with_n_s(&self, n_s: usize) -> Self {
        Self { n_s, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    TwoWell,
    OneWellRight,
    OneWellLeft,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Flux {
    /// `F = gamma0 / hbar` for the given `gamma0`.
    Gamma(f64),
    Zero,
}

/// Discretized operator in the symmetrized form `M^{-1/2} A M^{-1/2}`.
#[derive(Debug, Clone)]
pub struct MagneticOperator2D {
    pub variant: Variant,
    pub grid: TubularGrid,
    /// Tangential nodes in increasing order.
    pub sigma: Vec<f64>,
    /// Curvature used at each tangential node.
    pub kappa: Vec<f64>,
    /// Gauge-reduced flux constant `F`.
    pub flux: f64,
    pub cutoff_scale: f64,
    pub periodic: bool,
    pub dsigma: f64,
    /// Diagonal of the mass matrix, in storage order.
    pub mass: Vec<f64>,
    /// Weight `a` at the nodes, in storage order.
    pub weight: Vec<f64>,
    sym: HermitianBand,
    /// Storage position of each tangential index.
    pos: Vec<usize>,
}

impl MagneticOperator2D {
    pub fn n_sigma(&self) -> usize {
        self.sigma.len()
    }

    pub fn dim(&self) -> usize {
        self.sigma.len() * self.grid.n_tau
    }

    /// Storage index of node `(j, m)`.
    pub fn index(&self, j: usize, m: usize) -> usize {
        self.pos[j] * self.grid.n_tau + m
    }

    pub fn symmetrized(&self) -> &HermitianBand {
        &self.sym
    }

    /// `N u = M^{-1} A u` for a grid function in storage order.
    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let x: Vec<Complex64> = u.iter().zip(&self.mass).map(|(v, m)| v * m.sqrt()).collect();
        let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
        self.sym.matvec(&x, &mut y);
        y.iter().zip(&self.mass).map(|(v, m)| v / m.sqrt()).collect()
    }

    /// Weighted inner product `<u, v>_a = sum conj(u) M v`.
    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        u.iter().zip(v).zip(&self.mass).map(|((a, b), m)| a.conj() * b * m).sum()
    }

    pub fn norm(&self, u: &[Complex64]) -> f64 {
        self.inner(u, u).re.sqrt()
    }

    /// Upper bound on `|N|` from the band (Gershgorin on the symmetrized form).
    pub fn norm_bound(&self) -> f64 {
        let n = self.sym.dim();
        let bw = self.sym.bandwidth();
        let mut row = vec![0.0; n];
        for i in 0..n {
            for j in i.saturating_sub(bw)..=i {
                let v = self.sym.get(i, j).norm();
                row[i] += v;
                if j != i {
                    row[j] += v;
                }
            }
        }
        row.into_iter().fold(0.0, f64::max)
    }

    /// Converts a physical grid function to storage order from `(j, m)`.
    pub fn from_fn<F: Fn(f64, f64) -> Complex64>(&self, f: F) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (j, &s) in self.sigma.iter().enumerate() {
            for m in 0..self.grid.n_tau {
                out[self.index(j, m)] = f(s, self.grid.tau(m));
            }
        }
        out
    }
}

/// Gauge-reduces `F` modulo `hbar pi / L` to the window centred at `xi0`.
pub fn reduce_flux(f: f64, hbar: f64, l: f64, xi0: f64) -> f64 {
    let q = hbar * std::f64::consts::PI / l;
    f - q * ((f - xi0) / q).round()
}

/// One-well curvature extension: `kappa` between the collars, blended to 0
/// across them, 0 outside `(s_l - 2L, s_l)`.
pub fn kappa_one_well(table: &ArcLengthTable, wells: &WellData, sigma: f64) -> f64 {
    let l = table.l;
    let lo = wells.s_l - 2.0 * l;
    let hi = wells.s_l;
    let c = COLLAR * l;
    if sigma <= lo || sigma >= hi {
        return 0.0;
    }
    let blend = if sigma < lo + c {
        smoothstep((sigma - lo) / c)
    } else if sigma > hi - c {
        smoothstep((hi - sigma) / c)
    } else {
        1.0
    };
    blend * table.kappa_exact(sigma)
}

/// Tangential nodes of the one-well-right operator.
pub fn one_well_nodes(table: &ArcLengthTable, wells: &WellData, n_s: usize) -> Vec<f64> {
    let l = table.l;
    let ds = 2.0 * l / n_s as f64;
    let start = wells.s_l - 2.0 * l - ONE_WELL_PAD;
    let end = wells.s_l + ONE_WELL_PAD;
    let cells = ((end - start) / ds).round() as usize;
    (1..cells).map(|j| start + j as f64 * ds).collect()
}

pub fn assemble(
    table: &ArcLengthTable,
    wells: &WellData,
    grid: &TubularGrid,
    flux: Flux,
    variant: Variant,
    xi0: f64,
) -> Result<MagneticOperator2D> {
    let l = table.l;
    let need = TubularGrid::required_ns(l, xi0, grid.hbar);
    if grid.n_s < need {
        return Err(Error::Resolution(format!(
            "n_s = {} below the {need} tangential points required at hbar = {}",
            grid.n_s, grid.hbar
        )));
    }
    let hbar = grid.hbar;
    let f_raw = match flux {
        Flux::Gamma(g) => g / hbar,
        Flux::Zero => 0.0,
    };
    let (sigma, kappa, periodic, flux_used) = match variant {
        Variant::TwoWell => {
            let n = grid.n_s;
            let s: Vec<f64> = (0..n).map(|j| -l + 2.0 * l * j as f64 / n as f64).collect();
            let k: Vec<f64> = s.iter().map(|&x| table.kappa_exact(x)).collect();
            (s, k, true, reduce_flux(f_raw, hbar, l, xi0))
        }
        // on the line every real flux is gauge-equivalent; use xi0
        Variant::OneWellRight => {
            let s = one_well_nodes(table, wells, grid.n_s);
            let k = s.iter().map(|&x| kappa_one_well(table, wells, x)).collect();
            (s, k, false, xi0)
        }
        Variant::OneWellLeft => {
            let right = one_well_nodes(table, wells, grid.n_s);
            let k: Vec<f64> = right.iter().rev().map(|&x| kappa_one_well(table, wells, x)).collect();
            let s = right.iter().rev().map(|x| -x).collect();
            (s, k, false, xi0)
        }
    };
    let kmax = kappa.iter().cloned().fold(0.0, f64::max);
    let mu = grid.cutoff_scale(kmax.max(wells.kappa_max));
    build(variant, *grid, sigma, kappa, periodic, flux_used, mu, 2.0 * l / grid.n_s as f64)
}

/// Assembles the operator for an arbitrary curvature profile on given nodes.
/// Used for the flat strip and other synthetic checks.
pub fn assemble_profile(
    grid: &TubularGrid,
    sigma: Vec<f64>,
    kappa: Vec<f64>,
    periodic: bool,
    flux: f64,
    dsigma: f64,
) -> Result<MagneticOperator2D> {
    let kmax = kappa.iter().cloned().fold(0.0, f64::max);
    let mu = grid.cutoff_scale(kmax);
    let variant = if periodic { Variant::TwoWell } else { Variant::OneWellRight };
    build(variant, *grid, sigma, kappa, periodic, flux, mu, dsigma)
}

#[allow(clippy::too_many_arguments)]
fn build(
    variant: Variant,
    grid: TubularGrid,
    sigma: Vec<f64>,
    kappa: Vec<f64>,
    periodic: bool,
    flux: f64,
    mu: f64,
    ds: f64,
) -> Result<MagneticOperator2D> {
    let ns = sigma.len();
    let nt = grid.n_tau;
    let hbar = grid.hbar;
    let dt = grid.dtau();
    let pos: Vec<usize> = if periodic {
        // folded order 0, n-1, 1, n-2, ... keeps the wrap-around coupling local
        (0..ns).map(|j| if 2 * j < ns { 2 * j } else { 2 * (ns - 1 - j) + 1 }).collect()
    } else {
        (0..ns).collect()
    };
    let bw = if periodic { 2 * nt } else { nt };
    let dim = ns * nt;
    let idx = |j: usize, m: usize| pos[j] * nt + m;
    let cut = |t: f64| cutoff(mu * t);
    let weight_at = |k: f64, t: f64| 1.0 - hbar * t * k * cut(t);
    let wfun = |k: f64, t: f64| flux - t + 0.5 * hbar * cut(t) * k * t * t;
    let node_w = |m: usize| if m == 0 { 0.5 } else { 1.0 };

    let mut a = HermitianBand::zeros(dim, bw);
    let mut mass = vec![0.0; dim];
    let mut weight = vec![0.0; dim];
    let mut amin = f64::INFINITY;
    for j in 0..ns {
        for m in 0..nt {
            let t = grid.tau(m);
            let w = weight_at(kappa[j], t);
            amin = amin.min(w);
            let i = idx(j, m);
            weight[i] = w;
            mass[i] = w * node_w(m) * ds * dt;
            let b = 1.0 / w;
            let ww = wfun(kappa[j], t);
            a.add(i, i, Complex64::new(b * ww * ww * node_w(m) * ds * dt, 0.0));
            // normal edge (m, m + 1)
            let tm = (m as f64 + 0.5) * dt;
            let k = weight_at(kappa[j], tm) * ds / dt;
            a.add(i, i, Complex64::new(k, 0.0));
            if m + 1 < nt {
                let i1 = idx(j, m + 1);
                a.add(i1, i1, Complex64::new(k, 0.0));
                a.add(i1, i, Complex64::new(-k, 0.0));
            }
        }
    }
    if !(amin > WEIGHT_FLOOR) {
        return Err(Error::Assumption(format!("weight a = {amin} not above {WEIGHT_FLOOR}")));
    }
    // tangential edges (j, j + 1)
    let edges: Vec<(Option<usize>, Option<usize>)> = if periodic {
        (0..ns).map(|j| (Some(j), Some((j + 1) % ns))).collect()
    } else {
        let mut e: Vec<(Option<usize>, Option<usize>)> = (0..ns - 1).map(|j| (Some(j), Some(j + 1))).collect();
        e.push((None, Some(0)));
        e.push((Some(ns - 1), None));
        e
    };
    for &(p, q) in &edges {
        for m in 0..nt {
            let t = grid.tau(m);
            let kp = p.map(|j| kappa[j]);
            let kq = q.map(|j| kappa[j]);
            let kmid = match (kp, kq) {
                (Some(x), Some(y)) => 0.5 * (x + y),
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => unreachable!(),
            };
            let c = hbar * hbar / weight_at(kmid, t) * node_w(m) * dt / ds;
            if let Some(j) = p {
                let i = idx(j, m);
                a.add(i, i, Complex64::new(c, 0.0));
            }
            if let Some(j) = q {
                let i = idx(j, m);
                a.add(i, i, Complex64::new(c, 0.0));
            }
            if let (Some(jp), Some(jq)) = (p, q) {
                let ip = idx(jp, m);
                let iq = idx(jq, m);
                let bw_p = wfun(kappa[jp], t) / weight_at(kappa[jp], t);
                let bw_q = wfun(kappa[jq], t) / weight_at(kappa[jq], t);
                // -i hbar (bW d + d bW) with centred differences, edge (p -> q)
                let cross = Complex64::new(0.0, -0.5 * hbar * (bw_p + bw_q) * node_w(m) * dt);
                // entry (p, q) of the form: -kinetic + cross
                let v = Complex64::new(-c, 0.0) + cross;
                a.add(ip, iq, v);
            }
        }
    }
    // symmetrize with the mass
    let sq: Vec<f64> = mass.iter().map(|m| m.sqrt()).collect();
    let mut sym = HermitianBand::zeros(dim, bw);
    for i in 0..dim {
        for j in i.saturating_sub(bw)..=i {
            let v = a.get(i, j);
            if v != Complex64::new(0.0, 0.0) {
                sym.add(i, j, v / (sq[i] * sq[j]));
            }
        }
    }
    Ok(MagneticOperator2D {
        variant,
        grid,
        sigma,
        kappa,
        flux,
        cutoff_scale: mu,
        periodic,
        dsigma: ds,
        mass,
        weight,
        sym,
        pos,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degennes::{mu_n, HalfLineGrid, REFERENCE};
    use crate::geometry::{BoundaryCurve, Geometry};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ellipse() -> Geometry {
        Geometry::new(&BoundaryCurve::ellipse(2.0, 1.0).unwrap(), 2048).unwrap()
    }

    fn strip(hbar: f64, n_tau: usize, f: f64) -> MagneticOperator2D {
        let grid = TubularGrid::new(256, n_tau, hbar, 12.0, 0.1).unwrap();
        let ds = 40.0 / 256.0;
        let s: Vec<f64> = (0..256).map(|j| -20.0 + ds * j as f64).collect();
        assemble_profile(&grid, s, vec![0.0; 256], true, reduce_flux(f, hbar, 20.0, REFERENCE.xi0), ds).unwrap()
    }

    fn ground(op: &MagneticOperator2D, guess: f64) -> EigenSolveResult {
        lowest_pair_with(op, &EigenOptions { want: 1, ..EigenOptions::near(guess) }, None).unwrap()
    }

    #[test]
    fn flat_strip_matches_half_line_band() {
        let op = strip(0.1, 120, REFERENCE.xi0);
        let r = ground(&op, REFERENCE.theta0);
        let mu = mu_n(op.flux, 1, &HalfLineGrid::unchecked(12.0, 120)).unwrap().mu;
        assert!((r.nu1 - mu).abs() < 1e-11, "{} vs {mu}", r.nu1);
    }

    #[test]
    fn flat_strip_without_flux_sits_at_theta0() {
        let op = strip(0.1, 240, 0.0);
        let r = ground(&op, REFERENCE.theta0);
        assert!((r.nu1 - REFERENCE.theta0).abs() < 5e-4, "{}", r.nu1);
    }

    #[test]
    fn weighted_symmetry() {
        let geo = ellipse();
        let grid = TubularGrid::new(64, 32, 0.2, 12.0, 0.1).unwrap();
        let op = assemble(&geo.table, &geo.wells, &grid, Flux::Gamma(geo.flux.gamma0), Variant::TwoWell, REFERENCE.xi0)
            .unwrap();
        let norm = op.norm_bound();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut rv = || (0..op.dim()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect::<Vec<_>>();
            let u = rv();
            let v = rv();
            let d = (op.inner(&op.apply(&u), &v) - op.inner(&u, &op.apply(&v))).norm();
            assert!(d <= 1e-12 * norm * op.norm(&u) * op.norm(&v), "{d}");
        }
        assert!(op.weight.iter().all(|&a| a > WEIGHT_FLOOR && a <= 1.0));
    }

    #[test]
    fn flux_quantum_does_not_change_spectrum() {
        let geo = ellipse();
        let hbar = 0.2;
        let grid = TubularGrid::new(64, 48, hbar, 12.0, 0.1).unwrap();
        let g0 = geo.flux.gamma0;
        let q = std::f64::consts::PI * hbar * hbar / geo.l();
        let guess = REFERENCE.theta0 - REFERENCE.c1 * geo.wells.kappa_max * hbar;
        let pair = |g: f64| {
            let op = assemble(&geo.table, &geo.wells, &grid, Flux::Gamma(g), Variant::TwoWell, REFERENCE.xi0).unwrap();
            lowest_pair(&op, guess).unwrap()
        };
        let a = pair(g0);
        for k in [-3.0, 2.0] {
            let b = pair(g0 + k * q);
            assert!((a.nu1 - b.nu1).abs() < 1e-9 && (a.nu2 - b.nu2).abs() < 1e-9);
        }
        assert!(a.nu1 <= a.nu2);
        assert!(a.residuals[0] <= 1e-10 && a.residuals[1] <= 1e-10 && a.orthogonality <= 1e-8);
    }

    #[test]
    fn left_and_right_wells_are_mirror_images() {
        let geo = ellipse();
        let grid = TubularGrid::new(64, 48, 0.2, 12.0, 0.1).unwrap();
        let guess = REFERENCE.theta0 - REFERENCE.c1 * geo.wells.kappa_max * 0.2;
        let solve = |v| {
            let op = assemble(&geo.table, &geo.wells, &grid, Flux::Zero, v, REFERENCE.xi0).unwrap();
            ground(&op, guess).nu1
        };
        let d = solve(Variant::OneWellRight) - solve(Variant::OneWellLeft);
        assert!(d.abs() < 1e-10, "{d}");
    }

    #[test]
    fn refuses_coarse_tangential_grid() {
        let geo = ellipse();
        let need = TubularGrid::required_ns(geo.l(), REFERENCE.xi0, 0.1);
        let grid = TubularGrid::new(need - 1, 48, 0.1, 12.0, 0.1).unwrap();
        let e = assemble(&geo.table, &geo.wells, &grid, Flux::Zero, Variant::TwoWell, REFERENCE.xi0).unwrap_err();
        assert!(matches!(e, Error::Resolution(_)));
        assert!(e.to_string().contains(&need.to_string()));
    }

    #[test]
    fn grid_guards() {
        assert!(TubularGrid::new(256, 120, 0.1, 10.0, 0.1).is_err());
        assert!(TubularGrid::new(256, 120, 0.1, 12.0, 0.3).is_err());
        assert!(TubularGrid::new(256, 120, 1.2, 12.0, 0.1).is_err());
    }

    #[test]
    fn cutoff_profile() {
        assert_eq!(cutoff(0.5), 1.0);
        assert_eq!(cutoff(2.5), 0.0);
        let mut prev = 1.0;
        for i in 0..=100 {
            let c = cutoff(1.0 + i as f64 / 100.0);
            assert!(c <= prev + 1e-15);
            prev = c;
        }
    }

    #[test]
    fn gauge_reduction_window() {
        let (hbar, l, xi0) = (0.1, 4.8, REFERENCE.xi0);
        let q = hbar * std::f64::consts::PI / l;
        for f in [0.0, 3.7, 100.0, -2.0] {
            let r = reduce_flux(f, hbar, l, xi0);
            assert!((r - xi0).abs() <= 0.5 * q + 1e-12);
            let k = (f - r) / q;
            assert!((k - k.round()).abs() < 1e-9);
        }
    }
}
