//! Lowest pair of the rescaled magnetic operator near the boundary of an ellipse.

use magtunnel::boundary2d::{self, EigenOptions, Flux, TubularGrid, Variant};
use magtunnel::degennes::REFERENCE;
use magtunnel::effective;
use magtunnel::geometry::{BoundaryCurve, Geometry};

fn main() -> magtunnel::Result<()> {
    let hbar: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.1);
    let c = REFERENCE;
    let geo = Geometry::new(&BoundaryCurve::ellipse(2.0, 1.0)?, 4096)?;
    let grid = TubularGrid::standard(hbar, geo.l(), c.xi0)?;
    println!("hbar = {hbar}, grid {} x {}, tau_max = {}", grid.n_s, grid.n_tau, grid.tau_max);

    let op = boundary2d::assemble(&geo.table, &geo.wells, &grid, Flux::Gamma(geo.flux.gamma0), Variant::TwoWell, c.xi0)?;
    let guess = c.theta0 - c.c1 * geo.wells.kappa_max * hbar;
    let r = boundary2d::lowest_pair_with(&op, &EigenOptions::near(guess), None)?;
    println!("nu1 = {:.12}, nu2 = {:.12}, gap = {:.4e}", r.nu1, r.nu2, r.gap());
    println!("residuals {:.1e} {:.1e}, {} iterations", r.residuals[0], r.residuals[1], r.iterations);
    println!("(theta0 - nu1) / hbar = {:.5}, C1 kappa_max = {:.5}", (c.theta0 - r.nu1) / hbar, c.c1 * geo.wells.kappa_max);

    let v = effective::potential(&geo.table, &geo.wells, &c);
    let d = boundary2d::decay_diagnostics(&op, &v, &r.vectors);
    println!("normal tail {:.2e}, mirror defect {:.2e}, peak offsets {:?} cells", d.normal_tail, d.mirror_defect, d.peak_offset_cells);
    Ok(())
}
