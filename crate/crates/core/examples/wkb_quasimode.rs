//! One-well WKB quasimode: residual and overlap with the computed ground state.

use magtunnel::boundary2d::{self, overlap, quasimode_residual, EigenOptions, Flux, QuasimodeTerms, TubularGrid, Variant};
use magtunnel::degennes::REFERENCE;
use magtunnel::effective;
use magtunnel::geometry::{BoundaryCurve, Geometry};

fn main() -> magtunnel::Result<()> {
    let c = REFERENCE;
    let geo = Geometry::new(&BoundaryCurve::ellipse(2.0, 1.0)?, 4096)?;
    let w = &geo.wells;
    let v = effective::potential(&geo.table, w, &c);
    for hbar in [0.1, 0.05] {
        let grid = TubularGrid::standard(hbar, geo.l(), c.xi0)?;
        let op = boundary2d::assemble(&geo.table, w, &grid, Flux::Zero, Variant::OneWellRight, c.xi0)?;
        let opts = EigenOptions { want: 1, ..EigenOptions::near(c.theta0 - c.c1 * w.kappa_max * hbar) };
        let ground = boundary2d::lowest_pair_with(&op, &opts, None)?;
        for (name, terms) in [("leading", QuasimodeTerms::LEADING), ("phased", QuasimodeTerms::PHASED), ("all", QuasimodeTerms::ALL)] {
            let q = quasimode_residual(&op, &v, &c, w.kappa_max, w.k2, terms)?;
            println!(
                "hbar {hbar:<5} {name:<8} residual {:.5}  overlap {:.5}",
                q.residual,
                overlap(&op, &q.psi, &ground.vectors[0])
            );
        }
        println!("           nu1 = {:.10}", ground.nu1);
    }
    Ok(())
}
