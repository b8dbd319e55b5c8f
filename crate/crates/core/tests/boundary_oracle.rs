use magtunnel::boundary2d::{self, EigenOptions, EigenSolveResult, Flux, TubularGrid, Variant};
use magtunnel::degennes::REFERENCE;
use magtunnel::effective;
use magtunnel::geometry::{BoundaryCurve, Geometry};

// the tangential Agmon bound is not yet attained at hbar = 0.15
const HBAR: f64 = 0.1;

fn solve(geo: &Geometry, variant: Variant) -> (boundary2d::MagneticOperator2D, EigenSolveResult) {
    let c = REFERENCE;
    let grid = TubularGrid::standard(HBAR, geo.l(), c.xi0).unwrap();
    let flux = if variant == Variant::TwoWell { Flux::Gamma(geo.flux.gamma0) } else { Flux::Zero };
    let op = boundary2d::assemble(&geo.table, &geo.wells, &grid, flux, variant, c.xi0).unwrap();
    let want = if variant == Variant::TwoWell { 2 } else { 1 };
    let opts = EigenOptions { want, ..EigenOptions::near(c.theta0 - c.c1 * geo.wells.kappa_max * HBAR) };
    let r = boundary2d::lowest_pair_with(&op, &opts, None).unwrap();
    (op, r)
}

#[test]
fn two_well_pair_localizes_and_brackets_one_well_level() {
    let geo = Geometry::new(&BoundaryCurve::ellipse(2.0, 1.0).unwrap(), 4096).unwrap();
    let (op, pair) = solve(&geo, Variant::TwoWell);
    assert!(pair.residuals[0] < 1e-8 && pair.residuals[1] < 1e-8, "{:?}", pair.residuals);
    assert!(pair.nu1 < pair.nu2 && pair.nu2 < REFERENCE.theta0, "{} {}", pair.nu1, pair.nu2);

    let v = effective::potential(&geo.table, &geo.wells, &REFERENCE);
    let d = boundary2d::decay_diagnostics(&op, &v, &pair.vectors);
    assert!(d.normal_tail <= 1e-6, "normal tail {}", d.normal_tail);
    assert!(d.peak_offset_cells.iter().all(|&c| c <= 2.0), "{:?}", d.peak_offset_cells);
    assert!(d.mirror_defect <= 1e-6, "mirror {}", d.mirror_defect);
    let s = effective::actions(&v).s;
    assert!(d.agmon_margin >= -0.2 * s, "agmon margin {} vs S {s}", d.agmon_margin);

    // the one-well level sits inside the pair up to the interaction size
    let (_, one) = solve(&geo, Variant::OneWellRight);
    let slack = pair.gap();
    assert!(one.nu1 > pair.nu1 - slack && one.nu1 < pair.nu2 + slack, "{} in [{}, {}]", one.nu1, pair.nu1, pair.nu2);
    assert!((one.nu1 - 0.5 * (pair.nu1 + pair.nu2)).abs() < pair.gap(), "one-well {} pair {} {}", one.nu1, pair.nu1, pair.nu2);
}
