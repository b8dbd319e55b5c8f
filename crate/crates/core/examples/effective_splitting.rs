//! Flux-free splitting of the effective operator against the interaction formula.

use magtunnel::degennes::REFERENCE;
use magtunnel::effective;
use magtunnel::geometry::{BoundaryCurve, Geometry};
use magtunnel::splitting::{self, SplittingInputs};

fn main() -> magtunnel::Result<()> {
    let geo = Geometry::new(&BoundaryCurve::ellipse(2.0, 1.0)?, 4096)?;
    let v = effective::potential(&geo.table, &geo.wells, &REFERENCE);
    let agmon = effective::agmon_data(&v)?;
    let inp = SplittingInputs::new(&REFERENCE, &geo, &agmon, 0.0);
    let s = inp.s();

    println!("{:>10} {:>8} {:>14} {:>14} {:>8}", "h", "S/h^1/4", "gap", "2 w(h)", "ratio");
    let mut hs = Vec::new();
    let mut gaps = Vec::new();
    for x in [10.0, 12.0, 14.0, 16.0, 18.0, 20.0, 22.0] {
        let h = (s / x).powi(4);
        let e = effective::effective_eigs(&v, h, 0.0, 2)?;
        let gap = e[1] - e[0];
        let w = 2.0 * splitting::w_effective(&inp, h).value();
        println!("{h:>10.3e} {x:>8.1} {gap:>14.6e} {w:>14.6e} {:>8.4}", gap / w);
        hs.push(h);
        gaps.push(gap);
    }
    let slope = splitting::rate_slope(&hs, &gaps);
    println!("rate: fitted {slope:.5}, S = {s:.5}");
    Ok(())
}
