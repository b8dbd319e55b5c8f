//! Curvature wells, Agmon actions and prefactors of an ellipse.

use magtunnel::degennes::REFERENCE;
use magtunnel::effective;
use magtunnel::geometry::{BoundaryCurve, Geometry};

fn main() -> magtunnel::Result<()> {
    let (a, b) = (2.0, 1.0);
    let geo = Geometry::new(&BoundaryCurve::ellipse(a, b)?, 4096)?;
    let w = &geo.wells;
    println!("half perimeter L = {:.12}", geo.l());
    println!("wells at s = {:.10} and {:.10}", w.s_r, w.s_l);
    println!("kappa_max = {:.12}, kappa_min = {:.12}", w.kappa_max, w.kappa_min);
    println!("k2 = {:.10} (exact 3a(a^2 - b^2)/b^6 = {})", w.k2, 3.0 * a * (a * a - b * b) / b.powi(6));
    println!("gamma0 = |Omega| / |boundary| = {:.12}", geo.flux.gamma0);

    let v = effective::potential(&geo.table, &geo.wells, &REFERENCE);
    let agmon = effective::agmon_data(&v)?;
    println!("S_u = {:.12}, S_d = {:.12}", agmon.s_u, agmon.s_d);
    println!("g = {:.12}, A_u = {:.12}, A_d = {:.12}", agmon.g, agmon.a_u, agmon.a_d);

    // the potential between the right well and the top of the ellipse
    let n = 8;
    for k in 0..=n {
        let s = w.s_r * (1.0 - k as f64 / n as f64);
        println!("  V({s:+.4}) = {:.8}", v.value(s));
    }
    Ok(())
}
