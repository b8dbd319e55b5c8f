//! A sampled symmetric curve: the polar curve r = 1 + e cos(2 theta).

use magtunnel::degennes::REFERENCE;
use magtunnel::effective;
use magtunnel::geometry::{BoundaryCurve, Geometry};

fn main() -> magtunnel::Result<()> {
    let e = 0.15;
    let n = 2000;
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let r = 1.0 + e * (2.0 * t).cos();
            (r * t.cos(), r * t.sin())
        })
        .collect();
    let curve = BoundaryCurve::sampled(pts)?;
    println!("symmetry defect {:.2e}", curve.symmetry_defect());
    let geo = Geometry::new(&curve, 4096)?;
    let w = &geo.wells;
    println!("L = {:.8}, kappa_max = {:.8}, kappa_min = {:.8}, k2 = {:.6}", geo.l(), w.kappa_max, w.kappa_min, w.k2);
    let v = effective::potential(&geo.table, w, &REFERENCE);
    let agmon = effective::agmon_data(&v)?;
    println!("S_u = {:.8}, S_d = {:.8}, A_u = {:.6}, A_d = {:.6}", agmon.s_u, agmon.s_d, agmon.a_u, agmon.a_d);
    Ok(())
}
