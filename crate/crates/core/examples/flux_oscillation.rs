//! The effective gap with flux phase f(h) vanishes near the zeros of cos(L f(h)).

use magtunnel::degennes::REFERENCE;
use magtunnel::effective;
use magtunnel::geometry::{BoundaryCurve, Geometry};
use magtunnel::splitting::{self, SplittingInputs};

fn main() -> magtunnel::Result<()> {
    let geo = Geometry::new(&BoundaryCurve::ellipse(2.0, 1.0)?, 4096)?;
    let v = effective::potential(&geo.table, &geo.wells, &REFERENCE);
    let agmon = effective::agmon_data(&v)?;
    let inp = SplittingInputs::new(&REFERENCE, &geo, &agmon, 0.0);

    let (lo, hi, step) = (120.0, 123.0, 0.02);
    let n = ((hi - lo) / step) as usize + 1;
    let xs: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    let mut gaps = Vec::with_capacity(n);
    for &x in &xs {
        let h = 1.0 / x;
        let e = effective::effective_eigs(&v, h, inp.flux_phase(h), 2)?;
        gaps.push(e[1] - e[0]);
    }
    println!("predicted zeros in 1/h (spacing pi/(L gamma0) = {:.4}):", std::f64::consts::PI / (inp.l * inp.gamma0));
    for z in splitting::predicted_zeros(&inp, lo, hi) {
        println!("  {z:.4}");
    }
    println!("local minima of the effective gap:");
    for i in 1..n - 1 {
        if gaps[i] < gaps[i - 1] && gaps[i] <= gaps[i + 1] {
            println!("  {:.4}  gap {:.3e}", xs[i], gaps[i]);
        }
    }
    Ok(())
}
