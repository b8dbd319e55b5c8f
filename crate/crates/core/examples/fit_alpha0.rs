//! Recovering the phase shift alpha0 from a gap series.

use magtunnel::degennes::REFERENCE;
use magtunnel::effective;
use magtunnel::geometry::{BoundaryCurve, Geometry};
use magtunnel::splitting::{self, GapSeries, Normalization, SplittingInputs};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> magtunnel::Result<()> {
    let geo = Geometry::new(&BoundaryCurve::ellipse(2.0, 1.0)?, 4096)?;
    let v = effective::potential(&geo.table, &geo.wells, &REFERENCE);
    let agmon = effective::agmon_data(&v)?;
    let inp = SplittingInputs::new(&REFERENCE, &geo, &agmon, 0.0);

    let truth = 0.3;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let hs: Vec<f64> = (0..400).map(|i| 1.0 / (150.0 + 0.01 * i as f64)).collect();
    let gaps: Vec<f64> = hs
        .iter()
        .map(|&h| splitting::ln_gap_formula(&inp.with_alpha0(truth), h).exp() * (1.0 + 0.01 * rng.gen_range(-1.0..1.0)))
        .collect();
    let fit = splitting::fit_alpha0(&GapSeries::new(hs, gaps, Normalization::Physical), &inp)?;
    println!("alpha0: fitted {:.6}, true {truth}, period pi/L = {:.6}", fit.alpha0, std::f64::consts::PI / inp.l);
    println!("rms log residual {:.4}, {} zeros used", fit.residual, fit.zeros_observed);
    Ok(())
}
