//! De Gennes model constants and the identities tying them together.

use magtunnel::degennes::{self, HalfLineGrid};
use magtunnel::pipeline;

fn main() -> magtunnel::Result<()> {
    let grid = HalfLineGrid::default();
    let c = degennes::constants(&grid)?;
    println!("theta0 = {:.12}", c.theta0);
    println!("xi0    = {:.12}", c.xi0);
    println!("C1     = {:.12}  (u0^2/3; the printed u0^2/6 is {:.12})", c.c1, c.c1_as_printed());
    println!("mu1''  = {:.12}", c.mu2);

    let ground = degennes::mu_n(c.xi0, 1, &grid)?;
    let excited = degennes::mu_n(c.xi0, 2, &grid)?;
    println!("mu1(xi0) = {:.10}, mu2(xi0) = {:.10}", ground.mu, excited.mu);

    for xi in [0.0, 0.4, c.xi0, 1.2, 2.0] {
        println!("  mu1({xi:.3}) = {:.8}", degennes::mu_n(xi, 1, &grid)?.mu);
    }

    let rep = pipeline::constants_report(&grid)?;
    for chk in &rep.checks {
        println!("{:<44} {:>12.3e}  {}", chk.name, chk.value, if chk.pass { "ok" } else { "FAIL" });
    }
    Ok(())
}
