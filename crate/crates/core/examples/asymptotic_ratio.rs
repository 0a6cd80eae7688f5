//! R = t1 √pz / 3K(k) as θ₀ approaches π, and its independence of pz.

use std::f64::consts::PI;

use martinet_geodesics::prelude::*;

fn main() -> martinet_geodesics::Result<()> {
    let cfg = StepConfig::new(1e-4);
    let thetas: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-4].iter().map(|e| PI - e).collect();
    println!("{:>8} {:>12} {:>12} {:>12}", "eps", "t1", "R", "1 - R");
    for r in sweep_theta(&thetas, DEFAULT_PZ, &cfg, None)? {
        match (r.t1, r.r, r.one_minus_r) {
            (Some(t1), Some(big_r), Some(d)) => println!("{:>8.0e} {t1:>12.6} {big_r:>12.6} {d:>12.4e}", r.eps),
            _ => println!("{:>8.0e} unresolved", r.eps),
        }
    }
    let inv = pz_invariance_check(&[5.0, 10.0, 20.0], DEFAULT_THETA0, &cfg)?;
    for (pz, scaled) in &inv.entries {
        println!("pz = {pz:>4}: t1 sqrt(pz) = {scaled:.8}");
    }
    println!("relative spread {:.2e}", inv.spread);
    Ok(())
}
