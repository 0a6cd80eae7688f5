//! Complete elliptic integral K(k) by the arithmetic-geometric mean.

use martinet_geodesics::analysis::elliptic_k_for_theta;
use martinet_geodesics::prelude::*;

fn main() -> martinet_geodesics::Result<()> {
    for k in [0.0, 0.5, std::f64::consts::FRAC_1_SQRT_2, 0.9, 0.99, 0.9999] {
        println!("K({k:.6}) = {:.15}", elliptic_k(k)?);
    }
    println!("K(sin(theta0/2)) = {:.15}", elliptic_k_for_theta(DEFAULT_THETA0)?);
    println!("R(t1 = 8.416409) = {:.10}", ratio_r(8.416409, DEFAULT_PZ, DEFAULT_THETA0)?);
    Ok(())
}
