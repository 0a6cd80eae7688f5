//! Conjugate-time table for both metrics, both schemes and h = 1e-1 .. 1e-4.

use martinet_geodesics::cli::run_table1;
use martinet_geodesics::integrators::StepConfig;

fn main() {
    print!("{}", run_table1(StepConfig::DEFAULT_FP_TOL).render());
}
