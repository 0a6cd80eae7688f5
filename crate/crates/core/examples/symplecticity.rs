//! ‖DΦᵀ J DΦ − J‖ of the one-step maps along the default geodesic, and Verlet reversibility.

use martinet_geodesics::prelude::*;
use martinet_geodesics::variational::symplecticity_defect;

fn main() -> martinet_geodesics::Result<()> {
    let params = ProblemParams::new(PERTURBED_BETA)?;
    let cfg = StepConfig::new(0.05);
    let state0 = PhaseState::initial(DEFAULT_THETA0, DEFAULT_PZ);
    for m in Method::ALL {
        let mut s = state0;
        let mut worst: f64 = 0.0;
        for _ in 0..180 {
            let (next, jac) = step_jacobian(&s, &params, &cfg, m)?;
            worst = worst.max(symplecticity_defect(&jac));
            s = next;
        }
        println!("{m:<7} max symplecticity defect {worst:.3e}");
    }

    let mut s = state0;
    for _ in 0..180 {
        s = verlet_step(&s, &params, &cfg)?;
    }
    for _ in 0..180 {
        s = verlet_step(&s, &params, &cfg.reversed())?;
    }
    println!("verlet forward/backward error {:.3e}", s.max_abs_diff(&state0));
    Ok(())
}
