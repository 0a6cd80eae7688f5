//! (y, py) portrait of the perturbed geodesic at h = 0.1: where each scheme crosses py = 0.

use std::f64::consts::TAU;

use martinet_geodesics::prelude::*;

fn main() -> martinet_geodesics::Result<()> {
    let state0 = PhaseState::initial(DEFAULT_THETA0, DEFAULT_PZ);
    for (beta, h) in [(0.0, 0.05), (PERTURBED_BETA, 0.1)] {
        for m in Method::ALL {
            let traj = integrate(&state0, &ProblemParams::new(beta)?, &StepConfig::new(h), DEFAULT_T_END, m)?;
            let ys: Vec<String> = py_zero_crossings(&traj).iter().map(|y| format!("{y:+.3}")).collect();
            println!(
                "beta={beta:<8} h={h:<5} {m:<7} periods {:.3}  y at py = 0: [{}]",
                phase_winding(&traj).abs() / TAU,
                ys.join(", ")
            );
        }
    }
    Ok(())
}
