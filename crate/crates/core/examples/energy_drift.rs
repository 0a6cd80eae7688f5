//! Energy error of both schemes on the flat geodesic at h = 0.05.

use martinet_geodesics::prelude::*;

fn main() -> martinet_geodesics::Result<()> {
    let state0 = PhaseState::initial(DEFAULT_THETA0, DEFAULT_PZ);
    for m in Method::ALL {
        let traj = integrate(&state0, &ProblemParams::flat(), &StepConfig::new(0.05), DEFAULT_T_END, m)?;
        let r = drift_report(&traj)?;
        println!(
            "{m:<7} max |H - H0| = {:.4e}  first half = {:.4e}  growth = {:.2}",
            r.max_drift,
            r.drift_half,
            r.growth()
        );
    }
    Ok(())
}
