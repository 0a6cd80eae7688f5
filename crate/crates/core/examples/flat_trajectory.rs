//! Flat-case geodesic with Störmer–Verlet, printed as CSV (t, x, y, z, px, py, pz, H).

use martinet_geodesics::cli::write_trajectory_csv;
use martinet_geodesics::prelude::*;

fn main() -> martinet_geodesics::Result<()> {
    let state0 = PhaseState::initial(DEFAULT_THETA0, DEFAULT_PZ);
    let traj = integrate(&state0, &ProblemParams::flat(), &StepConfig::new(0.05), DEFAULT_T_END, Method::Verlet)?;
    write_trajectory_csv(&traj, std::io::stdout().lock())
}
