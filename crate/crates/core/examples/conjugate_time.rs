//! First conjugate time of the default geodesic for both schemes and a range of steps.

use martinet_geodesics::prelude::*;

fn main() -> martinet_geodesics::Result<()> {
    let state0 = PhaseState::initial(DEFAULT_THETA0, DEFAULT_PZ);
    for beta in [0.0, PERTURBED_BETA] {
        for h in [1e-2, 1e-3] {
            for m in Method::ALL {
                let ev = find_first_conjugate(&state0, &ProblemParams::new(beta)?, &StepConfig::new(h), DEFAULT_T_END, m)?;
                match ev {
                    Some(ev) => println!(
                        "beta={beta:<8} h={h:<6} {m:<7} t1={:.6}  (det {:+.3e} -> {:+.3e})",
                        ev.t1, ev.det_lo, ev.det_hi
                    ),
                    None => println!("beta={beta:<8} h={h:<6} {m:<7} no conjugate point"),
                }
            }
        }
    }
    Ok(())
}
