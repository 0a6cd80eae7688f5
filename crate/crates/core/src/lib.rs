//! Normal geodesics of the Martinet sub-Riemannian structure.
//!
//! The geodesics are solutions of a six-dimensional Hamiltonian system in
//! `(x, y, z, px, py, pz)` with the metric `dx² + (1 + βx)² dy²`. This crate
//! integrates that system with two fixed-step second-order schemes:
//!
//! - an explicit two-stage Runge–Kutta (midpoint) method, which is not symplectic;
//! - the Störmer–Verlet method, which is symplectic and symmetric. It is explicit
//!   when `β = 0` and solved by fixed-point iteration otherwise.
//!
//! On top of the steppers it propagates the sensitivities `∂(q, p)/∂p₀` by
//! differentiating the discrete step maps, and it locates the first conjugate
//! point as the first sign change of `det(∂q/∂p₀)`. The [`analysis`] module
//! adds the complete elliptic integral `K(k)`, the asymptotic conjugate-time
//! ratio, θ₀ sweeps and energy-drift summaries. [`cli`] drives the experiments
//! and writes CSV.
//!
//! ```
//! use martinet_geodesics::prelude::*;
//!
//! let state0 = PhaseState::initial(DEFAULT_THETA0, DEFAULT_PZ);
//! let cfg = StepConfig::new(1e-2);
//! let event = find_first_conjugate(&state0, &ProblemParams::flat(), &cfg, 9.0, Method::Verlet)
//!     .unwrap()
//!     .expect("conjugate point before t = 9");
//! assert!((event.t1 - 8.416622).abs() < 1e-3);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod integrators;
pub mod martinet;
pub mod variational;

pub use error::{Error, Result};

/// θ₀ = π − 10⁻³: initial momentum direction close to the abnormal direction.
pub const DEFAULT_THETA0: f64 = std::f64::consts::PI - 1e-3;
/// Default `pz(0)`.
pub const DEFAULT_PZ: f64 = 10.0;
/// Default integration horizon.
pub const DEFAULT_T_END: f64 = 9.0;
/// Metric perturbation used for the non-integrable experiments.
pub const PERTURBED_BETA: f64 = -1e-4;

pub mod prelude {
    pub use crate::analysis::{
        drift_report, elliptic_k, phase_winding, py_zero_crossings, pz_invariance_check,
        ratio_r, sweep_theta, DriftReport, SweepRecord,
    };
    pub use crate::error::{Error, Result};
    pub use crate::integrators::{integrate, rk2_step, step, verlet_step, Method, StepConfig, Trajectory};
    pub use crate::martinet::{
        flat_stationary_points, gradients, hamiltonian, hessian, GradientPair, HessianBlocks,
        PhaseState, ProblemParams,
    };
    pub use crate::variational::{
        det_dq_dp0, find_first_conjugate, relative_det, step_jacobian, step_tangent, ConjugateEvent, FullTangent,
        Tangent, TangentBlock,
    };
    pub use crate::{DEFAULT_PZ, DEFAULT_THETA0, DEFAULT_T_END, PERTURBED_BETA};
}
