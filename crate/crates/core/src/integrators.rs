//! Fixed-step one-step integrators for the Martinet Hamiltonian system.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::martinet::{gradients, hamiltonian, PhaseState, ProblemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Explicit two-stage midpoint Runge–Kutta. Not symplectic.
    Rk2,
    /// Störmer–Verlet. Symplectic and symmetric.
    Verlet,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Rk2, Method::Verlet];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rk2 => "rk2",
            Method::Verlet => "verlet",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rk2" => Ok(Method::Rk2),
            "verlet" | "stormer-verlet" => Ok(Method::Verlet),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}` (expected rk2 or verlet)"))),
        }
    }
}

/// Step size plus the controls of the implicit Störmer–Verlet substeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub h: f64,
    /// Max-norm residual at which a fixed-point iteration is accepted.
    pub fp_tol: f64,
    pub fp_max_iters: usize,
}

impl StepConfig {
    pub const DEFAULT_FP_TOL: f64 = 1e-14;
    pub const DEFAULT_FP_MAX_ITERS: usize = 50;

    pub fn new(h: f64) -> Self {
        StepConfig {
            h,
            fp_tol: Self::DEFAULT_FP_TOL,
            fp_max_iters: Self::DEFAULT_FP_MAX_ITERS,
        }
    }

    pub fn with_fp_tol(mut self, fp_tol: f64) -> Self {
        self.fp_tol = fp_tol;
        self
    }

    /// Same controls, step `−h`. Used to run the symmetric scheme backwards.
    pub fn reversed(self) -> Self {
        StepConfig { h: -self.h, ..self }
    }

    /// Checks the configuration for forward integration over a grid.
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidConfig(format!("step size must be positive, got {}", self.h)));
        }
        if !(self.fp_tol > 0.0) {
            return Err(Error::InvalidConfig(format!("fp_tol must be positive, got {}", self.fp_tol)));
        }
        if self.fp_max_iters == 0 {
            return Err(Error::InvalidConfig("fp_max_iters must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of steps `N = round(t_end / h)`; `t_end` has to sit on the grid.
    pub fn step_count(&self, t_end: f64) -> Result<usize> {
        self.validate()?;
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidConfig(format!("t_end must be non-negative, got {t_end}")));
        }
        let n = (t_end / self.h).round();
        if (n * self.h - t_end).abs() > 1e-12 * t_end {
            return Err(Error::GridMismatch { t_end, h: self.h });
        }
        Ok(n as usize)
    }
}

/// Samples `(tₙ, yₙ, H(yₙ))` of a fixed-step run, `tₙ = n·h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub h: f64,
    pub method: Method,
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
    pub energies: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<&PhaseState> {
        self.states.last()
    }

    /// `(y, py)` projection.
    pub fn phase_plane(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.states.iter().map(|s| (s.y, s.py))
    }
}

fn advance(state: &PhaseState, dq: Vector3<f64>, dp: Vector3<f64>, scale: f64) -> PhaseState {
    PhaseState::from_qp(&(state.q() + dq * scale), &(state.p() - dp * scale))
}

/// One step of the explicit midpoint rule:
/// an Euler half step to the midpoint, then a full step with the midpoint slopes.
pub fn rk2_step(state: &PhaseState, params: &ProblemParams, cfg: &StepConfig) -> Result<PhaseState> {
    let h = cfg.h;
    let g0 = gradients(state, params)?;
    let mid = advance(state, g0.hp, g0.hq, 0.5 * h);
    let g1 = gradients(&mid, params)?;
    Ok(advance(state, g1.hp, g1.hq, h))
}

/// Intermediate values of a Störmer–Verlet step.
#[derive(Debug, Clone, Copy)]
pub(crate) struct VerletStages {
    pub p_half: Vector3<f64>,
    pub q1: Vector3<f64>,
    pub p1: Vector3<f64>,
}

impl VerletStages {
    pub fn end_state(&self) -> PhaseState {
        PhaseState::from_qp(&self.q1, &self.p1)
    }
}

pub(crate) fn verlet_stages(
    state: &PhaseState,
    params: &ProblemParams,
    cfg: &StepConfig,
) -> Result<VerletStages> {
    if params.is_flat() {
        Ok(verlet_stages_flat(state, cfg.h))
    } else {
        verlet_stages_iterative(state, params, cfg)
    }
}

/// With `β = 0` every implicit relation of the scheme can be resolved in turn:
/// `px`, `pz`, then `py` at the half step, `y`, `x`, `z`, and finally `py`.
fn verlet_stages_flat(s: &PhaseState, h: f64) -> VerletStages {
    let half = 0.5 * h;
    let (px, pz) = (s.px, s.pz);
    let a0 = px + 0.5 * pz * s.y * s.y;

    let py_half = s.py - half * a0 * pz * s.y;
    let y1 = s.y + h * py_half;
    let a1 = px + 0.5 * pz * y1 * y1;
    let x1 = s.x + half * (a0 + a1);
    let z1 = s.z + half * (0.5 * a0 * s.y * s.y + 0.5 * a1 * y1 * y1);
    let py1 = py_half - half * a1 * pz * y1;

    VerletStages {
        p_half: Vector3::new(px, py_half, pz),
        q1: Vector3::new(x1, y1, z1),
        p1: Vector3::new(px, py1, pz),
    }
}

fn fixed_point<F>(start: Vector3<f64>, cfg: &StepConfig, mut map: F) -> Result<Vector3<f64>>
where
    F: FnMut(&Vector3<f64>) -> Result<Vector3<f64>>,
{
    let mut current = start;
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.fp_max_iters {
        let next = map(&current)?;
        residual = (next - current).amax();
        current = next;
        if residual <= cfg.fp_tol {
            return Ok(current);
        }
    }
    Err(Error::FixedPointDiverged {
        iters: cfg.fp_max_iters,
        residual,
    })
}

pub(crate) fn verlet_stages_iterative(
    s: &PhaseState,
    params: &ProblemParams,
    cfg: &StepConfig,
) -> Result<VerletStages> {
    let half = 0.5 * cfg.h;
    let q0 = s.q();
    let p0 = s.p();

    let p_half = fixed_point(p0, cfg, |p| {
        let g = gradients(&PhaseState::from_qp(&q0, p), params)?;
        Ok(p0 - g.hq * half)
    })?;

    let hp0 = gradients(&PhaseState::from_qp(&q0, &p_half), params)?.hp;
    let q1 = fixed_point(q0, cfg, |q| {
        let g = gradients(&PhaseState::from_qp(q, &p_half), params)?;
        Ok(q0 + (hp0 + g.hp) * half)
    })?;

    let g1 = gradients(&PhaseState::from_qp(&q1, &p_half), params)?;
    let p1 = p_half - g1.hq * half;
    Ok(VerletStages { p_half, q1, p1 })
}

/// One Störmer–Verlet step.
pub fn verlet_step(state: &PhaseState, params: &ProblemParams, cfg: &StepConfig) -> Result<PhaseState> {
    let stages = verlet_stages(state, params, cfg)?;
    let next = stages.end_state();
    // the explicit flat path never evaluates the metric, so guard the end point here
    params.metric_factor(next.x)?;
    Ok(next)
}

pub fn step(state: &PhaseState, params: &ProblemParams, cfg: &StepConfig, method: Method) -> Result<PhaseState> {
    match method {
        Method::Rk2 => rk2_step(state, params, cfg),
        Method::Verlet => verlet_step(state, params, cfg),
    }
}

/// Integrates from `t = 0` to `t_end` with `round(t_end / h)` fixed steps,
/// recording the state and energy at every grid point.
pub fn integrate(
    state0: &PhaseState,
    params: &ProblemParams,
    cfg: &StepConfig,
    t_end: f64,
    method: Method,
) -> Result<Trajectory> {
    let n = cfg.step_count(t_end)?;
    let mut traj = Trajectory {
        h: cfg.h,
        method,
        times: Vec::with_capacity(n + 1),
        states: Vec::with_capacity(n + 1),
        energies: Vec::with_capacity(n + 1),
    };
    let mut state = *state0;
    traj.times.push(0.0);
    traj.energies.push(hamiltonian(&state, params)?);
    traj.states.push(state);
    for i in 1..=n {
        state = step(&state, params, cfg, method).map_err(|e| e.at_step(i))?;
        traj.times.push(i as f64 * cfg.h);
        traj.energies.push(hamiltonian(&state, params).map_err(|e| e.at_step(i))?);
        traj.states.push(state);
    }
    Ok(traj)
}
