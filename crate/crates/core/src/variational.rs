//! Sensitivities of the discrete flow and first conjugate points.
//!
//! The tangent is propagated by differentiating the discrete step maps
//! themselves, so `Ψₙ₊₁ = DΦ_h(yₙ) Ψₙ` is exactly the derivative of the
//! implemented numerical solution with respect to its initial momentum.
//! For Störmer–Verlet with `β ≠ 0` the implicit relations are differentiated
//! at their converged solution, independently of how many iterations were
//! needed to reach it.

use nalgebra::{Matrix3, Matrix6, SMatrix};

use crate::error::{Error, Result};
use crate::integrators::{verlet_stages, Method, StepConfig};
use crate::martinet::{gradients, hessian, PhaseState, ProblemParams};

type Matrix3x6 = SMatrix<f64, 3, 6>;

/// Sensitivities of `(q, p)` with respect to `C` initial directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangent<const C: usize>(pub SMatrix<f64, 6, C>);

/// `∂(q, p)/∂p₀`.
pub type TangentBlock = Tangent<3>;
/// `∂(q, p)/∂(q₀, p₀)`.
pub type FullTangent = Tangent<6>;

impl TangentBlock {
    /// `∂q/∂p₀ = 0`, `∂p/∂p₀ = I` at `t = 0`.
    pub fn initial() -> Self {
        let mut m = SMatrix::<f64, 6, 3>::zeros();
        m.fixed_view_mut::<3, 3>(3, 0).fill_with_identity();
        Tangent(m)
    }

    pub fn dq_dp0(&self) -> Matrix3<f64> {
        self.0.fixed_view::<3, 3>(0, 0).into_owned()
    }

    pub fn dp_dp0(&self) -> Matrix3<f64> {
        self.0.fixed_view::<3, 3>(3, 0).into_owned()
    }
}

impl FullTangent {
    pub fn identity() -> Self {
        Tangent(Matrix6::identity())
    }
}

impl<const C: usize> Tangent<C> {
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

/// The canonical skew matrix `J = [[0, I], [−I, 0]]`.
pub fn canonical_j() -> Matrix6<f64> {
    let mut j = Matrix6::zeros();
    j.fixed_view_mut::<3, 3>(0, 3).fill_with_identity();
    j.fixed_view_mut::<3, 3>(3, 0).copy_from(&(-Matrix3::identity()));
    j
}

/// `‖Dᵀ J D − J‖_max`; zero for a symplectic map.
pub fn symplecticity_defect(jac: &Matrix6<f64>) -> f64 {
    let j = canonical_j();
    (jac.transpose() * j * jac - j).amax()
}

fn solve3(m: &Matrix3<f64>, rhs: &Matrix3x6) -> Result<Matrix3x6> {
    m.lu()
        .solve(rhs)
        .ok_or_else(|| Error::Domain("singular linearised Störmer–Verlet substep".into()))
}

fn rk2_jacobian(state: &PhaseState, params: &ProblemParams, h: f64) -> Result<(PhaseState, Matrix6<f64>)> {
    let g0 = gradients(state, params)?;
    let df0 = hessian(state, params)?.vector_field_jacobian();
    let mid = PhaseState::from_vector(&(state.to_vector() + g0.vector_field() * (0.5 * h)));
    let g1 = gradients(&mid, params)?;
    let df1 = hessian(&mid, params)?.vector_field_jacobian();
    let next = PhaseState::from_vector(&(state.to_vector() + g1.vector_field() * h));
    let id = Matrix6::identity();
    Ok((next, id + df1 * (id + df0 * (0.5 * h)) * h))
}

fn verlet_jacobian(
    state: &PhaseState,
    params: &ProblemParams,
    cfg: &StepConfig,
) -> Result<(PhaseState, Matrix6<f64>)> {
    let half = 0.5 * cfg.h;
    let st = verlet_stages(state, params, cfg)?;
    let next = st.end_state();
    let ha = hessian(&PhaseState::from_qp(&state.q(), &st.p_half), params)?;
    let hb = hessian(&PhaseState::from_qp(&st.q1, &st.p_half), params)?;
    let id = Matrix3::<f64>::identity();

    // p̄ = p − h/2 Hq(q, p̄)
    let mut rhs = Matrix3x6::zeros();
    rhs.fixed_view_mut::<3, 3>(0, 0).copy_from(&(-ha.hqq * half));
    rhs.fixed_view_mut::<3, 3>(0, 3).copy_from(&id);
    let dp_half = solve3(&(id + ha.hqp * half), &rhs)?;

    // q₁ = q + h/2 (Hp(q, p̄) + Hp(q₁, p̄))
    let mut rhs = (ha.hpp + hb.hpp) * half * dp_half;
    let mut left = rhs.fixed_view_mut::<3, 3>(0, 0);
    left += id + ha.hpq() * half;
    let dq1 = solve3(&(id - hb.hpq() * half), &rhs)?;

    // p₁ = p̄ − h/2 Hq(q₁, p̄)
    let dp1 = dp_half - (hb.hqq * dq1 + hb.hqp * dp_half) * half;

    let mut jac = Matrix6::zeros();
    jac.fixed_view_mut::<3, 6>(0, 0).copy_from(&dq1);
    jac.fixed_view_mut::<3, 6>(3, 0).copy_from(&dp1);
    Ok((next, jac))
}

/// Advances the state by one step and returns the 6×6 Jacobian of that step map.
pub fn step_jacobian(
    state: &PhaseState,
    params: &ProblemParams,
    cfg: &StepConfig,
    method: Method,
) -> Result<(PhaseState, Matrix6<f64>)> {
    let (next, jac) = match method {
        Method::Rk2 => rk2_jacobian(state, params, cfg.h)?,
        Method::Verlet => verlet_jacobian(state, params, cfg)?,
    };
    params.metric_factor(next.x)?;
    Ok((next, jac))
}

/// One step of the state together with its tangent.
pub fn step_tangent<const C: usize>(
    state: &PhaseState,
    tangent: &Tangent<C>,
    params: &ProblemParams,
    cfg: &StepConfig,
    method: Method,
) -> Result<(PhaseState, Tangent<C>)> {
    let (next, jac) = step_jacobian(state, params, cfg, method)?;
    Ok((next, Tangent(jac * tangent.0)))
}

/// `det(∂q/∂p₀)`.
pub fn det_dq_dp0(tangent: &TangentBlock) -> f64 {
    tangent.dq_dp0().determinant()
}

/// A bracketed sign change of `det(∂q/∂p₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugateEvent {
    pub t_lo: f64,
    pub t_hi: f64,
    pub det_lo: f64,
    pub det_hi: f64,
    /// Linearly interpolated root of the determinant.
    pub t1: f64,
    /// State linearly interpolated to `t1`.
    pub state: PhaseState,
}

fn lerp(a: &PhaseState, b: &PhaseState, w: f64) -> PhaseState {
    PhaseState::from_vector(&(a.to_vector() * (1.0 - w) + b.to_vector() * w))
}

/// Determinants below this fraction of their Hadamard bound are numerically singular.
pub const SINGULAR_RTOL: f64 = 1e-12;

/// `|det(∂q/∂p₀)|` relative to the product of the column norms of `∂q/∂p₀`.
pub fn relative_det(tangent: &TangentBlock) -> f64 {
    let a = tangent.dq_dp0();
    let bound: f64 = a.column_iter().map(|c| c.norm()).product();
    if bound == 0.0 {
        0.0
    } else {
        a.determinant().abs() / bound
    }
}

/// Integrates state and `∂(q, p)/∂p₀` together and returns the first sign
/// change of `det(∂q/∂p₀)` after `t = 0`, or `None` if there is none up to `t_end`.
///
/// The root is located by linear interpolation between the bracketing grid
/// points. `∂q/∂p₀` starts at zero, and during the first steps its determinant
/// sits at rounding level; samples below [`SINGULAR_RTOL`] are skipped until
/// the first resolved one. After that, a numerically singular sample at `tₙ`
/// is reported directly as `t1 = tₙ`.
pub fn find_first_conjugate(
    state0: &PhaseState,
    params: &ProblemParams,
    cfg: &StepConfig,
    t_end: f64,
    method: Method,
) -> Result<Option<ConjugateEvent>> {
    let n_steps = cfg.step_count(t_end)?;
    let h = cfg.h;
    let mut state = *state0;
    let mut tangent = TangentBlock::initial();
    let mut prev: Option<(f64, f64, PhaseState)> = None;

    for n in 1..=n_steps {
        let (s, t) = step_tangent(&state, &tangent, params, cfg, method).map_err(|e| e.at_step(n))?;
        state = s;
        tangent = t;
        let t_n = n as f64 * h;
        let det = det_dq_dp0(&tangent);
        let singular = relative_det(&tangent) <= SINGULAR_RTOL;

        match prev {
            None if singular => continue,
            Some((t_lo, det_lo, _)) if singular => {
                return Ok(Some(ConjugateEvent { t_lo, t_hi: t_n, det_lo, det_hi: det, t1: t_n, state }));
            }
            Some((t_lo, det_lo, s_lo)) if det_lo * det < 0.0 => {
                let w = det_lo / (det_lo - det);
                return Ok(Some(ConjugateEvent {
                    t_lo,
                    t_hi: t_n,
                    det_lo,
                    det_hi: det,
                    t1: t_lo + h * w,
                    state: lerp(&s_lo, &state, w),
                }));
            }
            _ => prev = Some((t_n, det, state)),
        }
    }
    Ok(None)
}
