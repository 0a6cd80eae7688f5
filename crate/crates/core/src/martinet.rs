//! The Martinet geodesic Hamiltonian
//!
//! ```text
//! H(q, p) = ½ ((px + pz y²/2)² + py² / (1 + βx)²),   q = (x, y, z), p = (px, py, pz)
//! ```
//!
//! together with its exact first and second derivatives. `β = 0` is the flat
//! metric `dx² + dy²`; `β ≠ 0` is the non-integrable perturbation
//! `dx² + (1 + βx)² dy²`. The Hamiltonian does not depend on `z`, so `pz` is a
//! first integral and everything indexed by `z` in the derivatives vanishes.

use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};

use crate::error::{Error, Result};

/// A point `(q, p)` of the six-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl PhaseState {
    pub fn new(x: f64, y: f64, z: f64, px: f64, py: f64, pz: f64) -> Self {
        PhaseState { x, y, z, px, py, pz }
    }

    /// Geodesic leaving the origin with unit momentum direction θ₀:
    /// `q = 0`, `px = cos θ₀`, `py = sin θ₀`, and the given `pz`.
    pub fn initial(theta0: f64, pz: f64) -> Self {
        PhaseState::new(0.0, 0.0, 0.0, theta0.cos(), theta0.sin(), pz)
    }

    pub fn from_qp(q: &Vector3<f64>, p: &Vector3<f64>) -> Self {
        PhaseState::new(q[0], q[1], q[2], p[0], p[1], p[2])
    }

    pub fn from_vector(v: &Vector6<f64>) -> Self {
        PhaseState::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn q(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn p(&self) -> Vector3<f64> {
        Vector3::new(self.px, self.py, self.pz)
    }

    /// Components in the order `(x, y, z, px, py, pz)`.
    pub fn to_vector(&self) -> Vector6<f64> {
        Vector6::new(self.x, self.y, self.z, self.px, self.py, self.pz)
    }

    pub fn is_finite(&self) -> bool {
        self.to_vector().iter().all(|c| c.is_finite())
    }

    /// Max-norm distance between two states.
    pub fn max_abs_diff(&self, other: &PhaseState) -> f64 {
        (self.to_vector() - other.to_vector()).amax()
    }
}

/// Metric perturbation `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub beta: f64,
}

impl ProblemParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be finite, got {beta}")));
        }
        Ok(ProblemParams { beta })
    }

    pub fn flat() -> Self {
        ProblemParams { beta: 0.0 }
    }

    pub fn is_flat(&self) -> bool {
        self.beta == 0.0
    }

    /// `1 + βx`, rejected when it is not strictly positive.
    pub fn metric_factor(&self, x: f64) -> Result<f64> {
        let w = 1.0 + self.beta * x;
        if w > 0.0 {
            Ok(w)
        } else {
            Err(Error::MetricSingularity {
                x,
                beta: self.beta,
                factor: w,
            })
        }
    }
}

/// `∂H/∂q` and `∂H/∂p`. Hamilton's equations read `q̇ = hp`, `ṗ = −hq`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientPair {
    pub hq: Vector3<f64>,
    pub hp: Vector3<f64>,
}

impl GradientPair {
    /// The Hamiltonian vector field `(hp, −hq)`.
    pub fn vector_field(&self) -> Vector6<f64> {
        Vector6::new(
            self.hp[0], self.hp[1], self.hp[2], -self.hq[0], -self.hq[1], -self.hq[2],
        )
    }
}

/// Second partials of `H`. `hqp[(i, j)] = ∂²H/∂qᵢ∂pⱼ`; the `p`–`q` block is its transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianBlocks {
    pub hqq: Matrix3<f64>,
    pub hqp: Matrix3<f64>,
    pub hpp: Matrix3<f64>,
}

impl HessianBlocks {
    pub fn hpq(&self) -> Matrix3<f64> {
        self.hqp.transpose()
    }

    /// Full 6×6 Hessian in `(q, p)` ordering.
    pub fn full(&self) -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.hqq);
        m.fixed_view_mut::<3, 3>(0, 3).copy_from(&self.hqp);
        m.fixed_view_mut::<3, 3>(3, 0).copy_from(&self.hpq());
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(&self.hpp);
        m
    }

    /// Jacobian of the vector field `(Hp, −Hq)`.
    pub fn vector_field_jacobian(&self) -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.hpq());
        m.fixed_view_mut::<3, 3>(0, 3).copy_from(&self.hpp);
        m.fixed_view_mut::<3, 3>(3, 0).copy_from(&(-self.hqq));
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(&(-self.hqp));
        m
    }
}

#[inline]
fn horizontal_momentum(s: &PhaseState) -> f64 {
    s.px + 0.5 * s.pz * s.y * s.y
}

pub fn hamiltonian(state: &PhaseState, params: &ProblemParams) -> Result<f64> {
    let w = params.metric_factor(state.x)?;
    let a = horizontal_momentum(state);
    let v = state.py / w;
    Ok(0.5 * (a * a + v * v))
}

pub fn gradients(state: &PhaseState, params: &ProblemParams) -> Result<GradientPair> {
    let w = params.metric_factor(state.x)?;
    let a = horizontal_momentum(state);
    let y2 = state.y * state.y;
    let w2 = w * w;
    let hp = Vector3::new(a, state.py / w2, 0.5 * a * y2);
    let hq = Vector3::new(
        -params.beta * state.py * state.py / (w2 * w),
        a * state.pz * state.y,
        0.0,
    );
    Ok(GradientPair { hq, hp })
}

pub fn hessian(state: &PhaseState, params: &ProblemParams) -> Result<HessianBlocks> {
    let w = params.metric_factor(state.x)?;
    let beta = params.beta;
    let (y, py, pz) = (state.y, state.py, state.pz);
    let a = horizontal_momentum(state);
    let y2 = y * y;
    let w2 = w * w;
    let w3 = w2 * w;

    let mut hqq = Matrix3::zeros();
    hqq[(0, 0)] = 3.0 * beta * beta * py * py / (w3 * w);
    hqq[(1, 1)] = pz * (a + pz * y2);

    let mut hqp = Matrix3::zeros();
    hqp[(0, 1)] = -2.0 * beta * py / w3;
    hqp[(1, 0)] = pz * y;
    hqp[(1, 2)] = a * y + 0.5 * pz * y2 * y;

    let mut hpp = Matrix3::zeros();
    hpp[(0, 0)] = 1.0;
    hpp[(0, 2)] = 0.5 * y2;
    hpp[(2, 0)] = 0.5 * y2;
    hpp[(2, 2)] = 0.25 * y2 * y2;
    hpp[(1, 1)] = 1.0 / w2;

    Ok(HessianBlocks { hqq, hqp, hpp })
}

/// Centres `y = ±√(−2px/pz)` of the reduced flat-case `(y, py)` system.
///
/// They exist only for `px < 0 < pz`, in which case the origin is a saddle.
pub fn flat_stationary_points(px: f64, pz: f64) -> Option<(f64, f64)> {
    if px < 0.0 && pz > 0.0 {
        let y = (-2.0 * px / pz).sqrt();
        Some((y, -y))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_THETA0;
    use proptest::prelude::*;

    fn random_state() -> impl Strategy<Value = PhaseState> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 1.0..20.0f64)
            .prop_map(|(x, y, px, py, pz)| PhaseState::new(x, y, 0.0, px, py, pz))
    }

    fn betas() -> impl Strategy<Value = ProblemParams> {
        prop_oneof![Just(ProblemParams::flat()), Just(ProblemParams { beta: -1e-4 })]
    }

    fn perturb(s: &PhaseState, i: usize, d: f64) -> PhaseState {
        let mut v = s.to_vector();
        v[i] += d;
        PhaseState::from_vector(&v)
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1.0)
    }

    #[test]
    fn hamiltonian_values() {
        let p = ProblemParams::flat();
        let s = PhaseState::new(0.0, 0.0, 0.0, 1.0, 0.0, 0.0);
        assert_eq!(hamiltonian(&s, &p).unwrap(), 0.5);

        for theta in [0.1, 1.0, 2.5, DEFAULT_THETA0] {
            for beta in [0.0, -1e-4, 0.3] {
                let h = hamiltonian(&PhaseState::initial(theta, 10.0), &ProblemParams { beta }).unwrap();
                assert!((h - 0.5).abs() < 1e-15);
            }
        }

        // mpmath at 30 digits: 0.44500250003750050000625...
        let s = PhaseState::new(0.1, 0.2, 0.0, -1.0, 0.5, 10.0);
        let h = hamiltonian(&s, &ProblemParams { beta: -1e-4 }).unwrap();
        assert!((h - 0.445_002_500_037_500_5).abs() < 1e-15);
    }

    #[test]
    fn metric_singularity_is_an_error() {
        let p = ProblemParams { beta: -0.5 };
        let s = PhaseState::new(2.0, 0.0, 0.0, 1.0, 1.0, 1.0);
        assert!(matches!(hamiltonian(&s, &p), Err(Error::MetricSingularity { .. })));
        assert!(gradients(&s, &p).is_err());
        assert!(hessian(&s, &p).is_err());
        assert!(ProblemParams::new(f64::NAN).is_err());
    }

    #[test]
    fn gradients_vanish_at_flat_centres() {
        let (px, pz) = (-0.7, 3.0);
        let (yp, ym) = flat_stationary_points(px, pz).unwrap();
        for y in [yp, ym] {
            let g = gradients(&PhaseState::new(0.3, y, 0.0, px, 0.0, pz), &ProblemParams::flat()).unwrap();
            assert!(g.hp.amax() < 1e-15 && g.hq.amax() < 1e-15, "{g:?}");
        }
    }

    #[test]
    fn gradients_at_initial_data() {
        let s = PhaseState::initial(DEFAULT_THETA0, 10.0);
        let g = gradients(&s, &ProblemParams::flat()).unwrap();
        assert_eq!(g.hp, Vector3::new(DEFAULT_THETA0.cos(), DEFAULT_THETA0.sin(), 0.0));
        assert_eq!(g.hq, Vector3::zeros());
    }

    #[test]
    fn hessian_decouples_without_pz() {
        let s = PhaseState::new(0.0, 0.0, 0.0, 1.0, 0.0, 0.0);
        let hb = hessian(&s, &ProblemParams::flat()).unwrap();
        assert_eq!(hb.hpp, Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0)));
        assert_eq!(hb.hqq, Matrix3::zeros());
    }

    #[test]
    fn stationary_points() {
        assert_eq!(flat_stationary_points(-1.0, 2.0), Some((1.0, -1.0)));
        assert_eq!(flat_stationary_points(1.0, 10.0), None);
        assert_eq!(flat_stationary_points(-1.0, 0.0), None);
        // mpmath: 0.44721348369655440581...
        let (yp, ym) = flat_stationary_points(DEFAULT_THETA0.cos(), 10.0).unwrap();
        assert!((yp - 0.447_213_483_696_554_4).abs() < 1e-15);
        assert_eq!(ym, -yp);
    }

    proptest! {
        #[test]
        fn gradients_match_finite_differences(s in random_state(), p in betas()) {
            let g = gradients(&s, &p).unwrap();
            let d = 1e-6;
            for i in 0..6 {
                let fd = (hamiltonian(&perturb(&s, i, d), &p).unwrap()
                    - hamiltonian(&perturb(&s, i, -d), &p).unwrap()) / (2.0 * d);
                let exact = if i < 3 { g.hq[i] } else { g.hp[i - 3] };
                prop_assert!(rel_err(fd, exact) <= 1e-6, "component {i}: fd {fd} exact {exact}");
            }
            prop_assert_eq!(g.hq[2], 0.0);
        }

        #[test]
        fn hessian_matches_finite_differences(s in random_state(), p in betas()) {
            let full = hessian(&s, &p).unwrap().full();
            let d = 1e-6;
            for j in 0..6 {
                let gp = gradients(&perturb(&s, j, d), &p).unwrap();
                let gm = gradients(&perturb(&s, j, -d), &p).unwrap();
                let col_p = Vector6::new(gp.hq[0], gp.hq[1], gp.hq[2], gp.hp[0], gp.hp[1], gp.hp[2]);
                let col_m = Vector6::new(gm.hq[0], gm.hq[1], gm.hq[2], gm.hp[0], gm.hp[1], gm.hp[2]);
                let fd = (col_p - col_m) / (2.0 * d);
                for i in 0..6 {
                    prop_assert!(rel_err(fd[i], full[(i, j)]) <= 1e-5,
                        "entry ({i},{j}): fd {} exact {}", fd[i], full[(i, j)]);
                }
            }
        }

        #[test]
        fn hessian_structure(s in random_state(), z in -5.0..5.0f64, p in betas()) {
            let s = PhaseState { z, ..s };
            let hb = hessian(&s, &p).unwrap();
            prop_assert_eq!(hb.hqq, hb.hqq.transpose());
            prop_assert_eq!(hb.hpp, hb.hpp.transpose());
            for k in 0..3 {
                prop_assert_eq!(hb.hqq[(2, k)], 0.0);
                prop_assert_eq!(hb.hqq[(k, 2)], 0.0);
                prop_assert_eq!(hb.hqp[(2, k)], 0.0);
            }
        }

        #[test]
        fn hamiltonian_symmetries(s in random_state(), dz in -10.0..10.0f64, p in betas()) {
            let h = hamiltonian(&s, &p).unwrap();
            let shifted = PhaseState { z: s.z + dz, ..s };
            prop_assert_eq!(hamiltonian(&shifted, &p).unwrap(), h);
            let flat = ProblemParams::flat();
            let h0 = hamiltonian(&s, &flat).unwrap();
            prop_assert_eq!(hamiltonian(&PhaseState { y: -s.y, ..s }, &flat).unwrap(), h0);
            prop_assert_eq!(hamiltonian(&PhaseState { py: -s.py, ..s }, &flat).unwrap(), h0);
        }
    }
}
