//! Elliptic integral, the asymptotic conjugate-time ratio, θ₀ sweeps and
//! trajectory diagnostics.
//!
//! For the flat case the first conjugate time is compared with the elliptic
//! quarter period through
//!
//! ```text
//! R = t₁ √pz / (3 K(k)),   k = sin(θ₀/2)
//! ```
//!
//! which lies in `[2/3, 1]`, does not depend on `pz`, and tends to 1 from
//! below as θ₀ → π.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::integrators::{Method, StepConfig, Trajectory};
use crate::martinet::{PhaseState, ProblemParams};
use crate::variational::find_first_conjugate;

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    0.5 * (a + b)
}

/// `K` expressed through the complementary modulus `k' = √(1 − k²)`.
///
/// Near `k = 1` this avoids the cancellation in `1 − k²`.
pub fn elliptic_k_complementary(kp: f64) -> Result<f64> {
    if !(kp > 0.0 && kp <= 1.0) {
        return Err(Error::Domain(format!("complementary modulus must lie in (0, 1], got {kp}")));
    }
    Ok(PI / (2.0 * agm(1.0, kp)))
}

/// Complete elliptic integral of the first kind,
/// `K(k) = ∫₀^{π/2} du / √(1 − k² sin² u)`, by the arithmetic–geometric mean.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("elliptic modulus must lie in [0, 1), got {k}")));
    }
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    elliptic_k_complementary(((1.0 - k) * (1.0 + k)).sqrt())
}

fn check_theta0(theta0: f64) -> Result<()> {
    if theta0 > 0.0 && theta0 < PI {
        Ok(())
    } else {
        Err(Error::Domain(format!("theta0 must lie in (0, pi), got {theta0}")))
    }
}

/// `K(sin(θ₀/2))`, evaluated through `k' = cos(θ₀/2)`.
pub fn elliptic_k_for_theta(theta0: f64) -> Result<f64> {
    check_theta0(theta0)?;
    elliptic_k_complementary((0.5 * theta0).cos())
}

/// `R = t₁ √pz / (3 K(sin(θ₀/2)))`.
pub fn ratio_r(t1: f64, pz: f64, theta0: f64) -> Result<f64> {
    if !(t1 > 0.0) {
        return Err(Error::Domain(format!("t1 must be positive, got {t1}")));
    }
    if !(pz > 0.0) {
        return Err(Error::Domain(format!("pz must be positive, got {pz}")));
    }
    Ok(t1 * pz.sqrt() / (3.0 * elliptic_k_for_theta(theta0)?))
}

/// Grid-aligned horizon that contains the first conjugate time, using `R ≤ 1`.
pub fn conjugate_horizon(theta0: f64, pz: f64, h: f64) -> Result<f64> {
    let bound = 3.0 * elliptic_k_for_theta(theta0)? / pz.sqrt();
    Ok((1.05 * bound / h).ceil() * h)
}

/// One row of a θ₀ sweep. `t1`, `r` and `one_minus_r` are `None` when no
/// conjugate point was found before the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub theta0: f64,
    pub eps: f64,
    pub t1: Option<f64>,
    pub k: f64,
    pub big_k: f64,
    pub r: Option<f64>,
    pub one_minus_r: Option<f64>,
}

impl SweepRecord {
    pub fn is_resolved(&self) -> bool {
        self.t1.is_some()
    }
}

/// `ε` log-spaced from `10⁻¹` down to `10⁻⁴`, `points` values.
pub fn log_eps_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![1e-1],
        n => (0..n)
            .map(|i| 10f64.powf(-1.0 - 3.0 * i as f64 / (n - 1) as f64))
            .collect(),
    }
}

/// Default Figure-5 style grid: 13 points.
pub fn default_eps_grid() -> Vec<f64> {
    log_eps_grid(13)
}

fn sweep_one(theta0: f64, pz: f64, cfg: &StepConfig, t_end: Option<f64>) -> Result<SweepRecord> {
    check_theta0(theta0)?;
    let t_end = match t_end {
        Some(t) => t,
        None => conjugate_horizon(theta0, pz, cfg.h)?,
    };
    let state0 = PhaseState::initial(theta0, pz);
    let event = find_first_conjugate(&state0, &ProblemParams::flat(), cfg, t_end, Method::Verlet)?;
    let big_k = elliptic_k_for_theta(theta0)?;
    let t1 = event.map(|e| e.t1);
    let r = t1.map(|t| ratio_r(t, pz, theta0)).transpose()?;
    Ok(SweepRecord {
        theta0,
        eps: PI - theta0,
        t1,
        k: (0.5 * theta0).sin(),
        big_k,
        r,
        one_minus_r: r.map(|r| 1.0 - r),
    })
}

/// First conjugate times and ratios for each θ₀ (flat case, Störmer–Verlet).
///
/// With `t_end = None` every θ₀ gets its own horizon from [`conjugate_horizon`].
/// Rows are computed in parallel and returned in input order.
pub fn sweep_theta(
    theta_list: &[f64],
    pz: f64,
    cfg: &StepConfig,
    t_end: Option<f64>,
) -> Result<Vec<SweepRecord>> {
    if !(pz > 0.0) {
        return Err(Error::Domain(format!("pz must be positive, got {pz}")));
    }
    theta_list
        .par_iter()
        .map(|&theta0| sweep_one(theta0, pz, cfg, t_end))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PzInvariance {
    /// `(pz, t₁ √pz)` in input order.
    pub entries: Vec<(f64, f64)>,
    /// `(max − min) / mean` of the scaled times.
    pub spread: f64,
}

/// Checks that `t₁ √pz` does not depend on `pz` for fixed θ₀.
pub fn pz_invariance_check(pz_list: &[f64], theta0: f64, cfg: &StepConfig) -> Result<PzInvariance> {
    if pz_list.is_empty() {
        return Err(Error::Domain("empty pz list".into()));
    }
    let entries = pz_list
        .par_iter()
        .map(|&pz| {
            let rec = sweep_theta(&[theta0], pz, cfg, None)?[0];
            let t1 = rec
                .t1
                .ok_or_else(|| Error::Domain(format!("no conjugate point found for pz = {pz}")))?;
            Ok((pz, t1 * pz.sqrt()))
        })
        .collect::<Result<Vec<_>>>()?;
    let scaled = entries.iter().map(|e| e.1);
    let max = scaled.clone().fold(f64::NEG_INFINITY, f64::max);
    let min = scaled.clone().fold(f64::INFINITY, f64::min);
    let mean = scaled.sum::<f64>() / entries.len() as f64;
    Ok(PzInvariance {
        spread: (max - min) / mean,
        entries,
    })
}

/// Energy error along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftReport {
    pub h: f64,
    pub method: Method,
    /// `maxₙ |H(yₙ) − H(y₀)|` over the whole run.
    pub max_drift: f64,
    /// The same maximum restricted to the first half of the time interval.
    pub drift_half: f64,
}

impl DriftReport {
    /// Ratio of the full-interval to the first-half drift; near 1 when the error does not grow.
    pub fn growth(&self) -> f64 {
        self.max_drift / self.drift_half
    }
}

pub fn drift_report(traj: &Trajectory) -> Result<DriftReport> {
    let h0 = *traj
        .energies
        .first()
        .ok_or_else(|| Error::Domain("empty trajectory".into()))?;
    let t_half = 0.5 * traj.times.last().copied().unwrap_or(0.0);
    let mut max_drift: f64 = 0.0;
    let mut drift_half: f64 = 0.0;
    for (t, e) in traj.times.iter().zip(&traj.energies) {
        let d = (e - h0).abs();
        max_drift = max_drift.max(d);
        if *t <= t_half {
            drift_half = drift_half.max(d);
        }
    }
    Ok(DriftReport {
        h: traj.h,
        method: traj.method,
        max_drift,
        drift_half,
    })
}

/// Total signed angle (radians) swept by the `(y, py)` projection around the origin.
///
/// A flat-case orbit close to the separatrix turns by `−π` for each lobe, so
/// one full period corresponds to `|angle| = 2π`.
pub fn phase_winding(traj: &Trajectory) -> f64 {
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    for (y, py) in traj.phase_plane() {
        let angle = py.atan2(y);
        if let Some(p) = prev {
            let mut d = angle - p;
            if d > PI {
                d -= 2.0 * PI;
            } else if d < -PI {
                d += 2.0 * PI;
            }
            total += d;
        }
        prev = Some(angle);
    }
    total
}

/// Values of `y` (linearly interpolated) where `py` changes sign.
///
/// Their signs tell which stationary point the orbit is turning around.
pub fn py_zero_crossings(traj: &Trajectory) -> Vec<f64> {
    traj.states
        .windows(2)
        .filter(|w| w[0].py * w[1].py < 0.0 || (w[1].py == 0.0 && w[0].py != 0.0))
        .map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let s = a.py / (a.py - b.py);
            a.y + s * (b.y - a.y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrators::integrate;
    use crate::DEFAULT_THETA0;
    use proptest::prelude::*;

    #[test]
    fn elliptic_k_values() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        // mpmath quadrature: 1.8540746773013719184...
        let k = elliptic_k(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!((k - 1.854_074_677_301_372).abs() < 1e-14);
        // mpmath quadrature: 8.9871973615284710248...
        let k = elliptic_k_for_theta(DEFAULT_THETA0).unwrap();
        assert!((k - 8.987_197_361_528_471).abs() / 8.99 < 1e-12);
        let direct = elliptic_k((0.5 * DEFAULT_THETA0).sin()).unwrap();
        assert!((direct - k).abs() / k < 1e-10);
    }

    #[test]
    fn elliptic_k_domain() {
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
        assert!(elliptic_k(f64::NAN).is_err());
        assert!(elliptic_k_complementary(0.0).is_err());
    }

    #[test]
    fn ratio_identities() {
        let theta0 = 2.0;
        let kk = elliptic_k_for_theta(theta0).unwrap();
        let pz: f64 = 7.0;
        assert!((ratio_r(3.0 * kk / pz.sqrt(), pz, theta0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ratio_r(2.0 * kk / pz.sqrt(), pz, theta0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        // table value of the flat-case conjugate time; mpmath gives 0.98714579154...
        let r = ratio_r(8.416409, 10.0, DEFAULT_THETA0).unwrap();
        assert!((r - 0.987_145_791_540_868_7).abs() < 1e-12);
        assert!(ratio_r(0.0, 10.0, 1.0).is_err());
        assert!(ratio_r(1.0, -1.0, 1.0).is_err());
        assert!(ratio_r(1.0, 1.0, PI).is_err());
    }

    #[test]
    fn eps_grid_shape() {
        let g = default_eps_grid();
        assert_eq!(g.len(), 13);
        assert!((g[0] - 1e-1).abs() < 1e-15 && (g[12] - 1e-4).abs() < 1e-18);
        assert!(g.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(log_eps_grid(1), vec![1e-1]);
    }

    #[test]
    fn drift_of_constant_energy_is_zero() {
        let traj = integrate(&PhaseState::initial(1.0, 0.0), &ProblemParams::flat(), &StepConfig::new(0.1), 2.0, Method::Verlet)
            .unwrap();
        let d = drift_report(&traj).unwrap();
        assert_eq!(d.max_drift, 0.0);
        assert_eq!(d.drift_half, 0.0);
    }

    #[test]
    fn single_pz_has_zero_spread() {
        let inv = pz_invariance_check(&[10.0], 2.0, &StepConfig::new(1e-2)).unwrap();
        assert_eq!(inv.entries.len(), 1);
        assert_eq!(inv.spread, 0.0);
        assert!(pz_invariance_check(&[], 2.0, &StepConfig::new(1e-2)).is_err());
    }

    #[test]
    fn unresolved_records_are_flagged() {
        let recs = sweep_theta(&[2.0], 10.0, &StepConfig::new(1e-2), Some(0.5)).unwrap();
        assert!(!recs[0].is_resolved());
        assert!(recs[0].r.is_none());
    }

    #[test]
    fn winding_of_a_circle() {
        // harmonic motion y'' = -y traced by hand: one full turn clockwise
        let n = 400;
        let states: Vec<_> = (0..=n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                PhaseState::new(0.0, t.sin(), 0.0, 0.0, t.cos(), 0.0)
            })
            .collect();
        let traj = Trajectory {
            h: 1.0,
            method: Method::Verlet,
            times: (0..=n).map(|i| i as f64).collect(),
            energies: vec![0.0; n + 1],
            states,
        };
        assert!((phase_winding(&traj) + 2.0 * PI).abs() < 1e-12);
        let crossings = py_zero_crossings(&traj);
        assert_eq!(crossings.len(), 2);
        assert!(crossings[0] > 0.0 && crossings[1] < 0.0);
    }

    proptest! {
        #[test]
        fn elliptic_k_increasing(a in 0.0..0.999f64, b in 0.0..0.999f64) {
            prop_assume!(a < b);
            prop_assert!(elliptic_k(a).unwrap() < elliptic_k(b).unwrap());
        }

        #[test]
        fn ratio_is_scale_invariant(t1 in 0.1..20.0f64, pz in 0.5..50.0f64, theta0 in 0.1..3.1f64, c in 0.1..10.0f64) {
            let r1 = ratio_r(t1, pz, theta0).unwrap();
            let r2 = ratio_r(c * t1, pz / (c * c), theta0).unwrap();
            prop_assert!((r1 - r2).abs() <= 1e-13 * r1.abs());
        }
    }
}
