//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use martinet_geodesics::martinet::PhaseState;

/// Right-hand side of the geodesic equations, written out from scratch.
pub fn geodesic_rhs(beta: f64, s: &[f64; 6]) -> [f64; 6] {
    let [x, y, _z, px, py, pz] = *s;
    let a = px + pz * y * y / 2.0;
    let w = 1.0 + beta * x;
    [
        a,
        py / (w * w),
        a * y * y / 2.0,
        beta * py * py / (w * w * w),
        -a * pz * y,
        0.0,
    ]
}

fn axpy(a: f64, x: &[f64; 6], y: &[f64; 6]) -> [f64; 6] {
    std::array::from_fn(|i| y[i] + a * x[i])
}

/// Classical fourth-order Runge–Kutta with fixed step `dt` over `[0, t]`.
pub fn rk4_flow(beta: f64, s0: &PhaseState, t: f64, dt: f64) -> PhaseState {
    let n = (t / dt).round() as usize;
    let dt = t / n as f64;
    let mut y = [s0.x, s0.y, s0.z, s0.px, s0.py, s0.pz];
    for _ in 0..n {
        let k1 = geodesic_rhs(beta, &y);
        let k2 = geodesic_rhs(beta, &axpy(0.5 * dt, &k1, &y));
        let k3 = geodesic_rhs(beta, &axpy(0.5 * dt, &k2, &y));
        let k4 = geodesic_rhs(beta, &axpy(dt, &k3, &y));
        y = std::array::from_fn(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    PhaseState::new(y[0], y[1], y[2], y[3], y[4], y[5])
}

/// Reference flow: RK4 with step 1e-5.
pub fn reference_flow(beta: f64, s0: &PhaseState, t: f64) -> PhaseState {
    rk4_flow(beta, s0, t, 1e-5)
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

fn gl_panel<F: Fn(f64) -> f64>(f: &F, rule: &[(f64, f64)], a: f64, b: f64) -> f64 {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    r * rule.iter().map(|(x, w)| w * f(m + r * x)).sum::<f64>()
}

fn adapt<F: Fn(f64) -> f64>(f: &F, rule: &[(f64, f64)], a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = gl_panel(f, rule, a, m);
    let right = gl_panel(f, rule, m, b);
    let tol = tol.max(16.0 * f64::EPSILON * (left + right).abs());
    if (left + right - whole).abs() <= tol || depth == 0 {
        left + right
    } else {
        adapt(f, rule, a, m, left, 0.5 * tol, depth - 1) + adapt(f, rule, m, b, right, 0.5 * tol, depth - 1)
    }
}

/// Adaptive 10-point Gauss–Legendre quadrature.
pub fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let rule = gauss_legendre(10);
    let whole = gl_panel(&f, &rule, a, b);
    adapt(&f, &rule, a, b, whole, tol, 30)
}

/// `∫₀^{π/2} du / √(1 − k² sin² u)` by quadrature, with `1 − k² sin² u = cos² u + k'² sin² u`.
pub fn elliptic_k_quadrature(k: f64) -> f64 {
    let kp2 = (1.0 - k) * (1.0 + k);
    quad(
        |u| {
            let (s, c) = u.sin_cos();
            1.0 / (c * c + kp2 * s * s).sqrt()
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        1e-14,
    )
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
