//! Quadrature rules: Gauss–Legendre on [0,1] for radial integrals and the
//! uniform trapezoid rule on [0,2π) for cross-section angles.
//!
//! Radial integrands are polynomials times `e^{polynomial}`; a fixed
//! high-order Gauss rule integrates those to machine precision. Angular
//! integrands are trigonometric polynomials of low degree, for which the
//! n-point trapezoid rule is exact once n exceeds the bandwidth.

use crate::scalar::{s, Scalar};

/// Default Gauss–Legendre order for radial integrals.
pub const GAUSS_ORDER: usize = 48;

/// Default number of angular nodes per direction (exact for trigonometric
/// polynomials of degree ≤ 7 in products, far above what the lab uses).
pub const THETA_NODES: usize = 16;

/// Gauss–Legendre nodes and weights on [0,1].
///
/// Computed by Newton iteration on the Legendre polynomial `P_n` starting
/// from the Chebyshev-angle approximation; standard and accurate to machine
/// precision for the orders used here.
pub fn gauss_legendre_01<T: Scalar>(n: usize) -> Vec<(T, T)> {
    let mut out: Vec<(T, T)> = Vec::with_capacity(n);
    for k in 0..n {
        // initial guess for the k-th root of P_n on [-1,1]
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]
        out.push((s(0.5 * (1.0 - x)), s(0.5 * w)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Uniform angular nodes `θ_j = 2πj/n`, each carrying weight `2π/n`.
pub fn theta_nodes<T: Scalar>(n: usize) -> Vec<(T, T)> {
    let w = 2.0 * std::f64::consts::PI / n as f64;
    (0..n).map(|j| (s(w * j as f64), s(w))).collect()
}

/// Integrate a scalar function over [0,1] with the default Gauss rule.
pub fn integrate_01<T: Scalar>(f: impl Fn(T) -> T) -> T {
    gauss_legendre_01::<T>(GAUSS_ORDER)
        .into_iter()
        .fold(T::zero(), |acc, (x, w)| acc + w * f(x))
}
