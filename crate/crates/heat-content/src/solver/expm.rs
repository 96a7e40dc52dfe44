//! Exact-in-time propagation for self-adjoint problems.
//!
//! After mass scaling the semigroup is `e^{−tL}` with `L` symmetric block
//! tridiagonal. Rather than an `O(G³)` eigendecomposition, the action
//! `e^{−tL}x` is evaluated through the Chebyshev expansion
//!
//! ```text
//! e^{−τy} = I₀(τ) + 2 Σ_{k≥1} (−1)^k I_k(τ) T_k(y),   y ∈ [−1, 1],
//! ```
//!
//! applied to the affine rescaling of `L` onto its Gershgorin interval.
//! The modified Bessel weights are generated by Miller's downward
//! recurrence in scaled form, so the series is exact to a fixed relative
//! tail (~1e−15) at any `t` with `O(√(t·λ_max))` matrix–vector products.

use super::assemble::BlockTriDiag;
use crate::scalar::{s, Scalar};

/// Relative size at which the Chebyshev tail is cut.
const TAIL_CUT: f64 = 1e-16;

/// Scaled modified Bessel values `I_k(τ)·e^{−τ}` for `k = 0..=k_top`,
/// by downward recurrence normalized with `I₀ + 2Σ_{k≥1} I_k = e^τ`.
fn scaled_bessel_i(tau: f64, k_top: usize) -> Vec<f64> {
    assert!(tau >= 0.0);
    if tau == 0.0 {
        let mut v = vec![0.0; k_top + 1];
        v[0] = 1.0;
        return v;
    }
    let mut vals = vec![0.0_f64; k_top + 2];
    vals[k_top + 1] = 0.0;
    vals[k_top] = 1e-280;
    for k in (1..=k_top).rev() {
        let next = vals[k + 1] + (2.0 * k as f64 / tau) * vals[k];
        vals[k - 1] = next;
        if next.abs() > 1e260 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-260;
            }
        }
    }
    let norm: f64 = vals[0] + 2.0 * vals[1..=k_top].iter().sum::<f64>();
    let mut out = vals;
    out.truncate(k_top + 1);
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// Chebyshev coefficients of `e^{−τy}` on `[−1, 1]`, truncated at the
/// relative tail. Entry `k` already carries the factor `(2 − δ_{k0})(−1)^k`.
fn exp_cheb_coeffs(tau: f64) -> Vec<f64> {
    let k_top = (9.0 * (tau + 1.0).sqrt() + 40.0).ceil() as usize;
    let bessel = scaled_bessel_i(tau, k_top);
    let mut coeffs: Vec<f64> = Vec::with_capacity(k_top + 1);
    coeffs.push(bessel[0]);
    for (k, &b) in bessel.iter().enumerate().skip(1) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(2.0 * sign * b);
    }
    // cut once the remaining terms are negligible against Σ|c| = O(1)
    let mut last = coeffs.len();
    while last > 1 && coeffs[last - 1].abs() < TAIL_CUT {
        last -= 1;
    }
    coeffs.truncate(last);
    coeffs
}

/// `y ← e^{−tL} x` for symmetric `L` with spectrum inside `[lo, hi]`.
/// Returns a bound on the relative truncation error of the series.
pub fn expm_action<T: Scalar>(
    l: &BlockTriDiag<T>,
    lo: f64,
    hi: f64,
    t: f64,
    x: &[T],
    y: &mut Vec<T>,
) -> f64 {
    let dim = l.dim();
    assert_eq!(x.len(), dim);
    let center = 0.5 * (lo + hi);
    let halfwidth = 0.5 * (hi - lo);
    y.clear();
    y.resize(dim, T::zero());
    if halfwidth <= 0.0 || t * halfwidth < 1e-300 {
        let p: T = s((-t * center).exp());
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = p * xi;
        }
        return 0.0;
    }
    let tau = t * halfwidth;
    let coeffs = exp_cheb_coeffs(tau);
    // prefactor e^{−t·lo}: the scaled-Bessel normalization absorbs e^{+τ}
    let prefactor: T = s((-t * lo).exp());

    let inv_hw: T = s(1.0 / halfwidth);
    let c_t: T = s(center);
    // T_k recurrence on vectors: t0 = x, t1 = Yx, t_{k+1} = 2Y t_k − t_{k−1}
    let mut t_prev: Vec<T> = x.to_vec();
    let mut t_cur: Vec<T> = vec![T::zero(); dim];
    let mut work: Vec<T> = vec![T::zero(); dim];

    let c0: T = s(coeffs[0]);
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = c0 * xi;
    }
    if coeffs.len() > 1 {
        l.matvec_into(&t_prev, &mut work);
        for i in 0..dim {
            t_cur[i] = (work[i] - c_t * t_prev[i]) * inv_hw;
        }
        let c1: T = s(coeffs[1]);
        for i in 0..dim {
            y[i] += c1 * t_cur[i];
        }
        let two = s::<T>(2.0);
        for &ck in coeffs.iter().skip(2) {
            l.matvec_into(&t_cur, &mut work);
            // shift (T_{k−1}, T_k) → (T_k, T_{k+1}) in place
            for i in 0..dim {
                let next = two * (work[i] - c_t * t_cur[i]) * inv_hw - t_prev[i];
                t_prev[i] = t_cur[i];
                t_cur[i] = next;
            }
            let c: T = s(ck);
            for i in 0..dim {
                y[i] += c * t_cur[i];
            }
        }
    }
    for yi in y.iter_mut() {
        *yi *= prefactor;
    }
    TAIL_CUT * coeffs.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    /// Reference I_k(τ)e^{−τ} by the integral ∫₀^π e^{τ(cosθ−1)}cos(kθ)dθ/π.
    fn bessel_reference(tau: f64, k: usize) -> f64 {
        let m = 20_000;
        let mut acc = 0.0;
        for j in 0..m {
            let theta = std::f64::consts::PI * (j as f64 + 0.5) / m as f64;
            acc += (tau * (theta.cos() - 1.0)).exp() * (k as f64 * theta).cos();
        }
        acc / m as f64
    }

    #[test]
    fn scaled_bessel_matches_quadrature() {
        for &tau in &[0.3, 4.0, 90.0] {
            let vals = scaled_bessel_i(tau, 60);
            for &k in &[0usize, 1, 3, 10] {
                assert_relative_eq!(
                    vals[k],
                    bessel_reference(tau, k),
                    epsilon = 1e-12,
                    max_relative = 1e-9
                );
            }
        }
    }

    #[test]
    fn cheb_series_sums_to_the_exponential() {
        for &tau in &[0.5, 25.0, 4.0e3] {
            let coeffs = exp_cheb_coeffs(tau);
            for &y in &[-1.0, -0.37, 0.0, 0.61, 1.0] {
                // evaluate Σ c_k T_k(y) by the scalar recurrence
                let mut t_prev = 1.0;
                let mut t_cur = y;
                let mut acc = coeffs[0] * t_prev;
                if coeffs.len() > 1 {
                    acc += coeffs[1] * t_cur;
                }
                for &c in coeffs.iter().skip(2) {
                    let next = 2.0 * y * t_cur - t_prev;
                    t_prev = t_cur;
                    t_cur = next;
                    acc += c * t_cur;
                }
                // both sides scaled by e^{τ} relative to e^{−τy}
                assert_relative_eq!(acc, (-tau * (y + 1.0)).exp(), epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn expm_action_matches_dense_exponential_on_a_small_matrix() {
        // 3-node symmetric operator with known entries
        let mut l = BlockTriDiag::<f64>::zeros(3, 2);
        let d0 = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 3.0]);
        let d1 = DMatrix::from_row_slice(2, 2, &[5.0, -1.0, -1.0, 2.0]);
        let off = DMatrix::from_row_slice(2, 2, &[-1.0, 0.5, 0.2, -0.7]);
        l.add_block(0, 0, &d0);
        l.add_block(1, 1, &d1);
        l.add_block(2, 2, &d0);
        l.add_block(0, 1, &off);
        l.add_block(1, 0, &off.transpose());
        l.add_block(1, 2, &off);
        l.add_block(2, 1, &off.transpose());

        let dense = DMatrix::from_fn(6, 6, |i, j| {
            let (bi, bj) = (i / 2, j / 2);
            if bi.abs_diff(bj) <= 1 {
                l.block(bi, bj)[(i % 2, j % 2)]
            } else {
                0.0
            }
        });
        let x = nalgebra::DVector::from_vec(vec![1.0, -2.0, 0.5, 0.0, 1.5, -1.0]);
        for &t in &[0.01, 0.3, 2.0] {
            // dense reference by scaling-and-squaring on the series
            let m = 8;
            let a = dense.clone() * (-t / 2.0_f64.powi(m));
            let mut e = DMatrix::identity(6, 6);
            let mut term = DMatrix::identity(6, 6);
            for k in 1..30 {
                term = &term * &a / k as f64;
                e += &term;
            }
            for _ in 0..m {
                e = &e * &e;
            }
            let want = &e * &x;
            let (lo, hi) = l.gershgorin();
            let mut got = Vec::new();
            expm_action(&l, lo, hi, t, x.as_slice(), &mut got);
            for i in 0..6 {
                assert_relative_eq!(got[i], want[i], epsilon = 1e-10, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn large_tau_stays_finite_and_accurate_at_the_spectrum_edge() {
        // decay of the lowest mode must be exact even when τ is huge
        let mut l = BlockTriDiag::<f64>::zeros(2, 1);
        l.add_block(0, 0, &DMatrix::from_element(1, 1, 1.0));
        l.add_block(1, 1, &DMatrix::from_element(1, 1, 3.0e6));
        let x = [1.0, 1.0];
        let mut y = Vec::new();
        expm_action(&l, 0.0, 3.1e6, 0.05, &x, &mut y);
        assert_relative_eq!(y[0], (-0.05_f64).exp(), max_relative = 1e-10);
        assert!(y[1].abs() < 1e-12);
    }
}
