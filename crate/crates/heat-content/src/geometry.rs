//! Model geometries: flat intervals and warped products `[0,1] × T^d`, d ≤ 2,
//! with metric `ds² = dr² + Σ_a e^{2 f_a(r)} dθ_a²` and circles of
//! circumference 2π.
//!
//! All boundary tensors are reported in orthonormal tangent frames with the
//! inward-normal convention, so the index contractions appearing in the
//! coefficient formulas (`L_aa`, `L_ab L_ab`, `Σ_a R_amma`) are literal sums:
//!
//! * `L_ab = −f_{a,r} δ_ab · σ` where `σ` is the sign of the inward normal
//!   (+∂_r at r=0, −∂_r at r=1),
//! * `R_amma = −f_{a,rr} − f_{a,r}²` (independent of `σ`: the normal index
//!   appears twice),
//! * the curvature sign convention is `R_1221 = +1` on the unit sphere.

use crate::poly::Poly;
use crate::scalar::{s, Scalar};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum number of angular (cross-section) directions.
pub const MAX_ANGULAR: usize = 2;

/// Mismatch tolerance for induced metrics at a glue point.
pub const GLUE_METRIC_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("warped geometry supports at most {MAX_ANGULAR} angular directions, got {0}")]
    TooManyDirections(usize),
    #[error("warping {index} must vanish at r={at}, but f({at}) = {value}")]
    WarpingNotVanishing { index: usize, at: f64, value: f64 },
    #[error("glued sides induce different metrics at the interface: e^{{2f+}} = {plus}, e^{{2f-}} = {minus}")]
    GlueMetricMismatch { plus: f64, minus: f64 },
}

/// One of the two boundary points of the radial interval `[0,1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum End {
    R0,
    R1,
}

impl End {
    pub fn coord<T: Scalar>(self) -> T {
        match self {
            End::R0 => T::zero(),
            End::R1 => T::one(),
        }
    }

    /// Sign of the inward unit normal as a multiple of +∂_r.
    pub fn inward_sign<T: Scalar>(self) -> T {
        match self {
            End::R0 => T::one(),
            End::R1 => -T::one(),
        }
    }

    pub fn other(self) -> End {
        match self {
            End::R0 => End::R1,
            End::R1 => End::R0,
        }
    }
}

/// Direction of the unit normal passed to boundary computations.
///
/// All theorem-facing quantities use [`Normal::Inward`]; the outward variant
/// exists for the orientation-flip invariant (it negates `L` and fixes the
/// curvatures).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normal {
    Inward,
    Outward,
}

impl Normal {
    fn sign<T: Scalar>(self) -> T {
        match self {
            Normal::Inward => T::one(),
            Normal::Outward => -T::one(),
        }
    }
}

/// Warped product `[0,1] × T^d` (d = warpings.len() ∈ {0,1,2}).
///
/// `d = 0` is the flat interval, `d = 1` the warped cylinder `[0,1]×S¹`,
/// `d = 2` the warped product with `S¹×S¹`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpedGeometry<T> {
    pub warpings: Vec<Poly<T>>,
}

impl<T: Scalar> WarpedGeometry<T> {
    pub fn new(warpings: Vec<Poly<T>>) -> Result<Self, GeometryError> {
        if warpings.len() > MAX_ANGULAR {
            return Err(GeometryError::TooManyDirections(warpings.len()));
        }
        Ok(WarpedGeometry { warpings })
    }

    /// Flat interval (no angular directions).
    pub fn interval() -> Self {
        WarpedGeometry {
            warpings: Vec::new(),
        }
    }

    /// Flat cylinder of the given angular dimension.
    pub fn flat(d: usize) -> Self {
        WarpedGeometry {
            warpings: vec![Poly::zero(); d],
        }
    }

    pub fn d(&self) -> usize {
        self.warpings.len()
    }

    /// Sum of the warpings, `F = Σ_a f_a`; the radial volume density is `e^F`.
    pub fn total_warp(&self) -> Poly<T> {
        let mut f = Poly::zero();
        for w in &self.warpings {
            f = f.add(w);
        }
        f
    }

    /// Radial volume density `w(r) = e^{F(r)}` (the dvol factor per unit
    /// angular coordinate volume).
    pub fn weight(&self, r: T) -> T {
        self.total_warp().eval(r).exp()
    }

    /// Total angular coordinate volume `(2π)^d`.
    pub fn angular_volume(&self) -> T {
        T::two_pi().powi(self.d() as i32)
    }

    /// Enforce that every warping vanishes at both ends (within `tol`), the
    /// standing assumption of the reduction identities.
    pub fn require_vanishing_warpings(&self, tol: T) -> Result<(), GeometryError> {
        for (index, f) in self.warpings.iter().enumerate() {
            for at in [0.0, 1.0] {
                let value = f.eval(s(at));
                if value.abs() > tol {
                    return Err(GeometryError::WarpingNotVanishing {
                        index,
                        at,
                        value: value.to_f64(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Check that two sides glued at `(end_plus, end_minus)` induce the same
/// metric on the interface cross-section.
pub fn check_glue_compatibility<T: Scalar>(
    plus: &WarpedGeometry<T>,
    minus: &WarpedGeometry<T>,
    end_plus: End,
    end_minus: End,
) -> Result<(), GeometryError> {
    assert_eq!(
        plus.d(),
        minus.d(),
        "glued sides must share the cross-section dimension"
    );
    for a in 0..plus.d() {
        let gp = (plus.warpings[a].eval(end_plus.coord::<T>()) * s(2.0)).exp();
        let gm = (minus.warpings[a].eval(end_minus.coord::<T>()) * s(2.0)).exp();
        if (gp - gm).abs() > s(GLUE_METRIC_TOL) {
            return Err(GeometryError::GlueMetricMismatch {
                plus: gp.to_f64(),
                minus: gm.to_f64(),
            });
        }
    }
    Ok(())
}

/// Boundary-localized geometric data at one end of a warped product, in an
/// orthonormal tangent frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGeometry<T> {
    /// Diagonal entries of the second fundamental form (it is diagonal for
    /// warped products).
    pub l_diag: Vec<T>,
    /// `L_aa`.
    pub l_trace: T,
    /// `L_ab L_ab`.
    pub l_norm2: T,
    /// `Σ_a R_amma` (normal-tangential curvature trace).
    pub r_amma_trace: T,
    /// `R_ijji` (scalar curvature contraction over the full frame).
    pub r_ijji: T,
    /// Where this data lives.
    pub at: End,
}

impl<T: Scalar> BoundaryGeometry<T> {
    /// All-zero data (flat interval boundary).
    pub fn flat(at: End) -> Self {
        BoundaryGeometry {
            l_diag: Vec::new(),
            l_trace: T::zero(),
            l_norm2: T::zero(),
            r_amma_trace: T::zero(),
            r_ijji: T::zero(),
            at,
        }
    }
}

/// Second fundamental form and curvature traces at a boundary point.
pub fn boundary_geometry<T: Scalar>(
    geom: &WarpedGeometry<T>,
    point: End,
    inward: Normal,
) -> BoundaryGeometry<T> {
    let r = point.coord::<T>();
    let sigma = point.inward_sign::<T>() * inward.sign::<T>();
    let mut l_diag = Vec::with_capacity(geom.d());
    let mut l_trace = T::zero();
    let mut l_norm2 = T::zero();
    let mut r_amma_trace = T::zero();
    for f in &geom.warpings {
        let fr = f.deriv().eval(r);
        let frr = f.deriv().deriv().eval(r);
        let l = -sigma * fr;
        l_diag.push(l);
        l_trace += l;
        l_norm2 += l * l;
        r_amma_trace += -frr - fr * fr;
    }
    BoundaryGeometry {
        l_diag,
        l_trace,
        l_norm2,
        r_amma_trace,
        r_ijji: scalar_curvature(geom, point, inward),
        at: point,
    }
}

/// Scalar curvature contraction `R_ijji` at a boundary point.
///
/// For the warped metric the sectional curvatures are
/// `K(r, θ_a) = −f_a'' − (f_a')²` and `K(θ_a, θ_b) = −f_a' f_b'`, and
/// `R_ijji = Σ_{i≠j} K(i,j)`. The normal orientation does not enter (every
/// index appears twice); the argument is kept for interface symmetry with
/// [`boundary_geometry`].
pub fn scalar_curvature<T: Scalar>(geom: &WarpedGeometry<T>, point: End, _inward: Normal) -> T {
    scalar_curvature_at(geom, point.coord())
}

/// `R_ijji` at an arbitrary radial coordinate.
pub fn scalar_curvature_at<T: Scalar>(geom: &WarpedGeometry<T>, r: T) -> T {
    let two: T = s(2.0);
    let mut tau = T::zero();
    let fr: Vec<T> = geom.warpings.iter().map(|f| f.deriv().eval(r)).collect();
    let frr: Vec<T> = geom
        .warpings
        .iter()
        .map(|f| f.deriv().deriv().eval(r))
        .collect();
    for a in 0..geom.d() {
        tau += two * (-frr[a] - fr[a] * fr[a]);
        for b in 0..geom.d() {
            if a != b {
                tau += -fr[a] * fr[b];
            }
        }
    }
    tau
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn f_r_one_minus_r() -> Poly<f64> {
        // f(r) = r(1−r) = r − r²
        Poly::from_f64s(&[0.0, 1.0, -1.0])
    }

    #[test]
    fn interval_boundary_is_all_zero() {
        let geom = WarpedGeometry::<f64>::interval();
        let bg = boundary_geometry(&geom, End::R0, Normal::Inward);
        assert_eq!(bg.l_trace, 0.0);
        assert_eq!(bg.l_norm2, 0.0);
        assert_eq!(bg.r_amma_trace, 0.0);
        assert_eq!(bg.r_ijji, 0.0);
    }

    #[test]
    fn cylinder_boundary_data_at_r0() {
        // d=1, f = r(1−r): f_r(0)=1, f_rr(0)=−2
        let geom = WarpedGeometry::new(vec![f_r_one_minus_r()]).unwrap();
        let bg = boundary_geometry(&geom, End::R0, Normal::Inward);
        assert_relative_eq!(bg.l_trace, -1.0, epsilon = 1e-14);
        assert_relative_eq!(bg.l_norm2, 1.0, epsilon = 1e-14);
        assert_relative_eq!(bg.r_amma_trace, 2.0 - 1.0, epsilon = 1e-14);
        assert_relative_eq!(bg.r_ijji, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn inward_sign_flips_at_r1() {
        let geom = WarpedGeometry::new(vec![f_r_one_minus_r()]).unwrap();
        // f_r(1) = −1; inward normal at r=1 is −∂_r, so L = −(−1)·(−1) = −1
        let bg = boundary_geometry(&geom, End::R1, Normal::Inward);
        assert_relative_eq!(bg.l_trace, -1.0, epsilon = 1e-14);
        // R_amma at r=1: −f_rr−f_r² = 2−1 = 1, independent of the sign
        assert_relative_eq!(bg.r_amma_trace, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn orientation_flip_negates_l_and_fixes_curvature() {
        let geom: WarpedGeometry<f64> =
            WarpedGeometry::new(vec![Poly::from_f64s(&[0.0, 0.5, -0.25, 0.125])]).unwrap();
        for point in [End::R0, End::R1] {
            let inw = boundary_geometry(&geom, point, Normal::Inward);
            let out = boundary_geometry(&geom, point, Normal::Outward);
            assert_relative_eq!(inw.l_trace, -out.l_trace, epsilon = 1e-14);
            assert_relative_eq!(inw.r_amma_trace, out.r_amma_trace, epsilon = 1e-14);
            assert_relative_eq!(inw.r_ijji, out.r_ijji, epsilon = 1e-14);
        }
    }

    #[test]
    fn two_equal_warpings() {
        let geom =
            WarpedGeometry::new(vec![f_r_one_minus_r(), f_r_one_minus_r()]).unwrap();
        let bg = boundary_geometry(&geom, End::R0, Normal::Inward);
        assert_relative_eq!(bg.l_trace, -2.0, epsilon = 1e-14);
        assert_relative_eq!(bg.l_norm2, 2.0, epsilon = 1e-14);
        // R_ijji = 2·2·(−f''−f'²) + 2·(−f'·f') = 4·1 − 2 = 2 at r=0
        assert_relative_eq!(bg.r_ijji, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn vanishing_warping_validation() {
        let ok = WarpedGeometry::new(vec![f_r_one_minus_r()]).unwrap();
        assert!(ok.require_vanishing_warpings(1e-12).is_ok());
        let bad = WarpedGeometry::new(vec![Poly::from_f64s(&[0.1])]).unwrap();
        assert!(bad.require_vanishing_warpings(1e-12).is_err());
    }

    #[test]
    fn glue_compatibility() {
        let a = WarpedGeometry::new(vec![f_r_one_minus_r()]).unwrap();
        let b = WarpedGeometry::new(vec![Poly::zero()]).unwrap();
        // both vanish at the ends: compatible
        assert!(check_glue_compatibility(&a, &b, End::R0, End::R0).is_ok());
        let c = WarpedGeometry::new(vec![Poly::from_f64s(&[0.3])]).unwrap();
        assert!(check_glue_compatibility(&a, &c, End::R1, End::R0).is_err());
    }

    // ──────────────────────────────────────────────────────────────────
    // Finite-difference Riemann oracle.
    //
    // Independent of the analytic formulas above: builds the coordinate
    // metric, differentiates it numerically for the Christoffel symbols and
    // their derivatives, assembles R_{ijkl} = g_{lm} R^m_{ijk}, and
    // orthonormalizes. Calibrated on the unit sphere (R_1221 = +1).
    // ──────────────────────────────────────────────────────────────────

    const H: f64 = 1e-3;

    type Metric<'a> = &'a dyn Fn(&[f64]) -> Vec<Vec<f64>>;

    fn christoffel(g: Metric, x: &[f64]) -> Vec<Vec<Vec<f64>>> {
        let m = x.len();
        // ∂_k g_ij by central differences
        let mut dg = vec![vec![vec![0.0; m]; m]; m];
        for k in 0..m {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[k] += H;
            xm[k] -= H;
            let gp = g(&xp);
            let gm = g(&xm);
            for i in 0..m {
                for j in 0..m {
                    dg[k][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * H);
                }
            }
        }
        let gx = g(x);
        let ginv = invert(&gx);
        let mut gamma = vec![vec![vec![0.0; m]; m]; m]; // gamma[l][j][k] = Γ^l_{jk}
        for l in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let mut sum = 0.0;
                    for p in 0..m {
                        sum += ginv[l][p] * (dg[j][p][k] + dg[k][p][j] - dg[p][j][k]);
                    }
                    gamma[l][j][k] = 0.5 * sum;
                }
            }
        }
        gamma
    }

    fn invert(g: &[Vec<f64>]) -> Vec<Vec<f64>> {
        // metrics here are diagonal; keep it simple
        let m = g.len();
        let mut inv = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    assert!(g[i][j].abs() < 1e-13, "oracle expects diagonal metrics");
                }
            }
            inv[i][i] = 1.0 / g[i][i];
        }
        inv
    }

    /// Orthonormal-frame R_{ijkl} with convention R_1221 = +1 on the sphere.
    fn riemann_orthonormal(g: Metric, x: &[f64], i: usize, j: usize, k: usize, l: usize) -> f64 {
        let m = x.len();
        // ∂_i Γ^l_{jk} by central differences of the Christoffel symbols
        let dgamma = |dir: usize| -> Vec<Vec<Vec<f64>>> {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[dir] += H;
            xm[dir] -= H;
            let gp = christoffel(g, &xp);
            let gm = christoffel(g, &xm);
            let mut d = vec![vec![vec![0.0; m]; m]; m];
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        d[a][b][c] = (gp[a][b][c] - gm[a][b][c]) / (2.0 * H);
                    }
                }
            }
            d
        };
        let di = dgamma(i);
        let dj = dgamma(j);
        let gamma = christoffel(g, x);
        let gx = g(x);
        let mut r_upper = vec![0.0; m]; // R^p_{ijk}
        for p in 0..m {
            let mut val = di[p][j][k] - dj[p][i][k];
            for q in 0..m {
                val += gamma[p][i][q] * gamma[q][j][k] - gamma[p][j][q] * gamma[q][i][k];
            }
            r_upper[p] = val;
        }
        let mut lower = 0.0;
        for p in 0..m {
            lower += gx[l][p] * r_upper[p];
        }
        lower / (gx[i][i] * gx[j][j] * gx[k][k] * gx[l][l]).sqrt()
    }

    #[test]
    fn oracle_calibration_on_unit_sphere() {
        let sphere = |x: &[f64]| -> Vec<Vec<f64>> {
            let theta = x[0];
            vec![vec![1.0, 0.0], vec![0.0, theta.sin().powi(2)]]
        };
        let r1221 = riemann_orthonormal(&sphere, &[1.1, 0.3], 0, 1, 1, 0);
        assert_relative_eq!(r1221, 1.0, max_relative = 1e-4);
    }

    fn warped_metric(geom: &WarpedGeometry<f64>) -> impl Fn(&[f64]) -> Vec<Vec<f64>> + '_ {
        move |x: &[f64]| {
            let m = 1 + geom.d();
            let mut g = vec![vec![0.0; m]; m];
            g[0][0] = 1.0;
            for a in 0..geom.d() {
                g[1 + a][1 + a] = (2.0 * geom.warpings[a].eval(x[0])).exp();
            }
            g
        }
    }

    #[test]
    fn analytic_r_amma_matches_fd_oracle() {
        let geom =
            WarpedGeometry::new(vec![Poly::from_f64s(&[0.0, 0.7, -0.4, 0.2])]).unwrap();
        let metric = warped_metric(&geom);
        // compare at interior points (one-sided FD at the ends is noisier)
        for r in [0.1, 0.5, 0.9] {
            let f = &geom.warpings[0];
            let fr = f.deriv().eval(r);
            let frr = f.deriv().deriv().eval(r);
            let analytic = -frr - fr * fr;
            let oracle = riemann_orthonormal(&metric, &[r, 0.2], 1, 0, 0, 1);
            assert_relative_eq!(oracle, analytic, max_relative = 1e-4, epsilon = 1e-6);
        }
    }

    #[test]
    fn analytic_r_ijji_matches_fd_oracle_d2() {
        let geom = WarpedGeometry::new(vec![
            Poly::from_f64s(&[0.0, 0.5, -0.3]),
            Poly::from_f64s(&[0.0, -0.2, 0.35]),
        ])
        .unwrap();
        let metric = warped_metric(&geom);
        for r in [0.25, 0.6] {
            let analytic = scalar_curvature_at(&geom, r);
            let mut oracle = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        oracle += riemann_orthonormal(&metric, &[r, 0.3, 1.2], i, j, j, i);
                    }
                }
            }
            assert_relative_eq!(oracle, analytic, max_relative = 1e-4, epsilon = 1e-6);
        }
    }

    #[test]
    fn boundary_r_amma_matches_oracle_extrapolated() {
        // The boundary value itself, reached from the interior: the analytic
        // R_amma is a polynomial in r, so comparing at r=H against the oracle
        // and at r=0 against its own limit covers the boundary claim.
        let geom = WarpedGeometry::new(vec![f_r_one_minus_r()]).unwrap();
        let metric = warped_metric(&geom);
        let oracle_near0 = riemann_orthonormal(&metric, &[2.0 * H, 0.1], 1, 0, 0, 1);
        let bg = boundary_geometry(&geom, End::R0, Normal::Inward);
        assert_relative_eq!(oracle_near0, bg.r_amma_trace, max_relative = 2e-2);
    }
}
