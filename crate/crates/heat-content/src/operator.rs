//! Laplace-type operators in natural form, their duals, smooth fields, and
//! the four boundary-condition families.
//!
//! An operator of Laplace type is written here as `D = −(Tr ∇² + E)` where
//! `∇ = ∂ + ω` is the natural connection and `E` the endomorphism. On a
//! warped product the trace expands to
//!
//! ```text
//! Tr ∇² u = (∂_r + ω_r)² u + Σ_a [ f_{a,r} (∂_r + ω_r) u
//!           + e^{−2 f_a} (∂_{θ_a} + ω_{θ_a})² u ]
//! ```
//!
//! The symbol form `D = −(g^{μν}∂_μ∂_ν + A^μ∂_μ + B)` converts to natural
//! form via `ω_δ = ½ g_{νδ}(A^ν + g^{μσ}Γ_{μσ}{}^ν)` and back, exactly, at
//! the polynomial level.
//!
//! Real fibers only: the dual operator on `V*` carries the connection `−ωᵀ`
//! and endomorphism `Eᵀ`, and the dual boundary conditions transpose (and,
//! for transmission, swap) the coupling matrices.

use crate::geometry::{End, WarpedGeometry};
use crate::poly::{ExpPoly, MatPoly, Poly};
use crate::scalar::{s, Scalar};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("fiber dimension mismatch: expected {expected}, got {got}")]
    FiberDim { expected: usize, got: usize },
    #[error("omega_theta needs one matrix per angular direction ({expected}), got {got}")]
    OmegaThetaCount { expected: usize, got: usize },
    #[error("angular first-order symbol terms are only supported on flat cross-sections")]
    AngularSymbolOnWarped,
    #[error("field has {got} angular modes but the geometry has {expected} angular directions")]
    ModeCount { expected: usize, got: usize },
    #[error("bulk conductivities must be positive")]
    NonpositiveConductivity,
}

// ──────────────────────────────────────────────────────────────────────────
// Operators
// ──────────────────────────────────────────────────────────────────────────

/// Laplace-type operator in natural form on one side.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplaceData<T> {
    pub fiber_dim: usize,
    /// Radial connection 1-form component ω_r(r).
    pub omega_r: MatPoly<T>,
    /// Constant connection component per angular direction.
    pub omega_theta: Vec<DMatrix<T>>,
    /// Endomorphism E(r).
    pub e: MatPoly<T>,
    pub geom: WarpedGeometry<T>,
}

/// The dual operator `D̃` on `V*` has the same shape as `D`.
pub type DualLaplaceData<T> = LaplaceData<T>;

impl<T: Scalar> LaplaceData<T> {
    /// Scalar Laplacian of the geometry: ω = 0, E = 0, n = 1.
    pub fn scalar_laplacian(geom: WarpedGeometry<T>) -> Self {
        let d = geom.d();
        LaplaceData {
            fiber_dim: 1,
            omega_r: MatPoly::zero(1),
            omega_theta: vec![DMatrix::zeros(1, 1); d],
            e: MatPoly::zero(1),
            geom,
        }
    }

    pub fn validate(&self) -> Result<(), OperatorError> {
        for (dim, _name) in [(self.omega_r.dim, "omega_r"), (self.e.dim, "E")] {
            if dim != self.fiber_dim {
                return Err(OperatorError::FiberDim {
                    expected: self.fiber_dim,
                    got: dim,
                });
            }
        }
        if self.omega_theta.len() != self.geom.d() {
            return Err(OperatorError::OmegaThetaCount {
                expected: self.geom.d(),
                got: self.omega_theta.len(),
            });
        }
        for m in &self.omega_theta {
            if m.nrows() != self.fiber_dim || m.ncols() != self.fiber_dim {
                return Err(OperatorError::FiberDim {
                    expected: self.fiber_dim,
                    got: m.nrows(),
                });
            }
        }
        Ok(())
    }

    /// Dual operator on `V*`: connection `−ωᵀ`, endomorphism `Eᵀ`.
    pub fn dual(&self) -> DualLaplaceData<T> {
        LaplaceData {
            fiber_dim: self.fiber_dim,
            omega_r: self.omega_r.transpose().neg(),
            omega_theta: self.omega_theta.iter().map(|m| -m.transpose()).collect(),
            e: self.e.transpose(),
            geom: self.geom.clone(),
        }
    }

    /// Shift the endomorphism by `ε·Id`; `D` becomes `D − ε`.
    pub fn shift_e(&self, eps: T) -> Self {
        let mut out = self.clone();
        out.e = out.e.add(&crate::poly::MatPoly::scalar(self.fiber_dim, eps));
        out
    }

    /// Zeroth-order radial potential of the natural-form expansion,
    /// `ω_r' + ω_r² + F' ω_r` (the part multiplying `u` beyond `E`).
    pub fn radial_potential(&self) -> MatPoly<T> {
        let fp = self.geom.total_warp().deriv();
        self.omega_r
            .deriv()
            .add(&self.omega_r.mul(&self.omega_r))
            .add(&self.omega_r.mul_poly(&fp))
    }
}

/// `dualize(op)`: free-function spelling of [`LaplaceData::dual`].
pub fn dualize<T: Scalar>(op: &LaplaceData<T>) -> DualLaplaceData<T> {
    op.dual()
}

/// Build natural-form data from the symbol `−(g^{μν}∂_μ∂_ν + A^μ∂_μ + B)`.
///
/// `a_r` is the radial component `A^r(r)`; `a_theta` are constant angular
/// components `A^{θ_a}` (coordinate frame), allowed only on flat
/// cross-sections where `ω_{θ_a} = ½ A^{θ_a}` stays r-independent.
pub fn symbol_to_natural<T: Scalar>(
    a_r: &MatPoly<T>,
    a_theta: &[DMatrix<T>],
    b: &MatPoly<T>,
    geom: &WarpedGeometry<T>,
) -> Result<LaplaceData<T>, OperatorError> {
    let n = a_r.dim;
    if b.dim != n {
        return Err(OperatorError::FiberDim {
            expected: n,
            got: b.dim,
        });
    }
    if a_theta.len() != geom.d() {
        return Err(OperatorError::OmegaThetaCount {
            expected: geom.d(),
            got: a_theta.len(),
        });
    }
    let has_angular = a_theta.iter().any(|m| m.amax() > T::zero());
    let warped = geom.warpings.iter().any(|f| !f.is_zero());
    if has_angular && warped {
        return Err(OperatorError::AngularSymbolOnWarped);
    }

    // ω_r = ½ (A^r + g^{μσ}Γ_{μσ}{}^r) = ½ (A^r − F'·I)
    let fp = geom.total_warp().deriv();
    let half = s(0.5);
    let omega_r = a_r
        .add(&MatPoly::scalar_poly(n, &fp).neg())
        .scale(half);
    // ω_θ = ½ g_θθ A^θ = ½ A^θ on flat cross-sections
    let omega_theta: Vec<DMatrix<T>> = a_theta.iter().map(|m| m.scale(half)).collect();

    // E = B − (ω_r' + ω_r² + F'ω_r) − Σ_a e^{−2f_a} ω_θ² ; flat ⇒ e^{−2f}=1
    let mut e = b.clone();
    let op_tmp = LaplaceData {
        fiber_dim: n,
        omega_r: omega_r.clone(),
        omega_theta: omega_theta.clone(),
        e: MatPoly::zero(n),
        geom: geom.clone(),
    };
    e = e.add(&op_tmp.radial_potential().neg());
    for om in &omega_theta {
        e = e.add(&MatPoly::constant(-(om * om)));
    }
    Ok(LaplaceData {
        fiber_dim: n,
        omega_r,
        omega_theta,
        e,
        geom: geom.clone(),
    })
}

/// Recover the symbol `(A^r, A^θ, B)` from natural-form data (inverse of
/// [`symbol_to_natural`]; exact at polynomial level).
pub fn natural_to_symbol<T: Scalar>(
    op: &LaplaceData<T>,
) -> (MatPoly<T>, Vec<DMatrix<T>>, MatPoly<T>) {
    let n = op.fiber_dim;
    let two = s(2.0);
    let fp = op.geom.total_warp().deriv();
    let a_r = op.omega_r.scale(two).add(&MatPoly::scalar_poly(n, &fp));
    let a_theta: Vec<DMatrix<T>> = op.omega_theta.iter().map(|m| m.scale(two)).collect();
    let mut b = op.e.add(&op.radial_potential());
    for om in &op.omega_theta {
        b = b.add(&MatPoly::constant(om * om));
    }
    (a_r, a_theta, b)
}

// ──────────────────────────────────────────────────────────────────────────
// Fields
// ──────────────────────────────────────────────────────────────────────────

/// Trigonometric flavor of an angular mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    Cos,
    Sin,
}

/// Single Fourier mode `cos(kθ)` or `sin(kθ)` in one angular direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub k: u32,
    pub kind: Trig,
}

impl Mode {
    pub const ZERO: Mode = Mode {
        k: 0,
        kind: Trig::Cos,
    };

    pub fn value<T: Scalar>(self, theta: T) -> T {
        let kt = s::<T>(self.k as f64) * theta;
        match self.kind {
            Trig::Cos => kt.cos(),
            Trig::Sin => kt.sin(),
        }
    }

    pub fn dvalue<T: Scalar>(self, theta: T) -> T {
        let k: T = s(self.k as f64);
        let kt = k * theta;
        match self.kind {
            Trig::Cos => -k * kt.sin(),
            Trig::Sin => k * kt.cos(),
        }
    }

    pub fn ddvalue<T: Scalar>(self, theta: T) -> T {
        let k: T = s(self.k as f64);
        -k * k * self.value(theta)
    }

    pub fn is_zero_mode(self) -> bool {
        self.k == 0 && self.kind == Trig::Cos
    }
}

/// Smooth n-vector field on one side: shared radial profile structure
/// `comps(r)·e^{exponent(r)}` times one Fourier mode per angular direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideFn<T> {
    pub comps: Vec<Poly<T>>,
    pub exponent: Poly<T>,
    pub modes: Vec<Mode>,
}

impl<T: Scalar> SideFn<T> {
    pub fn new(comps: Vec<Poly<T>>) -> Self {
        SideFn {
            comps,
            exponent: Poly::zero(),
            modes: Vec::new(),
        }
    }

    /// Constant scalar field (fiber dimension 1).
    pub fn constant(c: T) -> Self {
        SideFn::new(vec![Poly::constant(c)])
    }

    pub fn from_f64s(comps: &[&[f64]]) -> Self {
        SideFn::new(comps.iter().map(|c| Poly::from_f64s(c)).collect())
    }

    pub fn fiber_dim(&self) -> usize {
        self.comps.len()
    }

    pub fn with_modes(mut self, modes: Vec<Mode>) -> Self {
        self.modes = modes;
        self
    }

    /// Multiply by `e^{g(r)}` (used by the warped reduction: ρ ↦ e^f ρ).
    pub fn mul_exp(mut self, g: &Poly<T>) -> Self {
        self.exponent = self.exponent.add(g);
        self
    }

    pub fn scale(&self, s: T) -> Self {
        SideFn {
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
            exponent: self.exponent.clone(),
            modes: self.modes.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.exponent, other.exponent, "profiles must share exponent");
        assert_eq!(self.modes, other.modes, "profiles must share modes");
        assert_eq!(self.comps.len(), other.comps.len());
        SideFn {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
            exponent: self.exponent.clone(),
            modes: self.modes.clone(),
        }
    }

    /// Angular mode in direction `a` (zero mode when unspecified).
    pub fn mode(&self, a: usize) -> Mode {
        self.modes.get(a).copied().unwrap_or(Mode::ZERO)
    }

    /// True when every angular mode is the trivial constant one.
    pub fn is_zero_mode(&self) -> bool {
        self.modes.iter().all(|m| m.is_zero_mode())
    }

    /// Radial values `[u, u', u'']` at `r` (angular factor not included).
    pub fn radial_jet(&self, r: T) -> [DVector<T>; 3] {
        let n = self.comps.len();
        let mut v0 = DVector::zeros(n);
        let mut v1 = DVector::zeros(n);
        let mut v2 = DVector::zeros(n);
        for (i, p) in self.comps.iter().enumerate() {
            let ep = ExpPoly {
                poly: p.clone(),
                exponent: self.exponent.clone(),
            };
            let dep = ep.deriv();
            v0[i] = ep.eval(r);
            v1[i] = dep.eval(r);
            v2[i] = dep.deriv().eval(r);
        }
        [v0, v1, v2]
    }

    /// Product of the angular mode factors at the given angles.
    pub fn theta_factor(&self, thetas: &[T]) -> T {
        let mut f = T::one();
        for (a, &th) in thetas.iter().enumerate() {
            f *= self.mode(a).value(th);
        }
        f
    }

    /// First θ_a-derivative of the angular factor product.
    pub fn theta_factor_d(&self, thetas: &[T], a: usize) -> T {
        let mut f = T::one();
        for (b, &th) in thetas.iter().enumerate() {
            f *= if a == b {
                self.mode(b).dvalue(th)
            } else {
                self.mode(b).value(th)
            };
        }
        f
    }

    /// Second θ_a-derivative of the angular factor product.
    pub fn theta_factor_dd(&self, thetas: &[T], a: usize) -> T {
        let mut f = T::one();
        for (b, &th) in thetas.iter().enumerate() {
            f *= if a == b {
                self.mode(b).ddvalue(th)
            } else {
                self.mode(b).value(th)
            };
        }
        f
    }

    /// Full value at `(r, θ)`.
    pub fn value(&self, r: T, thetas: &[T]) -> DVector<T> {
        let [v0, _, _] = self.radial_jet(r);
        v0 * self.theta_factor(thetas)
    }
}

/// Field on the glued manifold: a section over each side. One-sided problems
/// leave `minus` empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidedField<T> {
    pub plus: SideFn<T>,
    pub minus: Option<SideFn<T>>,
}

impl<T: Scalar> SidedField<T> {
    pub fn one_sided(plus: SideFn<T>) -> Self {
        SidedField { plus, minus: None }
    }

    pub fn two_sided(plus: SideFn<T>, minus: SideFn<T>) -> Self {
        SidedField {
            plus,
            minus: Some(minus),
        }
    }

    pub fn side(&self, side: Side) -> &SideFn<T> {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => self.minus.as_ref().expect("two-sided field required"),
        }
    }
}

/// Which side of the interface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

// ──────────────────────────────────────────────────────────────────────────
// Pointwise operator application
// ──────────────────────────────────────────────────────────────────────────

/// Evaluate `D u` at `(r, θ)` for a smooth field `u` on the side carrying
/// `op`. Fully pointwise, so any combination of warping, connection and
/// angular mode is supported.
pub fn eval_d<T: Scalar>(op: &LaplaceData<T>, u: &SideFn<T>, r: T, thetas: &[T]) -> DVector<T> {
    debug_assert_eq!(u.fiber_dim(), op.fiber_dim);
    let [v0, v1, v2] = u.radial_jet(r);
    let fp = op.geom.total_warp().deriv().eval(r);
    let om = op.omega_r.eval(r);
    let pot = op.radial_potential().eval(r);
    let e = op.e.eval(r);
    let two = s(2.0);
    let base = u.theta_factor(thetas);

    // radial part of Tr ∇²: u'' + (F' + 2ω_r) u' + (ω_r' + ω_r² + F'ω_r) u
    let mut tr = (&v2 + (&om * &v1).scale(two) + v1.clone().scale(fp) + &pot * &v0).scale(base);

    // angular parts: e^{−2f_a} (∂_θ + ω_θ)² u
    for a in 0..op.geom.d() {
        let w = (-two * op.geom.warpings[a].eval(r)).exp();
        let omt = &op.omega_theta[a];
        let da = u.theta_factor_d(thetas, a);
        let dda = u.theta_factor_dd(thetas, a);
        let ang = v0.clone().scale(dda) + (omt * &v0).scale(two * da) + (omt * (omt * &v0)).scale(base);
        tr += ang.scale(w);
    }

    -(tr + (&e * &v0).scale(base))
}

/// Covariant inward-normal derivative `∇_ν u` at a boundary point.
pub fn eval_normal_deriv<T: Scalar>(
    op: &LaplaceData<T>,
    u: &SideFn<T>,
    end: End,
    thetas: &[T],
) -> DVector<T> {
    let r = end.coord::<T>();
    let sigma = end.inward_sign::<T>();
    let [v0, v1, _] = u.radial_jet(r);
    let om = op.omega_r.eval(r);
    (v1 + &om * &v0).scale(sigma * u.theta_factor(thetas))
}

/// Covariant tangential derivative `u_{:a}` in the orthonormal frame
/// `e_a = e^{−f_a} ∂_{θ_a}` (includes the bundle connection ω_θ).
pub fn eval_tangential_deriv<T: Scalar>(
    op: &LaplaceData<T>,
    u: &SideFn<T>,
    r: T,
    thetas: &[T],
    a: usize,
) -> DVector<T> {
    let [v0, _, _] = u.radial_jet(r);
    let scale = (-op.geom.warpings[a].eval(r)).exp();
    let omt = &op.omega_theta[a];
    (v0.clone().scale(u.theta_factor_d(thetas, a)) + (omt * &v0).scale(u.theta_factor(thetas)))
        .scale(scale)
}

// ──────────────────────────────────────────────────────────────────────────
// Boundary conditions
// ──────────────────────────────────────────────────────────────────────────

/// Four blocks of the transmission operator B₂.
///
/// `pm` maps `V₋ → V₊` (couples `φ₋` into the `+` row) and `mp` maps
/// `V₊ → V₋`; unequal fiber dimensions are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct SBlocks<T> {
    pub pp: DMatrix<T>,
    pub pm: DMatrix<T>,
    pub mp: DMatrix<T>,
    pub mm: DMatrix<T>,
}

impl<T: Scalar> SBlocks<T> {
    pub fn zero(n_plus: usize, n_minus: usize) -> Self {
        SBlocks {
            pp: DMatrix::zeros(n_plus, n_plus),
            pm: DMatrix::zeros(n_plus, n_minus),
            mp: DMatrix::zeros(n_minus, n_plus),
            mm: DMatrix::zeros(n_minus, n_minus),
        }
    }

    pub fn scalar(pp: T, pm: T, mp: T, mm: T) -> Self {
        SBlocks {
            pp: DMatrix::from_element(1, 1, pp),
            pm: DMatrix::from_element(1, 1, pm),
            mp: DMatrix::from_element(1, 1, mp),
            mm: DMatrix::from_element(1, 1, mm),
        }
    }
}

/// One of the four condition families.
#[derive(Clone, Debug, PartialEq)]
pub enum Condition<T> {
    Dirichlet,
    /// `B_R φ = ∇_ν φ + S φ`.
    Robin { s: DMatrix<T> },
    /// `B₁ φ = (φ₊ − φ₋, ∇_{ν+}φ₊ + ∇_{ν−}φ₋ − U φ₊)`; requires n₊ = n₋.
    Transmittal { u: DMatrix<T> },
    /// `B₂ φ = (∇_{ν+}φ₊ + S₊₊φ₊ + S₊₋φ₋, ∇_{ν−}φ₋ + S₋₊φ₊ + S₋₋φ₋)`.
    Transmission { blocks: SBlocks<T> },
}

impl<T: Scalar> Condition<T> {
    pub fn robin_scalar(s: T) -> Self {
        Condition::Robin {
            s: DMatrix::from_element(1, 1, s),
        }
    }

    pub fn transmittal_scalar(u: T) -> Self {
        Condition::Transmittal {
            u: DMatrix::from_element(1, 1, u),
        }
    }

    pub fn is_interface(&self) -> bool {
        matches!(
            self,
            Condition::Transmittal { .. } | Condition::Transmission { .. }
        )
    }
}

/// Where a condition is attached: one outer boundary point of one side, or an
/// interface gluing an end of each side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryId {
    Outer { side: Side, end: End },
    Interface { plus_end: End, minus_end: End },
}

/// A condition together with its attachment point.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionSpec<T> {
    pub condition: Condition<T>,
    pub attached_to: BoundaryId,
}

/// Evaluate the boundary residual(s) `B φ` at the attachment point, at the
/// given cross-section angles. Zero vectors iff `φ` satisfies the condition
/// there. Normal derivatives are covariant (they include ω_r).
pub fn apply_condition<T: Scalar>(
    spec: &ConditionSpec<T>,
    phi: &SidedField<T>,
    op_plus: &LaplaceData<T>,
    op_minus: Option<&LaplaceData<T>>,
    thetas: &[T],
) -> Vec<DVector<T>> {
    match (&spec.condition, spec.attached_to) {
        (Condition::Dirichlet, BoundaryId::Outer { side, end }) => {
            let (op, f) = side_pair(side, phi, op_plus, op_minus);
            let _ = op;
            vec![f.value(end.coord(), thetas)]
        }
        (Condition::Robin { s }, BoundaryId::Outer { side, end }) => {
            let (op, f) = side_pair(side, phi, op_plus, op_minus);
            let dn = eval_normal_deriv(op, f, end, thetas);
            vec![dn + s * f.value(end.coord(), thetas)]
        }
        (Condition::Transmittal { u }, BoundaryId::Interface { plus_end, minus_end }) => {
            let fm = phi.minus.as_ref().expect("transmittal needs both sides");
            let om = op_minus.expect("transmittal needs both side operators");
            let vp = phi.plus.value(plus_end.coord(), thetas);
            let vm = fm.value(minus_end.coord(), thetas);
            let dp = eval_normal_deriv(op_plus, &phi.plus, plus_end, thetas);
            let dm = eval_normal_deriv(om, fm, minus_end, thetas);
            vec![&vp - &vm, dp + dm - u * vp]
        }
        (Condition::Transmission { blocks }, BoundaryId::Interface { plus_end, minus_end }) => {
            let fm = phi.minus.as_ref().expect("transmission needs both sides");
            let om = op_minus.expect("transmission needs both side operators");
            let vp = phi.plus.value(plus_end.coord(), thetas);
            let vm = fm.value(minus_end.coord(), thetas);
            let dp = eval_normal_deriv(op_plus, &phi.plus, plus_end, thetas);
            let dm = eval_normal_deriv(om, fm, minus_end, thetas);
            vec![
                dp + &blocks.pp * &vp + &blocks.pm * &vm,
                dm + &blocks.mp * &vp + &blocks.mm * &vm,
            ]
        }
        _ => panic!("condition kind does not match its attachment point"),
    }
}

fn side_pair<'a, T: Scalar>(
    side: Side,
    phi: &'a SidedField<T>,
    op_plus: &'a LaplaceData<T>,
    op_minus: Option<&'a LaplaceData<T>>,
) -> (&'a LaplaceData<T>, &'a SideFn<T>) {
    match side {
        Side::Plus => (op_plus, &phi.plus),
        Side::Minus => (
            op_minus.expect("minus-side condition needs a minus-side operator"),
            phi.minus.as_ref().expect("two-sided field required"),
        ),
    }
}

/// Build the transmission condition modeling heat transfer between media of
/// conductivities `K_±` across a surface of conductivity `H`:
///
/// ```text
/// K₊ ∇_{ν+}φ₊ + K₋ ∇_{ν−}φ₋ = 0        (flux continuity)
/// K₊ ∇_{ν+}φ₊ = H (φ₊ − φ₋)            (linear surface transfer)
/// ```
///
/// In B₂ form this is `S₊₊ = −H/K₊, S₊₋ = H/K₊, S₋₊ = H/K₋, S₋₋ = −H/K₋`;
/// rows annihilate continuous constants, and substituting back recovers the
/// two physics equations exactly.
pub fn transmission_from_physics<T: Scalar>(
    k_plus: T,
    k_minus: T,
    h: T,
) -> Result<Condition<T>, OperatorError> {
    if k_plus <= T::zero() || k_minus <= T::zero() {
        return Err(OperatorError::NonpositiveConductivity);
    }
    Ok(Condition::Transmission {
        blocks: SBlocks::scalar(-h / k_plus, h / k_plus, h / k_minus, -h / k_minus),
    })
}

/// Boundary condition for the dual operator, chosen so the Green's-identity
/// boundary pairing vanishes: Robin transposes `S`, transmittal transposes
/// `U`, transmission transposes the diagonal blocks and transpose-swaps the
/// off-diagonal ones.
pub fn dual_condition<T: Scalar>(cond: &Condition<T>) -> Condition<T> {
    match cond {
        Condition::Dirichlet => Condition::Dirichlet,
        Condition::Robin { s } => Condition::Robin { s: s.transpose() },
        Condition::Transmittal { u } => Condition::Transmittal { u: u.transpose() },
        Condition::Transmission { blocks } => Condition::Transmission {
            blocks: SBlocks {
                pp: blocks.pp.transpose(),
                pm: blocks.mp.transpose(),
                mp: blocks.pm.transpose(),
                mm: blocks.mm.transpose(),
            },
        },
    }
}
