//! Problem definitions and the theory pipeline: build boundary/interface
//! traces from a concrete geometry–operator–condition–field description and
//! feed them to the coefficient evaluators.
//!
//! Conventions. A two-sided problem glues `M₊` and `M₋` along the `r = 0`
//! ends of both sides; the `r = 1` ends carry ordinary Dirichlet or Robin
//! conditions. One-sided problems live on a single `[0, 1]` factor with a
//! condition at each end. Inward normals are always used, so at the
//! interface both sides differentiate with `+∂_r` and at the outer ends
//! with `−∂_r`.

use crate::coefficients::eval::{
    beta_b1, beta_b2, beta_dr, interior_parts, CoefficientSet, InteriorParts,
};
use crate::coefficients::trace::{DrKind, DrTrace, InterfaceTrace, SideTrace};
use crate::coefficients::Constants;
use crate::geometry::{boundary_geometry, check_glue_compatibility, End, Normal};
use crate::operator::{
    eval_d, eval_normal_deriv, eval_tangential_deriv, LaplaceData, SBlocks, SideFn,
};
use crate::quad::{theta_nodes, THETA_NODES};
use crate::scalar::{s, Scalar};
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("sides do not glue: {0}")]
    Incompatible(String),
    #[error("transmittal interfaces require equal fiber dimensions")]
    FiberMismatch,
    #[error("field dimension does not match operator fiber dimension")]
    FieldDimension,
}

/// One side of an interface problem: its operator and the condition at the
/// non-interface end.
#[derive(Clone, Debug)]
pub struct SideSpec<T> {
    pub op: LaplaceData<T>,
    pub outer: DrKind<T>,
}

/// The coupling imposed on the shared boundary.
#[derive(Clone, Debug)]
pub enum InterfaceKind<T> {
    /// Identified fibers: continuity plus a flux jump governed by `U`.
    Transmittal { u: DMatrix<T> },
    /// Independent fibers coupled through the block matrix `S`.
    Transmission { blocks: SBlocks<T> },
}

/// A glued two-sided problem.
#[derive(Clone, Debug)]
pub struct InterfaceProblem<T> {
    pub plus: SideSpec<T>,
    pub minus: SideSpec<T>,
    pub interface: InterfaceKind<T>,
    pub phi_plus: SideFn<T>,
    pub phi_minus: SideFn<T>,
    pub rho_plus: SideFn<T>,
    pub rho_minus: SideFn<T>,
}

/// A problem on a single `[0, 1]` factor.
#[derive(Clone, Debug)]
pub struct OneSidedProblem<T> {
    pub op: LaplaceData<T>,
    pub at_r0: DrKind<T>,
    pub at_r1: DrKind<T>,
    pub phi: SideFn<T>,
    pub rho: SideFn<T>,
}

/// Iterate the angular product grid; for `d = 0` yields one empty node of
/// weight one.
fn theta_grid<T: Scalar>(d: usize) -> Vec<(Vec<T>, T)> {
    let nodes = theta_nodes::<T>(THETA_NODES);
    let mut out = vec![(Vec::new(), T::one())];
    for _ in 0..d {
        let mut next = Vec::with_capacity(out.len() * nodes.len());
        for (thetas, w) in &out {
            for &(th, wa) in &nodes {
                let mut t = thetas.clone();
                t.push(th);
                next.push((t, *w * wa));
            }
        }
        out = next;
    }
    out
}

/// All trace data of `(φ, ρ)` on one side at a boundary point.
fn side_trace<T: Scalar>(
    op: &LaplaceData<T>,
    dual: &LaplaceData<T>,
    phi: &SideFn<T>,
    rho: &SideFn<T>,
    end: End,
    thetas: &[T],
) -> SideTrace<T> {
    let r = end.coord::<T>();
    let d = op.geom.d();
    SideTrace {
        phi: phi.value(r, thetas),
        rho: rho.value(r, thetas),
        d_phi: eval_d(op, phi, r, thetas),
        dt_rho: eval_d(dual, rho, r, thetas),
        dnu_phi: eval_normal_deriv(op, phi, end, thetas),
        dnu_rho: eval_normal_deriv(dual, rho, end, thetas),
        dtan_phi: (0..d)
            .map(|a| eval_tangential_deriv(op, phi, r, thetas, a))
            .collect(),
        dtan_rho: (0..d)
            .map(|a| eval_tangential_deriv(dual, rho, r, thetas, a))
            .collect(),
        e: op.e.eval(r),
        geom: boundary_geometry(&op.geom, end, Normal::Inward),
    }
}

impl<T: Scalar> InterfaceProblem<T> {
    pub fn validate(&self) -> Result<(), ProblemError> {
        check_glue_compatibility(&self.plus.op.geom, &self.minus.op.geom, End::R0, End::R0)
            .map_err(|e| ProblemError::Incompatible(e.to_string()))?;
        if let InterfaceKind::Transmittal { .. } = self.interface {
            if self.plus.op.fiber_dim != self.minus.op.fiber_dim {
                return Err(ProblemError::FiberMismatch);
            }
        }
        for (f, op) in [
            (&self.phi_plus, &self.plus.op),
            (&self.rho_plus, &self.plus.op),
            (&self.phi_minus, &self.minus.op),
            (&self.rho_minus, &self.minus.op),
        ] {
            if f.fiber_dim() != op.fiber_dim {
                return Err(ProblemError::FieldDimension);
            }
        }
        Ok(())
    }

    /// Traces at the interface quadrature points.
    pub fn interface_traces(&self) -> Vec<InterfaceTrace<T>> {
        let dual_p = self.plus.op.dual();
        let dual_m = self.minus.op.dual();
        let d = self.plus.op.geom.d();
        let r0 = End::R0.coord::<T>();
        // boundary volume density e^{F(0)}; equal on both sides by glue
        // compatibility
        let density = self.plus.op.geom.total_warp().eval(r0).exp();
        theta_grid::<T>(d)
            .into_iter()
            .map(|(thetas, w)| {
                let plus = side_trace(
                    &self.plus.op,
                    &dual_p,
                    &self.phi_plus,
                    &self.rho_plus,
                    End::R0,
                    &thetas,
                );
                let minus = side_trace(
                    &self.minus.op,
                    &dual_m,
                    &self.phi_minus,
                    &self.rho_minus,
                    End::R0,
                    &thetas,
                );
                // chiral tensor in the orthonormal frame: the difference of
                // the tangential connection components
                let omega = (0..d)
                    .map(|a| {
                        let frame_p = (-self.plus.op.geom.warpings[a].eval(r0)).exp();
                        let frame_m = (-self.minus.op.geom.warpings[a].eval(r0)).exp();
                        &self.plus.op.omega_theta[a] * frame_p
                            - &self.minus.op.omega_theta[a] * frame_m
                    })
                    .collect();
                let (u, s_blocks) = match &self.interface {
                    InterfaceKind::Transmittal { u } => (Some(u.clone()), None),
                    InterfaceKind::Transmission { blocks } => (None, Some(blocks.clone())),
                };
                InterfaceTrace {
                    plus,
                    minus,
                    omega,
                    u,
                    s_blocks,
                    weight: w * density,
                }
            })
            .collect()
    }

    /// Traces at the two outer boundaries.
    pub fn outer_traces(&self) -> Vec<DrTrace<T>> {
        let mut out = Vec::new();
        for (spec, phi, rho) in [
            (&self.plus, &self.phi_plus, &self.rho_plus),
            (&self.minus, &self.phi_minus, &self.rho_minus),
        ] {
            let dual = spec.op.dual();
            let density = spec.op.geom.total_warp().eval(End::R1.coord::<T>()).exp();
            for (thetas, w) in theta_grid::<T>(spec.op.geom.d()) {
                out.push(DrTrace {
                    side: side_trace(&spec.op, &dual, phi, rho, End::R1, &thetas),
                    kind: spec.outer.clone(),
                    weight: w * density,
                });
            }
        }
        out
    }

    /// Full closed-form coefficient set: interior parts of both sides,
    /// interface contribution, outer-boundary contribution.
    pub fn theory_with(&self, consts: &Constants) -> CoefficientSet<T> {
        let interior = interior_parts(&self.phi_plus, &self.rho_plus, &self.plus.op).sum(
            interior_parts(&self.phi_minus, &self.rho_minus, &self.minus.op),
        );
        let interface = match &self.interface {
            InterfaceKind::Transmittal { .. } => {
                beta_b1(interior, &self.interface_traces(), consts)
            }
            InterfaceKind::Transmission { .. } => {
                beta_b2(interior, &self.interface_traces(), consts)
            }
        };
        let outer = beta_dr(InteriorParts::zero(), &self.outer_traces());
        interface.merge(&outer)
    }

    pub fn theory(&self) -> CoefficientSet<T> {
        self.theory_with(&Constants::published())
    }

    /// Shift both endomorphisms by `ε·Id` (the interior operators change;
    /// conditions do not).
    pub fn shifted(&self, eps: T) -> Self {
        let mut out = self.clone();
        out.plus.op = out.plus.op.shift_e(eps);
        out.minus.op = out.minus.op.shift_e(eps);
        out
    }

    /// Swap φ with ρ and replace every operator and condition by its dual.
    pub fn adjoint(&self) -> Self {
        InterfaceProblem {
            plus: SideSpec {
                op: self.plus.op.dual(),
                outer: dual_dr(&self.plus.outer),
            },
            minus: SideSpec {
                op: self.minus.op.dual(),
                outer: dual_dr(&self.minus.outer),
            },
            interface: match &self.interface {
                InterfaceKind::Transmittal { u } => InterfaceKind::Transmittal { u: u.transpose() },
                InterfaceKind::Transmission { blocks } => InterfaceKind::Transmission {
                    blocks: SBlocks {
                        pp: blocks.pp.transpose(),
                        pm: blocks.mp.transpose(),
                        mp: blocks.pm.transpose(),
                        mm: blocks.mm.transpose(),
                    },
                },
            },
            phi_plus: self.rho_plus.clone(),
            phi_minus: self.rho_minus.clone(),
            rho_plus: self.phi_plus.clone(),
            rho_minus: self.phi_minus.clone(),
        }
    }
}

fn dual_dr<T: Scalar>(kind: &DrKind<T>) -> DrKind<T> {
    match kind {
        DrKind::Dirichlet => DrKind::Dirichlet,
        DrKind::Robin { s } => DrKind::Robin { s: s.transpose() },
    }
}

impl<T: Scalar> OneSidedProblem<T> {
    pub fn traces(&self) -> Vec<DrTrace<T>> {
        let dual = self.op.dual();
        let mut out = Vec::new();
        for (end, kind) in [(End::R0, &self.at_r0), (End::R1, &self.at_r1)] {
            let density = self.op.geom.total_warp().eval(end.coord::<T>()).exp();
            for (thetas, w) in theta_grid::<T>(self.op.geom.d()) {
                out.push(DrTrace {
                    side: side_trace(&self.op, &dual, &self.phi, &self.rho, end, &thetas),
                    kind: kind.clone(),
                    weight: w * density,
                });
            }
        }
        out
    }

    pub fn theory(&self) -> CoefficientSet<T> {
        let interior = interior_parts(&self.phi, &self.rho, &self.op);
        beta_dr(interior, &self.traces())
    }

    pub fn shifted(&self, eps: T) -> Self {
        let mut out = self.clone();
        out.op = out.op.shift_e(eps);
        out
    }

    pub fn adjoint(&self) -> Self {
        OneSidedProblem {
            op: self.op.dual(),
            at_r0: dual_dr(&self.at_r0),
            at_r1: dual_dr(&self.at_r1),
            phi: self.rho.clone(),
            rho: self.phi.clone(),
        }
    }
}

/// Central finite-difference derivative of a coefficient with respect to the
/// ε-shift of the endomorphism.
pub fn epsilon_derivative<T: Scalar, F>(theory_at: F, order: usize) -> T
where
    F: Fn(T) -> CoefficientSet<T>,
{
    let h: T = s(1e-5);
    let plus = theory_at(h);
    let minus = theory_at(-h);
    (plus.beta[order] - minus.beta[order]) / (s::<T>(2.0) * h)
}
