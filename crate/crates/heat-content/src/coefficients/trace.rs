//! Trace data consumed by the closed-form coefficient evaluators.
//!
//! A trace packages everything the β-formulas read at one quadrature point
//! of a boundary or interface: field values, interior-operator values,
//! covariant normal and tangential derivatives, the endomorphism, the
//! induced boundary geometry, and condition data. Evaluators never see the
//! geometry or operator modules directly — the split keeps theorem
//! transcription testable on hand-built traces.

use crate::geometry::{BoundaryGeometry, End};
use crate::operator::SBlocks;
use crate::scalar::Scalar;
use nalgebra::{DMatrix, DVector};

/// Per-side slice of an interface (or one-sided boundary) trace.
#[derive(Clone, Debug, PartialEq)]
pub struct SideTrace<T> {
    pub phi: DVector<T>,
    pub rho: DVector<T>,
    /// `Dφ` traced to the point.
    pub d_phi: DVector<T>,
    /// `D̃ρ` traced to the point.
    pub dt_rho: DVector<T>,
    /// Covariant inward-normal derivative `∇_ν φ`.
    pub dnu_phi: DVector<T>,
    /// Covariant inward-normal derivative `∇̃_ν ρ` (dual connection).
    pub dnu_rho: DVector<T>,
    /// Covariant tangential derivatives `φ_{:a}` per direction.
    pub dtan_phi: Vec<DVector<T>>,
    pub dtan_rho: Vec<DVector<T>>,
    /// Endomorphism `E` at the point.
    pub e: DMatrix<T>,
    pub geom: BoundaryGeometry<T>,
}

impl<T: Scalar> SideTrace<T> {
    /// Trace of a constant scalar field pair on a flat boundary point —
    /// the minimal building block for hand-built tests.
    pub fn flat_constant(phi: T, rho: T, d: usize) -> Self {
        let mut geom = BoundaryGeometry::flat(End::R0);
        geom.l_diag = vec![T::zero(); d];
        SideTrace {
            phi: DVector::from_element(1, phi),
            rho: DVector::from_element(1, rho),
            d_phi: DVector::zeros(1),
            dt_rho: DVector::zeros(1),
            dnu_phi: DVector::zeros(1),
            dnu_rho: DVector::zeros(1),
            dtan_phi: vec![DVector::zeros(1); d],
            dtan_rho: vec![DVector::zeros(1); d],
            e: DMatrix::zeros(1, 1),
            geom,
        }
    }

    /// Swap the roles of φ and ρ and dualize the operator data (`E → Eᵀ`).
    pub fn adjoint(&self) -> Self {
        SideTrace {
            phi: self.rho.clone(),
            rho: self.phi.clone(),
            d_phi: self.dt_rho.clone(),
            dt_rho: self.d_phi.clone(),
            dnu_phi: self.dnu_rho.clone(),
            dnu_rho: self.dnu_phi.clone(),
            dtan_phi: self.dtan_rho.clone(),
            dtan_rho: self.dtan_phi.clone(),
            e: self.e.transpose(),
            geom: self.geom.clone(),
        }
    }
}

/// Complete trace at one interface quadrature point.
#[derive(Clone, Debug, PartialEq)]
pub struct InterfaceTrace<T> {
    pub plus: SideTrace<T>,
    pub minus: SideTrace<T>,
    /// Chiral tensor `ω_a = ∇_a⁺ − ∇_a⁻` per tangential direction.
    pub omega: Vec<DMatrix<T>>,
    /// Transmittal coupling `U` (identified fibers), if any.
    pub u: Option<DMatrix<T>>,
    /// Transmission blocks, if any.
    pub s_blocks: Option<SBlocks<T>>,
    /// Measure factor for `∫_Σ` at this point.
    pub weight: T,
}

impl<T: Scalar> InterfaceTrace<T> {
    /// Interchange the ± roles. The chiral tensor changes sign; every
    /// published integrand is a symmetrized pair, so the β values must not
    /// change.
    pub fn chiral_swap(&self) -> Self {
        InterfaceTrace {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
            omega: self.omega.iter().map(|m| -m).collect(),
            u: self.u.clone(),
            s_blocks: self.s_blocks.as_ref().map(|b| SBlocks {
                pp: b.mm.clone(),
                pm: b.mp.clone(),
                mp: b.pm.clone(),
                mm: b.pp.clone(),
            }),
            weight: self.weight,
        }
    }

    /// Swap φ↔ρ and dualize: `ω → −ωᵀ`, `U → Uᵀ`, transmission blocks
    /// transpose-and-swap.
    pub fn adjoint(&self) -> Self {
        InterfaceTrace {
            plus: self.plus.adjoint(),
            minus: self.minus.adjoint(),
            omega: self.omega.iter().map(|m| -m.transpose()).collect(),
            u: self.u.as_ref().map(|u| u.transpose()),
            s_blocks: self.s_blocks.as_ref().map(|b| SBlocks {
                pp: b.pp.transpose(),
                pm: b.mp.transpose(),
                mp: b.pm.transpose(),
                mm: b.mm.transpose(),
            }),
            weight: self.weight,
        }
    }
}

/// Condition label for a one-sided boundary trace.
#[derive(Clone, Debug, PartialEq)]
pub enum DrKind<T> {
    Dirichlet,
    Robin { s: DMatrix<T> },
}

/// Trace at one quadrature point of a Dirichlet/Robin boundary component.
#[derive(Clone, Debug, PartialEq)]
pub struct DrTrace<T> {
    pub side: SideTrace<T>,
    pub kind: DrKind<T>,
    pub weight: T,
}

impl<T: Scalar> DrTrace<T> {
    /// φ↔ρ swap with Robin matrix transposed.
    pub fn adjoint(&self) -> Self {
        DrTrace {
            side: self.side.adjoint(),
            kind: match &self.kind {
                DrKind::Dirichlet => DrKind::Dirichlet,
                DrKind::Robin { s } => DrKind::Robin { s: s.transpose() },
            },
            weight: self.weight,
        }
    }
}
