//! Verification laboratory for heat content asymptotics on warped-product
//! manifolds with transmittal and transmission interfaces.
//!
//! The small-time expansion of the heat content
//! `β(t) = ∫_M u(t)·ρ ~ Σ_n β_n t^{n/2}` is computed twice and the two
//! routes are compared:
//!
//! * **theory route** — closed-form coefficients `β₀..β₃` assembled from
//!   invariant traces of the geometry, the operator, and the boundary or
//!   interface condition, with the universal constants kept as exact
//!   rationals (times `π^{−1/2}` where one appears);
//! * **simulation route** — a conservative radial discretization of the heat
//!   flow, sampled on a grid of times and fitted against half-integer powers
//!   `t^{k/2}`.
//!
//! A separate relation suite pins every universal constant against the
//! functorial identities it must satisfy (doubling onto known one-sided
//! conditions, shifting the endomorphism, product splitting, divergence
//! insensitivity, warped reductions), so a perturbation of any single
//! constant is caught either by the suite or by a theory/simulation
//! mismatch.
//!
//! Core types are generic over the scalar via [`scalar::Scalar`]; the `f64`
//! instantiations used by the binary are re-exported at the crate root.

pub mod asymptotics;
pub mod coefficients;
pub mod geometry;
pub mod harness;
pub mod operator;
pub mod poly;
pub mod problem;
pub mod quad;
pub mod scalar;
pub mod solver;

pub use scalar::Scalar;

/// `f64` polynomial.
pub type Poly64 = poly::Poly<f64>;
/// `f64` matrix-valued polynomial.
pub type MatPoly64 = poly::MatPoly<f64>;
/// `f64` warped-product geometry.
pub type Geometry64 = geometry::WarpedGeometry<f64>;
/// `f64` Laplace-type operator in natural form.
pub type Laplace64 = operator::LaplaceData<f64>;
/// `f64` boundary/interface condition.
pub type Condition64 = operator::Condition<f64>;
