//! Universal constants of the short-time expansion, the exact relation
//! suite that pins them, and the closed-form coefficient evaluators.
//!
//! The module is split by responsibility:
//!
//! * [`constants`] — the published table as exact rationals (possibly over
//!   √π), plus perturbation helpers for mutation checks;
//! * [`relations`] — every identity the constants satisfy, verified in
//!   exact arithmetic;
//! * [`trace`] — the boundary/interface data the evaluators consume;
//! * [`eval`] — β₀…β₃ for Dirichlet/Robin boundaries, transmittal
//!   interfaces and transmission interfaces.

pub mod constants;
pub mod eval;
pub mod relations;
pub mod trace;

pub use constants::{Constants, UniversalConstant};
pub use eval::{
    beta_b1, beta_b1_published, beta_b2, beta_b2_published, beta_dr, interior_parts,
    CoefficientSet, InteriorParts,
};
pub use relations::{verify_constant_relations, RelationReport};
pub use trace::{DrKind, DrTrace, InterfaceTrace, SideTrace};
