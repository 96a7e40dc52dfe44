//! Scalar abstraction for the numeric core.
//!
//! Everything that computes (geometry, operators, coefficient evaluation,
//! the solver) is generic over [`Scalar`], implemented for `f64` and `f32`.
//! The universal constants live elsewhere as exact rationals and are lowered
//! through [`Scalar::from_f64`] only at evaluation time.

/// Real scalar with the field/transcendental operations the lab needs.
pub trait Scalar: nalgebra::RealField + Copy {
    /// Lossy conversion from `f64` (identity for `f64`).
    fn from_f64(x: f64) -> Self;
    /// Widening conversion back to `f64`.
    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

/// Shorthand for lowering an `f64` literal into the working scalar.
pub fn s<T: Scalar>(x: f64) -> T {
    <T as Scalar>::from_f64(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        assert_eq!(<f64 as Scalar>::from_f64(1.5).to_f64(), 1.5);
        assert_eq!(<f32 as Scalar>::from_f64(1.5).to_f64(), 1.5);
        let x: f32 = s(0.25);
        assert_eq!(x, 0.25_f32);
    }
}
