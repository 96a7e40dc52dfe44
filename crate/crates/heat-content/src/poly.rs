//! Polynomial building blocks.
//!
//! Radial profiles (warping functions, field components, connection/potential
//! entries) are polynomials in the radial coordinate `r`, so derivatives and
//! antiderivatives are exact. Field components additionally allow an
//! exponential-of-polynomial factor `p(r)·e^{q(r)}`, which is closed under
//! differentiation and is exactly what the warped-reduction identity needs
//! (it maps ρ to e^{f}ρ).

use crate::scalar::{s, Scalar};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

// ──────────────────────────────────────────────────────────────────────────
// Scalar polynomials
// ──────────────────────────────────────────────────────────────────────────

/// Polynomial in one variable, coefficients in ascending powers.
///
/// The zero polynomial is represented by an empty coefficient vector (or any
/// all-zero vector; trailing zeros are harmless and never trimmed eagerly).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly<T> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly { coeffs: vec![c] }
    }

    /// Convenience constructor from f64 literals.
    pub fn from_f64s(coeffs: &[f64]) -> Self {
        Poly {
            coeffs: coeffs.iter().map(|&c| s(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, r: T) -> T {
        let mut acc = T::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * r + c;
        }
        acc
    }

    /// First derivative.
    pub fn deriv(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * s(k as f64))
            .collect();
        Poly { coeffs }
    }

    /// Antiderivative with value 0 at r = 0.
    pub fn antideriv(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / s((k + 1) as f64));
        }
        Poly { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![T::zero(); n];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, &c) in other.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        Poly { coeffs }
    }

    pub fn scale(&self, s: T) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }
}

// ──────────────────────────────────────────────────────────────────────────
// p(r)·e^{q(r)} profiles
// ──────────────────────────────────────────────────────────────────────────

/// Radial profile of the form `p(r)·exp(q(r))`.
///
/// Closed under differentiation: `(p e^q)' = (p' + p q') e^q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpPoly<T> {
    pub poly: Poly<T>,
    pub exponent: Poly<T>,
}

impl<T: Scalar> ExpPoly<T> {
    pub fn from_poly(poly: Poly<T>) -> Self {
        ExpPoly {
            poly,
            exponent: Poly::zero(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, r: T) -> T {
        if self.exponent.is_zero() {
            self.poly.eval(r)
        } else {
            self.poly.eval(r) * self.exponent.eval(r).exp()
        }
    }

    pub fn deriv(&self) -> Self {
        ExpPoly {
            poly: self.poly.deriv().add(&self.poly.mul(&self.exponent.deriv())),
            exponent: self.exponent.clone(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        ExpPoly {
            poly: self.poly.scale(s),
            exponent: self.exponent.clone(),
        }
    }

    /// Multiply by `e^{g(r)}`.
    pub fn mul_exp(&self, g: &Poly<T>) -> Self {
        ExpPoly {
            poly: self.poly.clone(),
            exponent: self.exponent.add(g),
        }
    }
}

// ──────────────────────────────────────────────────────────────────────────
// Matrix-valued polynomials
// ──────────────────────────────────────────────────────────────────────────

/// Square-matrix-valued polynomial `Σ_k M_k r^k`; used for connection 1-form
/// components and endomorphisms on rank-n bundles.
#[derive(Clone, Debug, PartialEq)]
pub struct MatPoly<T> {
    pub dim: usize,
    pub coeffs: Vec<DMatrix<T>>,
}

impl<T: Scalar> MatPoly<T> {
    pub fn zero(dim: usize) -> Self {
        MatPoly {
            dim,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(m: DMatrix<T>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "MatPoly entries must be square");
        MatPoly {
            dim: m.nrows(),
            coeffs: vec![m],
        }
    }

    /// c·I as a constant matrix polynomial.
    pub fn scalar(dim: usize, c: T) -> Self {
        Self::constant(DMatrix::identity(dim, dim).scale(c))
    }

    /// p(r)·I.
    pub fn scalar_poly(dim: usize, p: &Poly<T>) -> Self {
        let coeffs = p
            .coeffs
            .iter()
            .map(|&c| DMatrix::identity(dim, dim).scale(c))
            .collect();
        MatPoly { dim, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|m| m.iter().all(|c| c.is_zero()))
    }

    pub fn eval(&self, r: T) -> DMatrix<T> {
        let mut acc = DMatrix::zeros(self.dim, self.dim);
        for m in self.coeffs.iter().rev() {
            acc = acc.scale(r) + m;
        }
        acc
    }

    pub fn deriv(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return MatPoly::zero(self.dim);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, m)| m.scale(s(k as f64)))
            .collect();
        MatPoly {
            dim: self.dim,
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![DMatrix::zeros(self.dim, self.dim); n];
        for (k, m) in self.coeffs.iter().enumerate() {
            coeffs[k] += m;
        }
        for (k, m) in other.coeffs.iter().enumerate() {
            coeffs[k] += m;
        }
        MatPoly {
            dim: self.dim,
            coeffs,
        }
    }

    pub fn scale(&self, s: T) -> Self {
        MatPoly {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|m| m.scale(s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return MatPoly::zero(self.dim);
        }
        let mut coeffs =
            vec![DMatrix::zeros(self.dim, self.dim); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        MatPoly {
            dim: self.dim,
            coeffs,
        }
    }

    /// Multiply by a scalar polynomial.
    pub fn mul_poly(&self, p: &Poly<T>) -> Self {
        self.mul(&MatPoly::scalar_poly(self.dim, p))
    }

    pub fn transpose(&self) -> Self {
        MatPoly {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|m| m.transpose()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    /// Split into `s(r)·I + R(r)` with `s = trace/dim`; returns `(s, R)`.
    ///
    /// When the remainder `R` is antisymmetric the operator admits the
    /// explicit symmetrizing weight used by the spectral solver route.
    pub fn split_scalar_part(&self) -> (Poly<T>, MatPoly<T>) {
        let n = s(self.dim as f64);
        let s = Poly {
            coeffs: self.coeffs.iter().map(|m| m.trace() / n).collect(),
        };
        let rest = self.add(&MatPoly::scalar_poly(self.dim, &s).neg());
        (s, rest)
    }

    /// Max absolute entry over all coefficient matrices.
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for c in &self.coeffs {
            for &x in c.iter() {
                if x.abs() > m {
                    m = x.abs();
                }
            }
        }
        m
    }

    /// True when every coefficient matrix is antisymmetric (within `tol`).
    pub fn is_antisymmetric(&self, tol: T) -> bool {
        self.coeffs
            .iter()
            .all(|m| (m + m.transpose()).amax() <= tol)
    }

    /// True when every coefficient matrix is symmetric (within `tol`).
    pub fn is_symmetric(&self, tol: T) -> bool {
        self.coeffs
            .iter()
            .all(|m| (m - m.transpose()).amax() <= tol)
    }
}
