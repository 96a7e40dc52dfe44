//! Time-stepping fallback for problems whose condition data is not
//! self-adjoint.
//!
//! The semi-discrete flow `M v̇ = −K v` is integrated by Crank–Nicolson
//! with a Rannacher start (the first step is replaced by two backward-Euler
//! half steps, which damps the spurious oscillation CN produces on rough
//! initial data). Each target time is integrated from `t = 0` with a fixed
//! number of substeps; the reported error estimate comes from comparing
//! against a run with half as many steps.

use super::assemble::BlockTriDiag;
use crate::scalar::{s, Scalar};
use nalgebra::{DMatrix, DVector};

/// LU factorization of a block-tridiagonal matrix by the block Thomas
/// algorithm. Stores `inv(D'_i)` and `L'_i = L_i·inv(D'_{i−1})`.
pub struct BlockThomasLu<T> {
    inv_diag: Vec<DMatrix<T>>,
    l_fact: Vec<DMatrix<T>>,
    upper: Vec<DMatrix<T>>,
    n: usize,
}

impl<T: Scalar> BlockThomasLu<T> {
    pub fn factor(a: &BlockTriDiag<T>) -> Option<Self> {
        let n = a.n;
        let nodes = a.nodes;
        let mut inv_diag = Vec::with_capacity(nodes);
        let mut l_fact = Vec::with_capacity(nodes.saturating_sub(1));
        let mut upper = Vec::with_capacity(nodes.saturating_sub(1));
        let mut d_prime = a.block(0, 0);
        for i in 0..nodes {
            let inv = d_prime.clone().try_inverse()?;
            inv_diag.push(inv);
            if i + 1 < nodes {
                let u = a.block(i, i + 1);
                let lp = a.block(i + 1, i) * &inv_diag[i];
                d_prime = a.block(i + 1, i + 1) - &lp * &u;
                l_fact.push(lp);
                upper.push(u);
            }
        }
        Some(BlockThomasLu {
            inv_diag,
            l_fact,
            upper,
            n,
        })
    }

    /// Solve `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut DVector<T>) {
        let n = self.n;
        let nodes = self.inv_diag.len();
        // forward elimination
        for i in 0..nodes - 1 {
            let prev = b.rows(i * n, n).clone_owned();
            let correction = &self.l_fact[i] * prev;
            let mut row = b.rows_mut((i + 1) * n, n);
            row -= correction;
        }
        // back substitution
        let last = (&self.inv_diag[nodes - 1] * b.rows((nodes - 1) * n, n)).clone_owned();
        b.rows_mut((nodes - 1) * n, n).copy_from(&last);
        for i in (0..nodes - 1).rev() {
            let next = b.rows((i + 1) * n, n).clone_owned();
            let rhs = b.rows(i * n, n) - &self.upper[i] * next;
            let x = &self.inv_diag[i] * rhs;
            b.rows_mut(i * n, n).copy_from(&x);
        }
    }
}

/// `M + c·K` with the diagonal node masses `m` (mass matrix `m ⊗ I_n`).
fn shifted_operator<T: Scalar>(k: &BlockTriDiag<T>, mass: &[T], c: T) -> BlockTriDiag<T> {
    let n = k.n;
    let nn = n * n;
    let mut out = k.clone();
    for v in out.diag.iter_mut() {
        *v *= c;
    }
    for v in out.lower.iter_mut() {
        *v *= c;
    }
    for v in out.upper.iter_mut() {
        *v *= c;
    }
    for (i, &m) in mass.iter().enumerate() {
        for r in 0..n {
            out.diag[i * nn + r * n + r] += m;
        }
    }
    out
}

/// Integrate `M v̇ = −K v` from `v(0) = v0` to time `t` with `steps`
/// Crank–Nicolson steps, Rannacher-smoothed.
pub fn crank_nicolson<T: Scalar>(
    k: &BlockTriDiag<T>,
    mass: &[T],
    v0: &DVector<T>,
    t: T,
    steps: usize,
) -> DVector<T> {
    assert!(steps >= 1);
    let n = k.n;
    let dt = t / s::<T>(steps as f64);
    let half = s::<T>(0.5);
    let gamma = dt * half;
    let plus = shifted_operator(k, mass, gamma);
    let lu = BlockThomasLu::factor(&plus).expect("heat operator shift must be invertible");

    let mut v = v0.clone();
    let mut work = vec![T::zero(); v.len()];

    // Rannacher start: two backward-Euler half steps use the same matrix
    // M + (dt/2)K as the CN steps, so one factorization serves throughout.
    for _ in 0..2 {
        for (i, &m) in mass.iter().enumerate() {
            for r in 0..n {
                work[i * n + r] = m * v[i * n + r];
            }
        }
        v.as_mut_slice().copy_from_slice(&work);
        lu.solve_in_place(&mut v);
    }
    // remaining CN steps: (M + γK) v' = (M − γK) v
    let mut kv = vec![T::zero(); v.len()];
    for _ in 1..steps {
        k.matvec_into(v.as_slice(), &mut kv);
        for (i, &m) in mass.iter().enumerate() {
            for r in 0..n {
                let idx = i * n + r;
                work[idx] = m * v[idx] - gamma * kv[idx];
            }
        }
        v.as_mut_slice().copy_from_slice(&work);
        lu.solve_in_place(&mut v);
    }
    v
}
