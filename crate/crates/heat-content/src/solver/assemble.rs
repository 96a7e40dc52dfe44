//! Spatial discretization: node layout, block-tridiagonal matrices, and
//! assembly of the weak form of `D` with its condition terms.
//!
//! Each side is discretized on the uniform grid `r_j = j·h`, `h = 1/N`.
//! Global node ordering runs from the outer end of the plus side down to the
//! interface and then out along the minus side, so every coupling — cells,
//! interface blocks, outer conditions — touches only adjacent nodes and the
//! assembled operator is block tridiagonal.
//!
//! The weak form against a test field `z` with the radial volume weight
//! `w = e^F` reads
//!
//! ```text
//! ⟨Du, z⟩_w = ∫ w ∇̃z·∇u − ∫ w z·Eu + ∫ w z·Qu + Σ_p w_p z(p)·∇_ν u(p)
//! ```
//!
//! with `∇u = u' + ωu`, `∇̃z = z' − ωᵀz`, and `Q` the angular potential of
//! the active Fourier mode. Condition data replaces the flux term: Robin
//! ends subtract `w_p S`, a shared transmittal node adds `w_p U`, duplicated
//! transmission nodes subtract the `S`-blocks.

use crate::geometry::End;
use crate::operator::{LaplaceData, Mode, Side};
use crate::poly::{MatPoly, Poly};
use crate::scalar::{s, Scalar};
use nalgebra::DMatrix;

/// How the one or two sides map onto the global node chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LayoutKind {
    /// Single side, nodes `0..=N` in ascending `r`.
    OneSided,
    /// Two sides sharing the interface node (transmittal).
    SharedInterface,
    /// Two sides with duplicated interface nodes (transmission).
    SplitInterface,
}

#[derive(Clone, Copy, Debug)]
pub struct Layout {
    pub n_cells: usize,
    pub fiber_dim: usize,
    pub kind: LayoutKind,
}

impl Layout {
    pub fn node_count(&self) -> usize {
        match self.kind {
            LayoutKind::OneSided => self.n_cells + 1,
            LayoutKind::SharedInterface => 2 * self.n_cells + 1,
            LayoutKind::SplitInterface => 2 * self.n_cells + 2,
        }
    }

    /// Global node of side-local grid index `j` (ascending `r`).
    pub fn global(&self, side: Side, j: usize) -> usize {
        let n = self.n_cells;
        match (self.kind, side) {
            (LayoutKind::OneSided, _) => j,
            (LayoutKind::SharedInterface, Side::Plus) => n - j,
            (LayoutKind::SharedInterface, Side::Minus) => n + j,
            (LayoutKind::SplitInterface, Side::Plus) => n - j,
            (LayoutKind::SplitInterface, Side::Minus) => n + 1 + j,
        }
    }
}

/// Block-tridiagonal matrix with `n × n` blocks in flat storage.
#[derive(Clone, Debug)]
pub struct BlockTriDiag<T> {
    pub nodes: usize,
    pub n: usize,
    /// `nodes` diagonal blocks, block-major.
    pub diag: Vec<T>,
    /// `nodes − 1` sub-diagonal blocks; block `i` couples node `i+1` to `i`.
    pub lower: Vec<T>,
    /// `nodes − 1` super-diagonal blocks; block `i` couples node `i` to `i+1`.
    pub upper: Vec<T>,
}

impl<T: Scalar> BlockTriDiag<T> {
    pub fn zeros(nodes: usize, n: usize) -> Self {
        let nn = n * n;
        BlockTriDiag {
            nodes,
            n,
            diag: vec![T::zero(); nodes * nn],
            lower: vec![T::zero(); nodes.saturating_sub(1) * nn],
            upper: vec![T::zero(); nodes.saturating_sub(1) * nn],
        }
    }

    pub fn dim(&self) -> usize {
        self.nodes * self.n
    }

    fn slot(&mut self, i: usize, j: usize) -> &mut [T] {
        let nn = self.n * self.n;
        if i == j {
            &mut self.diag[i * nn..(i + 1) * nn]
        } else if j == i + 1 {
            &mut self.upper[i * nn..(i + 1) * nn]
        } else if i == j + 1 {
            &mut self.lower[j * nn..(j + 1) * nn]
        } else {
            panic!("block ({i}, {j}) outside the tridiagonal band");
        }
    }

    /// Accumulate an `n × n` block at block position `(i, j)`, `|i−j| ≤ 1`.
    pub fn add_block(&mut self, i: usize, j: usize, m: &DMatrix<T>) {
        let n = self.n;
        let slot = self.slot(i, j);
        for r in 0..n {
            for c in 0..n {
                slot[r * n + c] += m[(r, c)];
            }
        }
    }

    pub fn block(&self, i: usize, j: usize) -> DMatrix<T> {
        let n = self.n;
        let nn = n * n;
        let slot = if i == j {
            &self.diag[i * nn..(i + 1) * nn]
        } else if j == i + 1 {
            &self.upper[i * nn..(i + 1) * nn]
        } else if i == j + 1 {
            &self.lower[j * nn..(j + 1) * nn]
        } else {
            panic!("block ({i}, {j}) outside the tridiagonal band");
        };
        DMatrix::from_fn(n, n, |r, c| slot[r * n + c])
    }

    /// `y = A x` without allocation.
    pub fn matvec_into(&self, x: &[T], y: &mut [T]) {
        let n = self.n;
        let nn = n * n;
        for i in 0..self.nodes {
            for r in 0..n {
                let mut acc = T::zero();
                for c in 0..n {
                    acc += self.diag[i * nn + r * n + c] * x[i * n + c];
                }
                if i > 0 {
                    for c in 0..n {
                        acc += self.lower[(i - 1) * nn + r * n + c] * x[(i - 1) * n + c];
                    }
                }
                if i + 1 < self.nodes {
                    for c in 0..n {
                        acc += self.upper[i * nn + r * n + c] * x[(i + 1) * n + c];
                    }
                }
                y[i * n + r] = acc;
            }
        }
    }

    /// Largest deviation from symmetry, `max |A_ij − A_jiᵀ|`.
    pub fn symmetry_defect(&self) -> T {
        let n = self.n;
        let nn = n * n;
        let mut worst = T::zero();
        for i in 0..self.nodes {
            for r in 0..n {
                for c in 0..n {
                    let d = self.diag[i * nn + r * n + c] - self.diag[i * nn + c * n + r];
                    worst = worst.max(d.abs());
                }
            }
        }
        for b in 0..self.nodes.saturating_sub(1) {
            for r in 0..n {
                for c in 0..n {
                    let d = self.upper[b * nn + r * n + c] - self.lower[b * nn + c * n + r];
                    worst = worst.max(d.abs());
                }
            }
        }
        worst
    }

    /// Congruence by a per-node scalar diagonal: `A ← D A D` with
    /// `D = diag(d_i) ⊗ I_n`.
    pub fn scale_nodes(&mut self, d: &[T]) {
        let n = self.n;
        let nn = n * n;
        for i in 0..self.nodes {
            for e in self.diag[i * nn..(i + 1) * nn].iter_mut() {
                *e *= d[i] * d[i];
            }
        }
        for b in 0..self.nodes.saturating_sub(1) {
            let f = d[b] * d[b + 1];
            for e in self.upper[b * nn..(b + 1) * nn].iter_mut() {
                *e *= f;
            }
            for e in self.lower[b * nn..(b + 1) * nn].iter_mut() {
                *e *= f;
            }
        }
    }

    /// Drop the first and/or last block row and column (Dirichlet ends).
    pub fn trim(&self, cut_lo: bool, cut_hi: bool) -> Self {
        let nn = self.n * self.n;
        let lo = usize::from(cut_lo);
        let hi = self.nodes - usize::from(cut_hi);
        BlockTriDiag {
            nodes: hi - lo,
            n: self.n,
            diag: self.diag[lo * nn..hi * nn].to_vec(),
            lower: self.lower[lo * nn..(hi - 1) * nn].to_vec(),
            upper: self.upper[lo * nn..(hi - 1) * nn].to_vec(),
        }
    }

    /// Gershgorin bounds on the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.n;
        let nn = n * n;
        let mut lo = T::zero();
        let mut hi = T::zero();
        let mut first = true;
        for i in 0..self.nodes {
            for r in 0..n {
                let center = self.diag[i * nn + r * n + r];
                let mut radius = T::zero();
                for c in 0..n {
                    if c != r {
                        radius += self.diag[i * nn + r * n + c].abs();
                    }
                    if i > 0 {
                        radius += self.lower[(i - 1) * nn + r * n + c].abs();
                    }
                    if i + 1 < self.nodes {
                        radius += self.upper[i * nn + r * n + c].abs();
                    }
                }
                if first {
                    lo = center - radius;
                    hi = center + radius;
                    first = false;
                } else {
                    lo = lo.min(center - radius);
                    hi = hi.max(center + radius);
                }
            }
        }
        (lo, hi)
    }
}

/// The scalar part of the connection and its traceless remainder:
/// `ω_r = s·I + A`.
pub fn gauge_split<T: Scalar>(omega_r: &MatPoly<T>) -> (Poly<T>, MatPoly<T>) {
    let n = omega_r.dim;
    let inv_n: T = s(1.0 / n as f64);
    let tr = Poly {
        coeffs: omega_r
            .coeffs
            .iter()
            .map(|m| m.trace() * inv_n)
            .collect(),
    };
    let mut rest = omega_r.clone();
    for (k, m) in rest.coeffs.iter_mut().enumerate() {
        let c = tr.coeffs.get(k).copied().unwrap_or_else(T::zero);
        for i in 0..n {
            m[(i, i)] -= c;
        }
    }
    (tr, rest)
}

pub fn matrix_is_antisymmetric<T: Scalar>(m: &DMatrix<T>, tol: T) -> bool {
    let sum = m + m.transpose();
    sum.iter().all(|&e| e.abs() <= tol)
}

pub fn matrix_is_symmetric<T: Scalar>(m: &DMatrix<T>, tol: T) -> bool {
    let diff = m - m.transpose();
    diff.iter().all(|&e| e.abs() <= tol)
}

pub fn matpoly_is_antisymmetric<T: Scalar>(mp: &MatPoly<T>, tol: T) -> bool {
    mp.coeffs.iter().all(|m| matrix_is_antisymmetric(m, tol))
}

pub fn matpoly_is_symmetric<T: Scalar>(mp: &MatPoly<T>, tol: T) -> bool {
    mp.coeffs.iter().all(|m| matrix_is_symmetric(m, tol))
}

/// Angular potential of the active mode in the orthonormal frame:
/// `Q(r) = Σ_a k_a² e^{−2f_a} I − Σ_a e^{−2f_a} ω_θ[a]²` (for any direction
/// at most one of the two terms is nonzero; that is validated upstream).
pub fn angular_potential<T: Scalar>(op: &LaplaceData<T>, modes: &[Mode], r: T) -> DMatrix<T> {
    let n = op.fiber_dim;
    let mut q = DMatrix::zeros(n, n);
    for (a, f) in op.geom.warpings.iter().enumerate() {
        let scale = (-(f.eval(r) + f.eval(r))).exp();
        let k = modes.get(a).map_or(0, |m| m.k);
        if k > 0 {
            let kk: T = s((k * k) as f64);
            for i in 0..n {
                q[(i, i)] += kk * scale;
            }
        } else {
            let ot = &op.omega_theta[a];
            q -= (ot * ot).scale(scale);
        }
    }
    q
}

/// One side's contribution: interior cells, node masses, and the potential
/// `−E + Q` lumped at the nodes. `omega` is the connection actually used
/// (full `ω_r`, or its traceless part under the spectral gauge).
///
/// The potential blocks are also accumulated into `soft`. The cell part of
/// the form is positive semidefinite, so a Gershgorin bound on the
/// mass-scaled `soft` matrix is a valid — and far tighter — lower bound on
/// the spectrum than a bound on the full operator, whose `O(1/h²)` cell
/// rows would push it far below zero.
#[allow(clippy::too_many_arguments)]
pub fn assemble_side<T: Scalar>(
    k: &mut BlockTriDiag<T>,
    soft: &mut BlockTriDiag<T>,
    mass: &mut [T],
    layout: &Layout,
    side: Side,
    op: &LaplaceData<T>,
    omega: &MatPoly<T>,
    modes: &[Mode],
) {
    let n = op.fiber_dim;
    let nc = layout.n_cells;
    let h: T = s(1.0 / nc as f64);
    let half: T = s(0.5);
    let quarter: T = s(0.25);
    let f = op.geom.total_warp();
    let eye = DMatrix::<T>::identity(n, n);

    for j in 0..nc {
        let mid = (s::<T>(j as f64) + half) * h;
        let w = f.eval(mid).exp();
        let wm = w * h;
        let omega_mid = omega.eval(mid);
        let w2 = &omega_mid * &omega_mid;
        let inv_h = T::one() / h;
        // exact products of the cell difference operators
        let d_block = (&eye * (inv_h * inv_h) - &w2 * quarter).scale(wm);
        let off = (&eye * (inv_h * inv_h) + &w2 * quarter).scale(wm);
        let skew = (&omega_mid * inv_h).scale(wm);
        let g0 = layout.global(side, j);
        let g1 = layout.global(side, j + 1);
        k.add_block(g0, g0, &d_block);
        k.add_block(g1, g1, &d_block);
        let up = -&off - &skew;
        let lo = -&off + &skew;
        k.add_block(g0, g1, &up);
        k.add_block(g1, g0, &lo);
    }

    for j in 0..=nc {
        let r = s::<T>(j as f64) * h;
        let c: T = if j == 0 || j == nc { half } else { T::one() };
        let m = f.eval(r).exp() * c * h;
        let g = layout.global(side, j);
        mass[g] += m;
        let pot = (angular_potential(op, modes, r) - op.e.eval(r)).scale(m);
        k.add_block(g, g, &pot);
        soft.add_block(g, g, &pot);
    }
}

/// Boundary weight `e^{F}` at an end of a side.
pub fn end_weight<T: Scalar>(op: &LaplaceData<T>, end: End) -> T {
    op.geom.total_warp().eval(end.coord::<T>()).exp()
}
