//! Direct numerical evaluation of the heat content `β(t)`.
//!
//! A problem from [`crate::problem`] is reduced to a radial system on one
//! or two glued intervals (separation of variables in the angular
//! directions), discretized by [`assemble`], and propagated in time by one
//! of two routes:
//!
//! * **spectral** — for self-adjoint data the flow is conjugated by the
//!   scalar gauge `e^{g}`, `g' = tr ω_r / n`, which leaves a symmetric
//!   operator; `β(t)` is then sampled exactly in time through the Chebyshev
//!   expansion of the matrix exponential ([`expm`]).
//! * **timestep** — Crank–Nicolson with a Rannacher start ([`timestep`])
//!   for condition data with no self-adjoint structure.
//!
//! Supported angular structure per direction: either a Fourier mode of the
//! fields (with `ω_θ = 0` in that direction) or a nontrivial constant
//! `ω_θ` acting on constant-in-θ fields. Mixing both in one direction is
//! rejected.

pub mod assemble;
pub mod expm;
pub mod timestep;

use crate::coefficients::DrKind;
use crate::geometry::End;
use crate::operator::{LaplaceData, Mode, SideFn, Side};
use crate::poly::{MatPoly, Poly};
use crate::problem::{InterfaceKind, InterfaceProblem, OneSidedProblem, ProblemError};
use crate::scalar::{s, Scalar};
use assemble::{
    assemble_side, end_weight, gauge_split, matpoly_is_antisymmetric, matpoly_is_symmetric,
    matrix_is_antisymmetric, matrix_is_symmetric, BlockTriDiag, Layout, LayoutKind,
};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("spectral route requires self-adjoint data: {0}")]
    NotSelfAdjoint(&'static str),
    #[error("unsupported connection or mode structure: {0}")]
    Unsupported(String),
    #[error("invalid problem: {0}")]
    Problem(#[from] ProblemError),
    #[error("sample times must be positive")]
    InvalidTimes,
}

/// Which propagation route to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Spectral when the data allows it, timestep otherwise.
    Auto,
    Spectral,
    Timestep,
}

/// The route actually taken, reported alongside the samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TakenRoute {
    Spectral,
    Timestep,
}

#[derive(Clone, Copy, Debug)]
pub struct Discretization {
    /// Radial cells per side.
    pub n_cells: usize,
    /// Crank–Nicolson substeps per sample time (timestep route only).
    pub substeps: usize,
}

impl Default for Discretization {
    fn default() -> Self {
        Discretization {
            n_cells: 2000,
            substeps: 256,
        }
    }
}

/// One sampled value of the heat content.
#[derive(Clone, Copy, Debug)]
pub struct Sample<T> {
    pub t: T,
    pub beta: T,
    /// Internal time-integration error estimate (spectral: series tail;
    /// timestep: step-halving difference). Spatial error is not included.
    pub err: T,
}

#[derive(Clone, Debug)]
pub struct Solution<T> {
    pub samples: Vec<Sample<T>>,
    pub route: TakenRoute,
}

impl<T: Scalar> Solution<T> {
    /// Richardson-combine two runs of the same problem at cell counts `n` and
    /// `n/2`.  The scheme converges at second order in the cell width, so
    /// `(4·β_fine − β_coarse)/3` cancels the leading spatial error term.  The
    /// reported error adds the size of the applied correction to the fine
    /// run's own estimate, which is conservative but honest about what was
    /// actually measured.
    pub fn richardson(fine: &Solution<T>, coarse: &Solution<T>) -> Solution<T> {
        assert_eq!(fine.samples.len(), coarse.samples.len());
        let third = T::one() / s(3.0);
        let samples = fine
            .samples
            .iter()
            .zip(coarse.samples.iter())
            .map(|(f, c)| {
                assert!(f.t == c.t, "richardson requires matching sample times");
                let shift = (f.beta - c.beta) * third;
                Sample {
                    t: f.t,
                    beta: f.beta + shift,
                    err: f.err + shift.abs(),
                }
            })
            .collect();
        Solution {
            samples,
            route: fine.route,
        }
    }
}

// ---------------------------------------------------------------------------
// angular bookkeeping
// ---------------------------------------------------------------------------

/// `∫ mode_φ(θ)·mode_ρ(θ) dθ` over the unit circle of circumference 2π.
fn direction_overlap<T: Scalar>(phi: Mode, rho: Mode) -> T {
    if phi.is_zero_mode() && rho.is_zero_mode() {
        s(2.0 * std::f64::consts::PI)
    } else if phi.k == rho.k && phi.kind == rho.kind {
        s(std::f64::consts::PI)
    } else {
        T::zero()
    }
}

fn side_overlap<T: Scalar>(phi: &SideFn<T>, rho: &SideFn<T>, d: usize) -> T {
    let mut ov = T::one();
    for a in 0..d {
        ov *= direction_overlap(phi.mode(a), rho.mode(a));
    }
    ov
}

/// Per direction, a nontrivial field mode and a nontrivial `ω_θ` exclude
/// each other (the mode would mix with its partner of the other parity).
fn check_mode_connection<T: Scalar>(
    op: &LaplaceData<T>,
    modes: &[Mode],
) -> Result<(), SolverError> {
    for (a, ot) in op.omega_theta.iter().enumerate() {
        let k = modes.get(a).map_or(0, |m| m.k);
        if k > 0 && ot.iter().any(|&e| e != T::zero()) {
            return Err(SolverError::Unsupported(format!(
                "direction {a} carries both a field mode and a connection"
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// self-adjointness tests (decide the route)
// ---------------------------------------------------------------------------

fn rel_tol<T: Scalar>(m: &DMatrix<T>) -> T {
    let scale = m.iter().fold(T::zero(), |acc, &e| acc.max(e.abs()));
    s::<T>(1e-12) * (T::one() + scale)
}

fn sym_ok<T: Scalar>(m: &DMatrix<T>) -> bool {
    matrix_is_symmetric(m, rel_tol(m))
}

fn antisym_ok<T: Scalar>(m: &DMatrix<T>) -> bool {
    matrix_is_antisymmetric(m, rel_tol(m))
}

fn matpoly_tol<T: Scalar>(mp: &MatPoly<T>) -> T {
    let scale = mp
        .coeffs
        .iter()
        .flat_map(|m| m.iter())
        .fold(T::zero(), |acc, &e| acc.max(e.abs()));
    s::<T>(1e-12) * (T::one() + scale)
}

fn side_self_adjoint<T: Scalar>(op: &LaplaceData<T>) -> bool {
    let (_, traceless) = gauge_split(&op.omega_r);
    matpoly_is_antisymmetric(&traceless, matpoly_tol(&traceless))
        && matpoly_is_symmetric(&op.e, matpoly_tol(&op.e))
        && op.omega_theta.iter().all(antisym_ok)
}

fn dr_self_adjoint<T: Scalar>(kind: &DrKind<T>) -> bool {
    match kind {
        DrKind::Dirichlet => true,
        DrKind::Robin { s } => sym_ok(s),
    }
}

fn interface_self_adjoint<T: Scalar>(kind: &InterfaceKind<T>) -> bool {
    match kind {
        InterfaceKind::Transmittal { u } => sym_ok(u),
        InterfaceKind::Transmission { blocks } => {
            sym_ok(&blocks.pp)
                && sym_ok(&blocks.mm)
                && {
                    let diff = &blocks.pm - blocks.mp.transpose();
                    diff.iter().all(|&e| e.abs() <= rel_tol(&blocks.pm))
                }
        }
    }
}

// ---------------------------------------------------------------------------
// assembly of full problems
// ---------------------------------------------------------------------------

/// Fully assembled and trimmed discrete problem.
struct Built<T> {
    k: BlockTriDiag<T>,
    /// Potential and condition blocks only (no cells). The cell part of
    /// the form is positive semidefinite, so this carries the sharp lower
    /// spectral bound.
    soft: BlockTriDiag<T>,
    /// Node masses (mass matrix is `diag(mass) ⊗ I_n`).
    mass: Vec<T>,
    /// Initial data, gauge factor applied.
    phi: DVector<T>,
    /// Density, gauge and angular overlap applied.
    rho: DVector<T>,
}

struct SidePrep<'a, T> {
    op: &'a LaplaceData<T>,
    side: Side,
    /// Connection used in assembly (traceless part under the gauge).
    omega_eff: MatPoly<T>,
    /// Scalar gauge antiderivative, `g(0) = 0`.
    gauge: Poly<T>,
}

fn prep_side<'a, T: Scalar>(op: &'a LaplaceData<T>, side: Side, spectral: bool) -> SidePrep<'a, T> {
    if spectral {
        let (tr, traceless) = gauge_split(&op.omega_r);
        SidePrep {
            op,
            side,
            omega_eff: traceless,
            gauge: tr.antideriv(),
        }
    } else {
        SidePrep {
            op,
            side,
            omega_eff: op.omega_r.clone(),
            gauge: Poly::zero(),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn add_field_samples<T: Scalar>(
    out: &mut DVector<T>,
    layout: &Layout,
    side: Side,
    f: &SideFn<T>,
    gauge: &Poly<T>,
    gauge_sign: T,
    scale: T,
) {
    let n = layout.fiber_dim;
    let nc = layout.n_cells;
    let h: T = s(1.0 / nc as f64);
    let half: T = s(0.5);
    for j in 0..=nc {
        let r = s::<T>(j as f64) * h;
        let mut factor = scale * (gauge_sign * gauge.eval(r)).exp();
        if layout.kind == LayoutKind::SharedInterface && j == 0 {
            // both sides contribute half of the shared node value
            factor *= half;
        }
        let [v0, _, _] = f.radial_jet(r);
        let g = layout.global(side, j);
        for c in 0..n {
            out[g * n + c] += factor * v0[c];
        }
    }
}

fn apply_dr_condition<T: Scalar>(
    k: &mut BlockTriDiag<T>,
    soft: &mut BlockTriDiag<T>,
    node: usize,
    kind: &DrKind<T>,
    weight: T,
    cut: &mut bool,
) {
    match kind {
        DrKind::Dirichlet => *cut = true,
        DrKind::Robin { s: sm } => {
            let b = sm.scale(-weight);
            k.add_block(node, node, &b);
            soft.add_block(node, node, &b);
        }
    }
}

fn trim_built<T: Scalar>(
    k: BlockTriDiag<T>,
    soft: BlockTriDiag<T>,
    mass: Vec<T>,
    phi: DVector<T>,
    rho: DVector<T>,
    cut_lo: bool,
    cut_hi: bool,
) -> Built<T> {
    let n = k.n;
    let lo = usize::from(cut_lo);
    let hi = k.nodes - usize::from(cut_hi);
    let kept = hi - lo;
    Built {
        k: k.trim(cut_lo, cut_hi),
        soft: soft.trim(cut_lo, cut_hi),
        mass: mass[lo..hi].to_vec(),
        phi: phi.rows(lo * n, kept * n).clone_owned(),
        rho: rho.rows(lo * n, kept * n).clone_owned(),
    }
}

fn build_one_sided<T: Scalar>(
    p: &OneSidedProblem<T>,
    disc: &Discretization,
    spectral: bool,
) -> Result<Built<T>, SolverError> {
    let op = &p.op;
    let n = op.fiber_dim;
    if p.phi.comps.len() != n || p.rho.comps.len() != n {
        return Err(SolverError::Problem(ProblemError::FieldDimension));
    }
    let d = op.geom.d();
    check_mode_connection(op, &p.phi.modes)?;
    let layout = Layout {
        n_cells: disc.n_cells,
        fiber_dim: n,
        kind: LayoutKind::OneSided,
    };
    let nodes = layout.node_count();
    let mut k = BlockTriDiag::zeros(nodes, n);
    let mut soft = BlockTriDiag::zeros(nodes, n);
    let mut mass = vec![T::zero(); nodes];
    let prep = prep_side(op, Side::Plus, spectral);
    assemble_side(
        &mut k,
        &mut soft,
        &mut mass,
        &layout,
        prep.side,
        op,
        &prep.omega_eff,
        &p.phi.modes,
    );
    let mut cut_lo = false;
    let mut cut_hi = false;
    apply_dr_condition(&mut k, &mut soft, 0, &p.at_r0, end_weight(op, End::R0), &mut cut_lo);
    apply_dr_condition(
        &mut k,
        &mut soft,
        nodes - 1,
        &p.at_r1,
        end_weight(op, End::R1),
        &mut cut_hi,
    );

    let ov = side_overlap(&p.phi, &p.rho, d);
    let mut phi = DVector::zeros(nodes * n);
    let mut rho = DVector::zeros(nodes * n);
    add_field_samples(&mut phi, &layout, Side::Plus, &p.phi, &prep.gauge, T::one(), T::one());
    add_field_samples(&mut rho, &layout, Side::Plus, &p.rho, &prep.gauge, -T::one(), ov);
    Ok(trim_built(k, soft, mass, phi, rho, cut_lo, cut_hi))
}

fn build_interface<T: Scalar>(
    p: &InterfaceProblem<T>,
    disc: &Discretization,
    spectral: bool,
) -> Result<Built<T>, SolverError> {
    p.validate()?;
    let n = p.plus.op.fiber_dim;
    if p.minus.op.fiber_dim != n {
        return Err(SolverError::Unsupported(
            "solver requires equal fiber dimensions on both sides".into(),
        ));
    }
    let d = p.plus.op.geom.d();
    for a in 0..d {
        if p.phi_plus.mode(a) != p.phi_minus.mode(a) {
            return Err(SolverError::Unsupported(
                "initial data must carry the same angular mode on both sides".into(),
            ));
        }
    }
    check_mode_connection(&p.plus.op, &p.phi_plus.modes)?;
    check_mode_connection(&p.minus.op, &p.phi_minus.modes)?;

    let kind = match &p.interface {
        InterfaceKind::Transmittal { .. } => LayoutKind::SharedInterface,
        InterfaceKind::Transmission { .. } => LayoutKind::SplitInterface,
    };
    let layout = Layout {
        n_cells: disc.n_cells,
        fiber_dim: n,
        kind,
    };
    let nodes = layout.node_count();
    let mut k = BlockTriDiag::zeros(nodes, n);
    let mut soft = BlockTriDiag::zeros(nodes, n);
    let mut mass = vec![T::zero(); nodes];
    let prep_p = prep_side(&p.plus.op, Side::Plus, spectral);
    let prep_m = prep_side(&p.minus.op, Side::Minus, spectral);
    for prep in [&prep_p, &prep_m] {
        assemble_side(
            &mut k,
            &mut soft,
            &mut mass,
            &layout,
            prep.side,
            prep.op,
            &prep.omega_eff,
            &p.phi_plus.modes,
        );
    }

    // outer conditions: plus outer end is global node 0, minus outer is last
    let mut cut_lo = false;
    let mut cut_hi = false;
    apply_dr_condition(
        &mut k,
        &mut soft,
        0,
        &p.plus.outer,
        end_weight(&p.plus.op, End::R1),
        &mut cut_lo,
    );
    apply_dr_condition(
        &mut k,
        &mut soft,
        nodes - 1,
        &p.minus.outer,
        end_weight(&p.minus.op, End::R1),
        &mut cut_hi,
    );

    // interface coupling at the glue weight
    let w0 = end_weight(&p.plus.op, End::R0);
    let shared = disc.n_cells;
    match &p.interface {
        InterfaceKind::Transmittal { u } => {
            let b = u.scale(w0);
            k.add_block(shared, shared, &b);
            soft.add_block(shared, shared, &b);
        }
        InterfaceKind::Transmission { blocks } => {
            for (di, dj, m) in [
                (0, 0, &blocks.pp),
                (0, 1, &blocks.pm),
                (1, 0, &blocks.mp),
                (1, 1, &blocks.mm),
            ] {
                let b = m.scale(-w0);
                k.add_block(shared + di, shared + dj, &b);
                soft.add_block(shared + di, shared + dj, &b);
            }
        }
    }

    let ov_p = side_overlap(&p.phi_plus, &p.rho_plus, d);
    let ov_m = side_overlap(&p.phi_minus, &p.rho_minus, d);
    let mut phi = DVector::zeros(nodes * n);
    let mut rho = DVector::zeros(nodes * n);
    let one = T::one();
    add_field_samples(&mut phi, &layout, Side::Plus, &p.phi_plus, &prep_p.gauge, one, one);
    add_field_samples(&mut phi, &layout, Side::Minus, &p.phi_minus, &prep_m.gauge, one, one);
    add_field_samples(&mut rho, &layout, Side::Plus, &p.rho_plus, &prep_p.gauge, -one, ov_p);
    add_field_samples(&mut rho, &layout, Side::Minus, &p.rho_minus, &prep_m.gauge, -one, ov_m);
    Ok(trim_built(k, soft, mass, phi, rho, cut_lo, cut_hi))
}

// ---------------------------------------------------------------------------
// propagation
// ---------------------------------------------------------------------------

fn run_spectral<T: Scalar>(built: &Built<T>, times: &[T]) -> Vec<Sample<T>> {
    let n = built.k.n;
    let mut l = built.k.clone();
    let d: Vec<T> = built.mass.iter().map(|&m| T::one() / m.sqrt()).collect();
    l.scale_nodes(&d);
    let dim = l.dim();
    let mut pm = vec![T::zero(); dim];
    let mut rm = vec![T::zero(); dim];
    for i in 0..built.mass.len() {
        let sq = built.mass[i].sqrt();
        for c in 0..n {
            pm[i * n + c] = built.phi[i * n + c] * sq;
            rm[i * n + c] = built.rho[i * n + c] * sq;
        }
    }
    let mut l_soft = built.soft.clone();
    l_soft.scale_nodes(&d);
    // cells are positive semidefinite, so λ_min(L) ≥ λ_min(L_soft); the
    // upper bound comes from the full operator
    let lo_t = l_soft.gershgorin().0;
    let hi_t = l.gershgorin().1;
    let (mut lo, mut hi) = (lo_t.to_f64().min(0.0), hi_t.to_f64());
    let pad = 1e-10 * (1.0 + lo.abs() + hi.abs());
    lo -= pad;
    hi += pad;
    let norm_p = pm.iter().fold(0.0, |a, &x| a + x.to_f64() * x.to_f64()).sqrt();
    let norm_r = rm.iter().fold(0.0, |a, &x| a + x.to_f64() * x.to_f64()).sqrt();

    let mut buf: Vec<T> = Vec::new();
    times
        .iter()
        .map(|&t| {
            let tail = expm_action(&l, lo, hi, t.to_f64(), &pm, &mut buf);
            let beta = rm
                .iter()
                .zip(buf.iter())
                .fold(T::zero(), |acc, (&r, &v)| acc + r * v);
            Sample {
                t,
                beta,
                err: s(tail * norm_p * norm_r),
            }
        })
        .collect()
}

fn mass_dot<T: Scalar>(mass: &[T], n: usize, a: &DVector<T>, b: &DVector<T>) -> T {
    let mut acc = T::zero();
    for (i, &m) in mass.iter().enumerate() {
        for c in 0..n {
            acc += m * a[i * n + c] * b[i * n + c];
        }
    }
    acc
}

fn run_timestep<T: Scalar>(built: &Built<T>, times: &[T], substeps: usize) -> Vec<Sample<T>> {
    let n = built.k.n;
    let coarse = (substeps / 2).max(1);
    times
        .iter()
        .map(|&t| {
            let fine = timestep::crank_nicolson(&built.k, &built.mass, &built.phi, t, substeps);
            let rough = timestep::crank_nicolson(&built.k, &built.mass, &built.phi, t, coarse);
            let beta_f = mass_dot(&built.mass, n, &built.rho, &fine);
            let beta_c = mass_dot(&built.mass, n, &built.rho, &rough);
            // the scheme is second order in the step, so promote the pair to a
            // Richardson value and keep the (conservative) pair difference as
            // the error estimate
            let shift = (beta_f - beta_c) / s(3.0);
            Sample {
                t,
                beta: beta_f + shift,
                err: shift.abs(),
            }
        })
        .collect()
}

/// The spectral route brackets the spectrum with `λ_min(L) ≥ λ_min(L_soft)`,
/// and its Chebyshev tail is amplified by `exp(t·|lo|)` when that floor dips
/// below zero.  Condition terms concentrated at a single node (a Robin block
/// with eigenvalues of the wrong sign, say) push the Gershgorin floor down by
/// `O(1/h)` even though the true spectrum barely moves, so the amplification
/// can be astronomical.  Auto reroutes to timestepping whenever the worst
/// requested time would amplify the tail beyond `e^20`.
fn soft_is_tame<T: Scalar>(built: &Built<T>, times: &[T]) -> bool {
    let d: Vec<T> = built.mass.iter().map(|&m| T::one() / m.sqrt()).collect();
    let mut l_soft = built.soft.clone();
    l_soft.scale_nodes(&d);
    let lo = l_soft.gershgorin().0.to_f64().min(0.0);
    let t_max = times.iter().fold(0.0_f64, |a, &t| a.max(t.to_f64()));
    t_max * (-lo) <= 20.0
}

fn run<T: Scalar>(
    built: Built<T>,
    route: Route,
    self_adjoint: bool,
    disc: &Discretization,
    times: &[T],
) -> Result<Solution<T>, SolverError> {
    if times.iter().any(|&t| t <= T::zero()) {
        return Err(SolverError::InvalidTimes);
    }
    let spectral = match route {
        Route::Auto => self_adjoint && soft_is_tame(&built, times),
        Route::Spectral => {
            if !self_adjoint {
                return Err(SolverError::NotSelfAdjoint(
                    "connection, endomorphism, or condition data is not symmetric",
                ));
            }
            true
        }
        Route::Timestep => false,
    };
    if spectral {
        debug_assert!(built.k.symmetry_defect().to_f64() < 1e-8);
        Ok(Solution {
            samples: run_spectral(&built, times),
            route: TakenRoute::Spectral,
        })
    } else {
        Ok(Solution {
            samples: run_timestep(&built, times, disc.substeps),
            route: TakenRoute::Timestep,
        })
    }
}

/// Sample `β(t)` for a one-sided problem.
pub fn heat_content_one_sided<T: Scalar>(
    p: &OneSidedProblem<T>,
    disc: &Discretization,
    route: Route,
    times: &[T],
) -> Result<Solution<T>, SolverError> {
    let sa = side_self_adjoint(&p.op) && dr_self_adjoint(&p.at_r0) && dr_self_adjoint(&p.at_r1);
    let built = build_one_sided(p, disc, sa && route != Route::Timestep)?;
    run(built, route, sa, disc, times)
}

/// Sample `β(t)` for a glued two-sided problem.
pub fn heat_content_interface<T: Scalar>(
    p: &InterfaceProblem<T>,
    disc: &Discretization,
    route: Route,
    times: &[T],
) -> Result<Solution<T>, SolverError> {
    let sa = side_self_adjoint(&p.plus.op)
        && side_self_adjoint(&p.minus.op)
        && dr_self_adjoint(&p.plus.outer)
        && dr_self_adjoint(&p.minus.outer)
        && interface_self_adjoint(&p.interface);
    let built = build_interface(p, disc, sa && route != Route::Timestep)?;
    run(built, route, sa, disc, times)
}

pub use expm::expm_action;
