//! Acceptance suite: ten criteria covering the exact relation suite, the
//! fitted expansions for all four condition families, the identity catalog,
//! and mutation sensitivity of the constant tables.
//!
//! Each test prints one `ACCEPTANCE n: PASS/FAIL` line (visible under
//! `cargo test --test acceptance -- --nocapture`) and asserts the verdict.
//! Tolerances are pinned here on purpose — loosening them is a spec change,
//! not a tuning knob.
//!
//! Fit policy, calibrated against the error budget of the default dyadic
//! grid `t_j = 0.05·2^{−j}`:
//! - the two largest times carry remainders beyond the half-power series
//!   (of order e^{−1/4t} ≈ 10⁻³ at t = 0.05), so every window starts at
//!   j = 2;
//! - below √t ≈ 10·h the solver's h²-expansion degrades and Richardson
//!   stops helping, so solver-backed windows end at j = 11 for the
//!   4000/2000-cell pairs used here;
//! - Robin-type data has genuinely large β₄, β₅ (growing like s³, s⁴),
//!   which bias a 5-term basis; those fits use 7 terms on j = 3..11.

use heat_content::asymptotics::{default_times, fit_half_powers, HalfPowerFit};
use heat_content::coefficients::relations::all_relations;
use heat_content::coefficients::{verify_constant_relations, Constants, DrKind};
use heat_content::geometry::WarpedGeometry;
use heat_content::harness;
use heat_content::operator::{LaplaceData, Mode, SBlocks, SideFn};
use heat_content::poly::Poly;
use heat_content::problem::{InterfaceKind, InterfaceProblem, OneSidedProblem, SideSpec};
use heat_content::solver::{
    heat_content_interface, heat_content_one_sided, Discretization, Route, Solution,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Mutex;
use std::time::Instant;

/// The runtime gates below measure wall-clock time, so the criteria must not
/// compete for cores; every test serializes on this lock.
static GATE: Mutex<()> = Mutex::new(());

fn gate() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

const SQRT_PI: f64 = 1.7724538509055159;

/// Solver-backed fits: Richardson pair at this many cells (per side).
const FIT_CELLS: usize = 4000;
/// Window into the default dyadic grid for flat-decay families.
const SOLVER_WINDOW: (usize, usize) = (2, 11);
/// Robin-type window and basis size.
const ROBIN_WINDOW: (usize, usize) = (3, 11);
const ROBIN_TERMS: usize = 7;
/// Oracle-backed fits can use almost the whole grid.
const ORACLE_WINDOW: (usize, usize) = (2, 14);
const TERMS: usize = 5;

fn conclude(n: usize, label: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {n} ({label}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    if !detail.is_empty() {
        println!("  {detail}");
    }
    assert!(pass, "ACCEPTANCE {n} ({label}) failed: {detail}");
}

fn rel(err: f64, theory: f64) -> f64 {
    err.abs() / theory.abs()
}

fn fit_run(sol: &Solution<f64>, window: (usize, usize), terms: usize) -> HalfPowerFit<f64> {
    let samples: Vec<(f64, f64)> = sol.samples[window.0..=window.1]
        .iter()
        .map(|s| (s.t, s.beta))
        .collect();
    fit_half_powers(&samples, terms)
}

fn run_one_sided(p: &OneSidedProblem<f64>, cells: usize) -> Solution<f64> {
    let times = default_times::<f64>();
    let fine = heat_content_one_sided(
        p,
        &Discretization {
            n_cells: cells,
            substeps: 256,
        },
        Route::Auto,
        &times,
    )
    .expect("solver run");
    let coarse = heat_content_one_sided(
        p,
        &Discretization {
            n_cells: cells / 2,
            substeps: 256,
        },
        Route::Auto,
        &times,
    )
    .expect("solver run");
    Solution::richardson(&fine, &coarse)
}

fn run_interface(p: &InterfaceProblem<f64>, cells: usize) -> Solution<f64> {
    let times = default_times::<f64>();
    let fine = heat_content_interface(
        p,
        &Discretization {
            n_cells: cells,
            substeps: 256,
        },
        Route::Auto,
        &times,
    )
    .expect("solver run");
    let coarse = heat_content_interface(
        p,
        &Discretization {
            n_cells: cells / 2,
            substeps: 256,
        },
        Route::Auto,
        &times,
    )
    .expect("solver run");
    Solution::richardson(&fine, &coarse)
}

fn scalar_interval_op() -> LaplaceData<f64> {
    LaplaceData::scalar_laplacian(WarpedGeometry::interval())
}

fn unit_interval_problem(end: DrKind<f64>) -> OneSidedProblem<f64> {
    OneSidedProblem {
        op: scalar_interval_op(),
        at_r0: end.clone(),
        at_r1: end,
        phi: SideFn::constant(1.0),
        rho: SideFn::constant(1.0),
    }
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_01_exact_relation_suite() {
    let _serial = gate();
    let report = verify_constant_relations(&Constants::published());
    let total = all_relations().len();
    let pass = report.all_hold() && total > 50;
    conclude(
        1,
        "exact relations",
        pass,
        &format!("{total} relations, {} violations", report.violations.len()),
    );
}

#[test]
fn criterion_02_dirichlet_interval() {
    let _serial = gate();
    let clock = Instant::now();
    // PDE solver route
    let p = unit_interval_problem(DrKind::Dirichlet);
    let sol = run_one_sided(&p, FIT_CELLS);
    let fit = fit_run(&sol, SOLVER_WINDOW, TERMS);

    // independent oracle: the sine series for the unit initial condition,
    // β(t) = Σ_{k odd} 8/(k²π²) e^{−k²π²t}
    let sine = |t: f64| {
        let mut acc = 0.0;
        let mut k = 1.0_f64;
        loop {
            let rate = k * k * std::f64::consts::PI * std::f64::consts::PI;
            let term = 8.0 / rate * (-rate * t).exp();
            if term < 1e-300 {
                return acc;
            }
            acc += term;
            k += 2.0;
        }
    };
    let times = default_times::<f64>();
    let samples: Vec<(f64, f64)> = times[ORACLE_WINDOW.0..=ORACLE_WINDOW.1]
        .iter()
        .map(|&t| (t, sine(t)))
        .collect();
    let oracle = fit_half_powers(&samples, TERMS);

    let theory1 = -4.0 / SQRT_PI;
    let mut detail = String::new();
    let mut pass = true;
    for (name, fit) in [("solver", &fit), ("oracle", &oracle)] {
        let e1 = rel(fit.coefficients[1] - theory1, theory1);
        let e2 = fit.coefficients[2].abs();
        let e3 = fit.coefficients[3].abs();
        pass &= e1 < 1e-3 && e2 < 1e-3 && e3 < 1e-3;
        detail.push_str(&format!(
            "{name}: β̂₁ rel {e1:.1e}, β̂₂ abs {e2:.1e}, β̂₃ abs {e3:.1e}; "
        ));
    }
    let elapsed = clock.elapsed().as_secs_f64();
    pass &= elapsed < 5.0;
    detail.push_str(&format!("{elapsed:.1}s"));
    conclude(2, "Dirichlet interval", pass, &detail);
}

#[test]
fn criterion_03_robin_interval() {
    let _serial = gate();
    let mut detail = String::new();
    let mut pass = true;
    for s in [0.5, 1.0, 2.0] {
        let clock = Instant::now();
        let p = unit_interval_problem(DrKind::Robin {
            s: DMatrix::from_element(1, 1, s),
        });
        let sol = run_one_sided(&p, FIT_CELLS);
        let fit = fit_run(&sol, ROBIN_WINDOW, ROBIN_TERMS);
        let t2 = 2.0 * s;
        let t3 = 8.0 * s * s / (3.0 * SQRT_PI);
        let e2 = rel(fit.coefficients[2] - t2, t2);
        let e3 = rel(fit.coefficients[3] - t3, t3);
        let elapsed = clock.elapsed().as_secs_f64();
        pass &= e2 < 1e-3 && e3 < 1e-2 && elapsed < 10.0;
        detail.push_str(&format!(
            "s={s}: β̂₂ rel {e2:.1e}, β̂₃ rel {e3:.1e}, {elapsed:.1}s; "
        ));
    }
    conclude(3, "Robin interval", pass, &detail);
}

/// Flat transmittal interface with scalar or rank-2 data.
fn transmittal_problem(
    u: DMatrix<f64>,
    phi: [SideFn<f64>; 2],
    rho: [SideFn<f64>; 2],
) -> InterfaceProblem<f64> {
    let fiber = u.nrows();
    let op = if fiber == 1 {
        scalar_interval_op()
    } else {
        LaplaceData {
            fiber_dim: fiber,
            omega_r: heat_content::poly::MatPoly::zero(fiber),
            omega_theta: vec![],
            e: heat_content::poly::MatPoly::zero(fiber),
            geom: WarpedGeometry::interval(),
        }
    };
    let [phi_plus, phi_minus] = phi;
    let [rho_plus, rho_minus] = rho;
    InterfaceProblem {
        plus: SideSpec {
            op: op.clone(),
            outer: DrKind::Dirichlet,
        },
        minus: SideSpec {
            op,
            outer: DrKind::Dirichlet,
        },
        interface: InterfaceKind::Transmittal { u },
        phi_plus,
        phi_minus,
        rho_plus,
        rho_minus,
    }
}

#[test]
fn criterion_04_transmittal_flat_interface() {
    let _serial = gate();
    let scalar = |c: f64| SideFn::constant(c);
    let linear = |a: f64, b: f64| SideFn::new(vec![Poly::from_f64s(&[a, b])]);
    let pair2 = |a: f64, b: f64| SideFn::from_f64s(&[&[a], &[b]]);
    // (u, φ±, ρ±): one-sided data isolating the quadratic U term in β₃,
    // unit fields, generic linear data, an invisible u = 0 interface, and a
    // rank-2 fiber with constant vectors
    let cases: Vec<(&str, DMatrix<f64>, [SideFn<f64>; 2], [SideFn<f64>; 2])> = vec![
        (
            "u=0.7 one-sided pure-β₃",
            DMatrix::from_element(1, 1, 0.7),
            [scalar(1.0), scalar(0.0)],
            [scalar(1.0), scalar(0.0)],
        ),
        (
            "u=0.7 unit fields",
            DMatrix::from_element(1, 1, 0.7),
            [scalar(1.0), scalar(1.0)],
            [scalar(1.0), scalar(1.0)],
        ),
        (
            "u=0.7 linear fields",
            DMatrix::from_element(1, 1, 0.7),
            [linear(1.0, 0.5), linear(0.8, -0.3)],
            [linear(0.9, 0.2), linear(1.2, 0.0)],
        ),
        (
            "u=0 one-sided data",
            DMatrix::from_element(1, 1, 0.0),
            [scalar(1.0), scalar(0.0)],
            [scalar(1.0), scalar(0.0)],
        ),
        (
            "u=0.7 rank-2 constants",
            DMatrix::identity(2, 2) * 0.7,
            [pair2(1.0, 0.5), pair2(0.8, 0.2)],
            [pair2(0.9, 0.1), pair2(1.1, 0.4)],
        ),
    ];

    let mut detail = String::new();
    let mut pass = true;
    for (label, u, phi, rho) in cases {
        let p = transmittal_problem(u, phi, rho);
        let theory = p.theory();
        let sol = run_interface(&p, FIT_CELLS);
        let fit = fit_run(&sol, SOLVER_WINDOW, TERMS);
        // relative checks; a vanishing prediction degrades to absolute at
        // the same budget
        let mut errs = Vec::new();
        for (order, tol) in [(1, 1e-3), (2, 1e-3), (3, 1e-2)] {
            let th: f64 = theory.beta[order];
            let err = fit.coefficients[order] - th;
            let score = if th.abs() > 1e-12 {
                rel(err, th)
            } else {
                err.abs()
            };
            pass &= score < tol;
            errs.push(format!("β̂{order} {score:.1e}"));
        }
        detail.push_str(&format!("{label}: {}; ", errs.join(", ")));
    }

    // spot-check the pure-β₃ theory value against its closed form: with
    // data supported on one side, the only interface term in β₃ is
    // quadratic in U
    let p = transmittal_problem(
        DMatrix::from_element(1, 1, 0.7),
        [scalar(1.0), scalar(0.0)],
        [scalar(1.0), scalar(0.0)],
    );
    let th = p.theory();
    let closed = 0.7 * 0.7 / (6.0 * SQRT_PI);
    pass &= rel(th.beta[3] - closed, closed) < 1e-14;

    conclude(4, "transmittal flat interface", pass, &detail);
}

#[test]
fn criterion_05_transmittal_curved_interface() {
    let _serial = gate();
    // d = 1, f₊ = r²(1−r)², f₋ = 0; both warp slopes vanish at the glue
    // point so the reduction rule leaves U untouched
    let bump = Poly::from_f64s(&[0.0, 0.0, 1.0, -2.0, 1.0]);
    let u0 = 0.5;
    let warped = LaplaceData::scalar_laplacian(
        WarpedGeometry::new(vec![bump]).expect("valid warp"),
    );
    let plain = LaplaceData::scalar_laplacian(WarpedGeometry::flat(1));
    let unit = SideFn::constant(1.0).with_modes(vec![Mode::ZERO]);
    let p = InterfaceProblem {
        plus: SideSpec {
            op: warped,
            outer: DrKind::Dirichlet,
        },
        minus: SideSpec {
            op: plain,
            outer: DrKind::Dirichlet,
        },
        interface: InterfaceKind::Transmittal {
            u: DMatrix::from_element(1, 1, u0),
        },
        phi_plus: unit.clone(),
        phi_minus: unit.clone(),
        rho_plus: unit.clone(),
        rho_minus: unit,
    };
    let theory = p.theory();
    let sol = run_interface(&p, FIT_CELLS);
    let fit = fit_run(&sol, SOLVER_WINDOW, TERMS);
    let e2 = rel(fit.coefficients[2] - theory.beta[2], theory.beta[2]);
    let mut pass = e2 < 1e-3;

    // warped-reduction identity: exact at evaluator level, 10⁻⁶ at solver
    // level (the harness case list includes this exact bump configuration)
    let reduction = harness::check_warped_reduction(&Discretization {
        n_cells: 400,
        substeps: 128,
    });
    pass &= reduction.pass;
    conclude(
        5,
        "transmittal curved interface",
        pass,
        &format!(
            "β̂₂ rel {e2:.1e} against β₂ = {:.6}; reduction worst {:.1e}",
            theory.beta[2], reduction.worst
        ),
    );
}

#[test]
fn criterion_06_transmission() {
    let _serial = gate();
    // (a) + (b): decoupling and doubling are the alternating cases of the
    // transmission identity catalog; the verdict tolerance (10⁻⁸) matches
    // the criterion, and the evaluator defects inside sit at rounding level
    let catalog = harness::check_b2_identities(2024, 16);
    let mut pass = catalog.pass;
    let mut detail = format!("identities worst {:.1e}; ", catalog.worst);

    // (c) fitted β̂₂, β̂₃ for a seeded random S-block set
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut entry = || 0.3 + 0.5 * rng.gen::<f64>();
    let blocks = SBlocks::scalar(entry(), -0.5 * entry(), -0.5 * entry(), entry());
    let p = InterfaceProblem {
        plus: SideSpec {
            op: scalar_interval_op(),
            outer: DrKind::Dirichlet,
        },
        minus: SideSpec {
            op: scalar_interval_op(),
            outer: DrKind::Dirichlet,
        },
        interface: InterfaceKind::Transmission { blocks },
        phi_plus: SideFn::constant(1.0),
        phi_minus: SideFn::constant(0.8),
        rho_plus: SideFn::constant(1.0),
        rho_minus: SideFn::constant(1.1),
    };
    let theory = p.theory();
    assert!(
        theory.beta[2].abs() > 1e-2 && theory.beta[3].abs() > 1e-2,
        "seeded blocks must exercise both orders"
    );
    // S-block couplings leave more curvature in the small-t samples than a
    // plain Robin pair, so this fit gets the finer Richardson pair
    let sol = run_interface(&p, 2 * FIT_CELLS);
    let fit = fit_run(&sol, ROBIN_WINDOW, ROBIN_TERMS);
    let e2 = rel(fit.coefficients[2] - theory.beta[2], theory.beta[2]);
    let e3 = rel(fit.coefficients[3] - theory.beta[3], theory.beta[3]);
    pass &= e2 < 1e-3 && e3 < 1e-2;
    detail.push_str(&format!("random blocks: β̂₂ rel {e2:.1e}, β̂₃ rel {e3:.1e}"));
    conclude(6, "transmission", pass, &detail);
}

#[test]
fn criterion_07_doubling_suite() {
    let _serial = gate();
    let v = harness::check_doubling_b1(2024, 20);
    conclude(
        7,
        "doubling suite",
        v.pass,
        &format!("20 seeded cases, worst {:.1e} vs 1e-8; {}", v.worst, v.detail),
    );
}

#[test]
fn criterion_08_epsilon_shift() {
    let _serial = gate();
    let v = harness::check_epsilon_shift(2024);
    conclude(
        8,
        "ε-shift property",
        v.pass,
        &format!("{} cases over four families, worst {:.1e} vs 1e-8", v.cases, v.worst),
    );
}

#[test]
fn criterion_09_harmonic_unit_vanishing() {
    let _serial = gate();
    let mut pass = true;
    let mut worst = [0.0_f64; 3];
    for case in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + case);
        let warp = |rng: &mut ChaCha8Rng| {
            // vanish at the glue point, free at the outer end
            let q = Poly::new(vec![
                rng.gen_range(-0.3..0.3),
                rng.gen_range(-0.3..0.3),
                rng.gen_range(-0.3..0.3),
            ]);
            WarpedGeometry::new(vec![q.mul(&Poly::from_f64s(&[0.0, 1.0]))]).expect("valid warp")
        };
        let rho = |rng: &mut ChaCha8Rng| {
            SideFn::new(vec![Poly::new(vec![
                rng.gen_range(0.5..1.5),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ])])
            .with_modes(vec![Mode::ZERO])
        };
        let unit = SideFn::constant(1.0).with_modes(vec![Mode::ZERO]);
        let insulated = DrKind::Robin {
            s: DMatrix::zeros(1, 1),
        };
        let p = InterfaceProblem {
            plus: SideSpec {
                op: LaplaceData::scalar_laplacian(warp(&mut rng)),
                outer: insulated.clone(),
            },
            minus: SideSpec {
                op: LaplaceData::scalar_laplacian(warp(&mut rng)),
                outer: insulated,
            },
            interface: InterfaceKind::Transmittal {
                u: DMatrix::zeros(1, 1),
            },
            phi_plus: unit.clone(),
            phi_minus: unit.clone(),
            rho_plus: rho(&mut rng),
            rho_minus: rho(&mut rng),
        };
        // stationary flow: modest grids suffice, no extrapolation needed
        let sol = heat_content_interface(
            &p,
            &Discretization {
                n_cells: 256,
                substeps: 256,
            },
            Route::Auto,
            &default_times::<f64>(),
        )
        .expect("steady run");
        let fit = fit_run(&sol, SOLVER_WINDOW, TERMS);
        for n in 1..=3 {
            worst[n - 1] = worst[n - 1].max(fit.coefficients[n].abs());
        }
    }
    pass &= worst[0] < 1e-3 && worst[1] < 1e-3 && worst[2] < 1e-2;
    conclude(
        9,
        "harmonic-unit vanishing",
        pass,
        &format!(
            "worst |β̂₁| {:.1e}, |β̂₂| {:.1e}, |β̂₃| {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    );
}

#[test]
fn criterion_10_mutation_sensitivity() {
    let _serial = gate();
    let v = harness::constant_coverage();
    conclude(
        10,
        "mutation sensitivity",
        v.pass,
        &format!("{} nonzero constants; {}", v.cases, v.detail),
    );
}
