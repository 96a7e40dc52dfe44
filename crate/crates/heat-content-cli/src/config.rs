//! JSON problem configuration.
//!
//! The schema is a direct tree encoding of the library's problem types:
//! polynomials are coefficient lists (constant term first), matrices are
//! row-major nested lists, and matrix polynomials are lists of coefficient
//! matrices per power of `r`. Unknown keys are rejected everywhere, and
//! every build error carries the config path of the offending field.

use heat_content::coefficients::DrKind;
use heat_content::geometry::WarpedGeometry;
use heat_content::operator::{
    symbol_to_natural, transmission_from_physics, Condition, LaplaceData, Mode, SBlocks, SideFn,
};
use heat_content::poly::{MatPoly, Poly};
use heat_content::problem::{InterfaceKind, InterfaceProblem, OneSidedProblem, SideSpec};
use heat_content::solver::{Discretization, Route};
use nalgebra::DMatrix;
use serde::Deserialize;
use std::fmt;
use std::path::PathBuf;

/// A config error with the path of the field it refers to.
#[derive(Debug)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn at(path: impl Into<String>, message: impl fmt::Display) -> Self {
        ConfigError {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

// ---------------------------------------------------------------------------
// schema
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub problem: ProblemCfg,
    #[serde(default)]
    pub solver: SolverCfg,
    #[serde(default)]
    pub fit: FitCfg,
    #[serde(default)]
    pub verify: VerifyCfg,
    #[serde(default)]
    pub output: OutputCfg,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemCfg {
    /// Single interval with conditions at both ends.
    OneSided {
        side: SideCfg,
        at_r0: ConditionCfg,
        at_r1: ConditionCfg,
        phi: FieldCfg,
        rho: FieldCfg,
    },
    /// Two sides glued along the interface at `r = 0`.
    Interface {
        plus: SideCfg,
        minus: SideCfg,
        interface: ConditionCfg,
        phi_plus: FieldCfg,
        phi_minus: FieldCfg,
        rho_plus: FieldCfg,
        rho_minus: FieldCfg,
    },
}

/// One side: geometry plus operator, and (for glued problems) the condition
/// at its outer end.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideCfg {
    /// Number of circle factors; redundant when `warpings` is given.
    #[serde(default)]
    pub d: Option<usize>,
    /// Warping polynomials, one per circle factor.
    #[serde(default)]
    pub warpings: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub operator: OperatorCfg,
    /// Outer-end condition (glued problems only; one-sided problems name
    /// their ends explicitly).
    #[serde(default)]
    pub outer: Option<ConditionCfg>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorCfg {
    /// Scalar Laplacian of the side's geometry.
    #[default]
    Scalar,
    /// Natural form: connection components and endomorphism.
    Natural {
        fiber_dim: usize,
        #[serde(default)]
        omega_r: Vec<Vec<Vec<f64>>>,
        #[serde(default)]
        omega_theta: Vec<Vec<Vec<f64>>>,
        #[serde(default)]
        e: Vec<Vec<Vec<f64>>>,
    },
    /// Symbol form `−(g^{μν}∂_μ∂_ν + A^μ∂_μ + B)`.
    Symbol {
        a_r: Vec<Vec<Vec<f64>>>,
        #[serde(default)]
        a_theta: Vec<Vec<Vec<f64>>>,
        b: Vec<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConditionCfg {
    Dirichlet,
    Robin {
        s: Vec<Vec<f64>>,
    },
    Transmittal {
        u: Vec<Vec<f64>>,
    },
    Transmission {
        pp: Vec<Vec<f64>>,
        pm: Vec<Vec<f64>>,
        mp: Vec<Vec<f64>>,
        mm: Vec<Vec<f64>>,
    },
    /// Conductivity pair with surface transfer coefficient; expands to
    /// transmission blocks.
    Physics {
        k_plus: f64,
        k_minus: f64,
        h: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldCfg {
    /// Fiber components as polynomial coefficient lists.
    pub comps: Vec<Vec<f64>>,
    /// Optional radial factor `e^{g(r)}` with `g` a polynomial.
    #[serde(default)]
    pub exponent: Vec<f64>,
    /// Optional angular modes, one per circle factor.
    #[serde(default)]
    pub modes: Vec<Mode>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverCfg {
    pub n_cells: usize,
    pub substeps: usize,
    pub route: RouteCfg,
    /// Re-run at half resolution and extrapolate.
    pub richardson: bool,
    pub times: TimesCfg,
}

impl Default for SolverCfg {
    fn default() -> Self {
        SolverCfg {
            n_cells: 512,
            substeps: 256,
            route: RouteCfg::Auto,
            richardson: true,
            times: TimesCfg::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteCfg {
    Auto,
    Spectral,
    /// Historical name for the spectral route.
    Eigen,
    Timestep,
}

impl RouteCfg {
    pub fn to_route(self) -> Route {
        match self {
            RouteCfg::Auto => Route::Auto,
            RouteCfg::Spectral | RouteCfg::Eigen => Route::Spectral,
            RouteCfg::Timestep => Route::Timestep,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TimesCfg {
    /// `t_j = t_max · 2^{−j}`, `j = 0 .. levels−1`.
    Dyadic { t_max: f64, levels: usize },
    /// Explicit times.
    List { values: Vec<f64> },
}

impl Default for TimesCfg {
    fn default() -> Self {
        TimesCfg::Dyadic {
            t_max: 0.05,
            levels: 15,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitCfg {
    pub n_terms: usize,
    /// Inclusive index range into the time grid; `None` keeps every sample.
    pub window: Option<[usize; 2]>,
}

impl Default for FitCfg {
    fn default() -> Self {
        FitCfg {
            n_terms: 5,
            // the largest default times carry remainders beyond the series
            // and the smallest sit where the h²-expansion of the default
            // grid degrades (√t below ~10 cell widths), so the default
            // window trims both ends
            window: Some([2, 7]),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyCfg {
    /// Per-order tolerances for β₀…β₃; relative, falling back to absolute
    /// when the predicted value vanishes.
    pub tolerances: [f64; 4],
}

impl Default for VerifyCfg {
    fn default() -> Self {
        VerifyCfg {
            tolerances: [1e-6, 1e-3, 1e-3, 1e-2],
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputCfg {
    pub path: Option<PathBuf>,
    pub format: Option<FormatCfg>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FormatCfg {
    Csv,
    Json,
}

// ---------------------------------------------------------------------------
// building library types
// ---------------------------------------------------------------------------

/// A fully constructed problem, either flavor.
#[derive(Clone, Debug)]
pub enum BuiltProblem {
    OneSided(OneSidedProblem<f64>),
    Interface(InterfaceProblem<f64>),
}

fn to_poly(v: &[f64]) -> Poly<f64> {
    Poly::new(v.to_vec())
}

fn to_matrix(path: &str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>, ConfigError> {
    if rows.is_empty() {
        return Err(ConfigError::at(path, "matrix must have at least one row"));
    }
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(ConfigError::at(
                format!("{path}[{i}]"),
                format!("expected a square matrix: row has {} entries, want {n}", row.len()),
            ));
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn to_matpoly(path: &str, coeffs: &[Vec<Vec<f64>>], dim: usize) -> Result<MatPoly<f64>, ConfigError> {
    let mut out = Vec::with_capacity(coeffs.len());
    for (k, m) in coeffs.iter().enumerate() {
        let m = to_matrix(&format!("{path}[{k}]"), m)?;
        if m.nrows() != dim {
            return Err(ConfigError::at(
                format!("{path}[{k}]"),
                format!("matrix is {}×{}, want {dim}×{dim}", m.nrows(), m.ncols()),
            ));
        }
        out.push(m);
    }
    Ok(MatPoly { dim, coeffs: out })
}

fn build_geometry(path: &str, side: &SideCfg) -> Result<WarpedGeometry<f64>, ConfigError> {
    match (&side.warpings, side.d) {
        (Some(w), d) => {
            if let Some(d) = d {
                if d != w.len() {
                    return Err(ConfigError::at(
                        format!("{path}.d"),
                        format!("d = {d} but {} warpings are given", w.len()),
                    ));
                }
            }
            WarpedGeometry::new(w.iter().map(|c| to_poly(c)).collect())
                .map_err(|e| ConfigError::at(format!("{path}.warpings"), e))
        }
        (None, Some(d)) => Ok(WarpedGeometry::flat(d)),
        (None, None) => Ok(WarpedGeometry::interval()),
    }
}

fn build_operator(path: &str, side: &SideCfg) -> Result<LaplaceData<f64>, ConfigError> {
    let geom = build_geometry(path, side)?;
    let op = match &side.operator {
        OperatorCfg::Scalar => LaplaceData::scalar_laplacian(geom),
        OperatorCfg::Natural {
            fiber_dim,
            omega_r,
            omega_theta,
            e,
        } => {
            let n = *fiber_dim;
            let ot = omega_theta
                .iter()
                .enumerate()
                .map(|(a, m)| to_matrix(&format!("{path}.operator.omega_theta[{a}]"), m))
                .collect::<Result<Vec<_>, _>>()?;
            LaplaceData {
                fiber_dim: n,
                omega_r: if omega_r.is_empty() {
                    MatPoly::zero(n)
                } else {
                    to_matpoly(&format!("{path}.operator.omega_r"), omega_r, n)?
                },
                omega_theta: if ot.is_empty() {
                    vec![DMatrix::zeros(n, n); geom.d()]
                } else {
                    ot
                },
                e: if e.is_empty() {
                    MatPoly::zero(n)
                } else {
                    to_matpoly(&format!("{path}.operator.e"), e, n)?
                },
                geom,
            }
        }
        OperatorCfg::Symbol { a_r, a_theta, b } => {
            let dim = a_r
                .first()
                .map(|m| m.len())
                .ok_or_else(|| ConfigError::at(format!("{path}.operator.a_r"), "may not be empty"))?;
            let a_r = to_matpoly(&format!("{path}.operator.a_r"), a_r, dim)?;
            let b = to_matpoly(&format!("{path}.operator.b"), b, dim)?;
            let a_theta = a_theta
                .iter()
                .enumerate()
                .map(|(a, m)| to_matrix(&format!("{path}.operator.a_theta[{a}]"), m))
                .collect::<Result<Vec<_>, _>>()?;
            symbol_to_natural(&a_r, &a_theta, &b, &geom)
                .map_err(|e| ConfigError::at(format!("{path}.operator"), e))?
        }
    };
    op.validate()
        .map_err(|e| ConfigError::at(format!("{path}.operator"), e))?;
    Ok(op)
}

fn build_field(path: &str, f: &FieldCfg) -> Result<SideFn<f64>, ConfigError> {
    if f.comps.is_empty() {
        return Err(ConfigError::at(format!("{path}.comps"), "may not be empty"));
    }
    let mut out = SideFn::new(f.comps.iter().map(|c| to_poly(c)).collect());
    if !f.exponent.is_empty() {
        out = out.mul_exp(&to_poly(&f.exponent));
    }
    if !f.modes.is_empty() {
        out = out.with_modes(f.modes.clone());
    }
    Ok(out)
}

fn build_dr(path: &str, c: &ConditionCfg) -> Result<DrKind<f64>, ConfigError> {
    match c {
        ConditionCfg::Dirichlet => Ok(DrKind::Dirichlet),
        ConditionCfg::Robin { s } => Ok(DrKind::Robin {
            s: to_matrix(&format!("{path}.s"), s)?,
        }),
        _ => Err(ConfigError::at(
            path,
            "expected an outer-end condition (dirichlet or robin)",
        )),
    }
}

fn build_interface(path: &str, c: &ConditionCfg) -> Result<InterfaceKind<f64>, ConfigError> {
    match c {
        ConditionCfg::Transmittal { u } => Ok(InterfaceKind::Transmittal {
            u: to_matrix(&format!("{path}.u"), u)?,
        }),
        ConditionCfg::Transmission { pp, pm, mp, mm } => Ok(InterfaceKind::Transmission {
            blocks: SBlocks {
                pp: to_matrix(&format!("{path}.pp"), pp)?,
                pm: to_matrix(&format!("{path}.pm"), pm)?,
                mp: to_matrix(&format!("{path}.mp"), mp)?,
                mm: to_matrix(&format!("{path}.mm"), mm)?,
            },
        }),
        ConditionCfg::Physics { k_plus, k_minus, h } => {
            let cond = transmission_from_physics(*k_plus, *k_minus, *h)
                .map_err(|e| ConfigError::at(path, e))?;
            match cond {
                Condition::Transmission { blocks } => Ok(InterfaceKind::Transmission { blocks }),
                _ => unreachable!("physics triple always expands to transmission blocks"),
            }
        }
        _ => Err(ConfigError::at(
            path,
            "expected an interface condition (transmittal, transmission, or physics)",
        )),
    }
}

impl Config {
    /// Parse a config document; serde reports unknown or missing fields with
    /// their location.
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::at("config", e))
    }

    /// Build the library problem described by `problem`.
    pub fn build_problem(&self) -> Result<BuiltProblem, ConfigError> {
        match &self.problem {
            ProblemCfg::OneSided {
                side,
                at_r0,
                at_r1,
                phi,
                rho,
            } => {
                if side.outer.is_some() {
                    return Err(ConfigError::at(
                        "problem.side.outer",
                        "one-sided problems name their end conditions via at_r0/at_r1",
                    ));
                }
                Ok(BuiltProblem::OneSided(OneSidedProblem {
                    op: build_operator("problem.side", side)?,
                    at_r0: build_dr("problem.at_r0", at_r0)?,
                    at_r1: build_dr("problem.at_r1", at_r1)?,
                    phi: build_field("problem.phi", phi)?,
                    rho: build_field("problem.rho", rho)?,
                }))
            }
            ProblemCfg::Interface {
                plus,
                minus,
                interface,
                phi_plus,
                phi_minus,
                rho_plus,
                rho_minus,
            } => {
                let outer_of = |path: &str, s: &SideCfg| match &s.outer {
                    Some(c) => build_dr(&format!("{path}.outer"), c),
                    None => Err(ConfigError::at(
                        format!("{path}.outer"),
                        "missing outer-end condition",
                    )),
                };
                Ok(BuiltProblem::Interface(InterfaceProblem {
                    plus: SideSpec {
                        op: build_operator("problem.plus", plus)?,
                        outer: outer_of("problem.plus", plus)?,
                    },
                    minus: SideSpec {
                        op: build_operator("problem.minus", minus)?,
                        outer: outer_of("problem.minus", minus)?,
                    },
                    interface: build_interface("problem.interface", interface)?,
                    phi_plus: build_field("problem.phi_plus", phi_plus)?,
                    phi_minus: build_field("problem.phi_minus", phi_minus)?,
                    rho_plus: build_field("problem.rho_plus", rho_plus)?,
                    rho_minus: build_field("problem.rho_minus", rho_minus)?,
                }))
            }
        }
    }

    pub fn discretization(&self) -> Discretization {
        Discretization {
            n_cells: self.solver.n_cells,
            substeps: self.solver.substeps,
        }
    }

    pub fn times(&self) -> Result<Vec<f64>, ConfigError> {
        match &self.solver.times {
            TimesCfg::Dyadic { t_max, levels } => {
                if *t_max <= 0.0 || *levels == 0 {
                    return Err(ConfigError::at(
                        "solver.times.dyadic",
                        "t_max must be positive and levels nonzero",
                    ));
                }
                Ok((0..*levels).map(|j| t_max * 0.5_f64.powi(j as i32)).collect())
            }
            TimesCfg::List { values } => {
                if values.is_empty() || values.iter().any(|&t| t <= 0.0) {
                    return Err(ConfigError::at(
                        "solver.times.list",
                        "times must be positive and nonempty",
                    ));
                }
                Ok(values.clone())
            }
        }
    }

    /// The fit window applied to the time grid.
    pub fn windowed(&self, samples: &[(f64, f64)]) -> Result<Vec<(f64, f64)>, ConfigError> {
        let out = match self.fit.window {
            None => samples.to_vec(),
            Some([a, b]) => {
                if a > b || b >= samples.len() {
                    return Err(ConfigError::at(
                        "fit.window",
                        format!("[{a}, {b}] out of range for {} samples", samples.len()),
                    ));
                }
                samples[a..=b].to_vec()
            }
        };
        if out.len() <= self.fit.n_terms {
            return Err(ConfigError::at(
                "fit.n_terms",
                format!(
                    "need more samples than terms: {} terms, {} windowed samples",
                    self.fit.n_terms,
                    out.len()
                ),
            ));
        }
        Ok(out)
    }
}
