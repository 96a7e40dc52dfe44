//! `heatc` — configuration-driven front end for the heat-content laboratory.
//!
//! Subcommands: `coeffs` (closed-form coefficient table), `simulate`
//! (β(t) samples as CSV or JSON), `fit` (half-power coefficients from a
//! simulation), `verify` (theory vs. fit with PASS/FAIL verdicts),
//! `relations` (exact constant-relation suite), and `harness` (seeded
//! identity checks).
//!
//! Exit codes: 0 success, 1 verdict failure, 2 config error (parse, schema,
//! or problem construction), 3 numeric failure (solver or fit preconditions
//! at run time).

mod config;
mod report;

use clap::{Args, Parser, Subcommand};
use config::{BuiltProblem, Config, ConfigError, FormatCfg};
use heat_content::asymptotics::{compare, fit_half_powers, Tol};
use heat_content::coefficients::eval::CoefficientSet;
use heat_content::coefficients::constants::CONSTANT_NAMES;
use heat_content::coefficients::relations::all_relations;
use heat_content::coefficients::{verify_constant_relations, Constants};
use heat_content::harness;
use heat_content::solver::{
    heat_content_interface, heat_content_one_sided, Discretization, Solution,
};
use report::{
    config_hash, sample_rows, to_csv, FitReport, HarnessDoc, RelationRow, RelationsDoc, Report,
    TheoryReport, VerdictRow,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "heatc", version, about = "heat content laboratory front end")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the closed-form coefficients β₀…β₃ for a configured problem.
    Coeffs(CoeffsArgs),
    /// Sample β(t) by direct simulation.
    Simulate(SimulateArgs),
    /// Fit half-power coefficients to a simulation.
    Fit(RunArgs),
    /// Compare the closed forms against the fit; exit 1 on any FAIL.
    Verify(VerifyArgs),
    /// Check the exact relations between the universal constants.
    Relations(OutArgs),
    /// Run the seeded identity-check catalog; exit 1 on any failed verdict.
    Harness(HarnessArgs),
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Perturb one universal constant by 5% (fault injection).
    #[arg(long, value_name = "CONSTANT")]
    mutate: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the number of cells per side.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<CliFormat>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    grid: Option<usize>,
    /// Perturb one universal constant by 5% (fault injection).
    #[arg(long, value_name = "CONSTANT")]
    mutate: Option<String>,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HarnessArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check names to run; all when empty.
    checks: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum CliFormat {
    Csv,
    Json,
}

/// Anything that should abort the command with a specific exit code.
enum Failure {
    /// Exit 2: the config could not be parsed or mapped onto a problem.
    Config(String),
    /// Exit 3: the solver or fit refused the constructed problem.
    Numeric(String),
    /// Exit 2: I/O on config or output paths.
    Io(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Io(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numeric(m) | Failure::Io(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Coeffs(a) => cmd_coeffs(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Fit(a) => cmd_fit(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Relations(a) => cmd_relations(a),
        Cmd::Harness(a) => cmd_harness(a),
    };
    match result {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

struct LoadedConfig {
    cfg: Config,
    hash: String,
}

fn load(path: &PathBuf) -> Result<LoadedConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let cfg = Config::parse(&text)?;
    Ok(LoadedConfig {
        cfg,
        hash: config_hash(&text),
    })
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn constants_for(mutate: &Option<String>) -> Result<Constants, Failure> {
    let published = Constants::published();
    match mutate {
        None => Ok(published),
        Some(name) => {
            if !CONSTANT_NAMES.contains(&name.as_str()) {
                return Err(Failure::Config(format!(
                    "--mutate {name}: not a universal constant name"
                )));
            }
            Ok(published.perturbed(name))
        }
    }
}

fn theory_of(p: &BuiltProblem, consts: &Constants) -> CoefficientSet<f64> {
    match p {
        BuiltProblem::OneSided(q) => q.theory(),
        BuiltProblem::Interface(q) => q.theory_with(consts),
    }
}

/// Run the configured solver, with optional grid override and Richardson
/// extrapolation from a half-resolution companion run.
fn solve(cfg: &Config, p: &BuiltProblem, grid: Option<usize>) -> Result<Solution<f64>, Failure> {
    let mut disc = cfg.discretization();
    if let Some(n) = grid {
        disc.n_cells = n;
    }
    let route = cfg.solver.route.to_route();
    let times = cfg.times()?;
    let run_at = |disc: &Discretization| {
        match p {
            BuiltProblem::OneSided(q) => heat_content_one_sided(q, disc, route, &times),
            BuiltProblem::Interface(q) => heat_content_interface(q, disc, route, &times),
        }
        .map_err(|e| Failure::Numeric(e.to_string()))
    };
    let fine = run_at(&disc)?;
    if !cfg.solver.richardson {
        return Ok(fine);
    }
    let coarse = run_at(&Discretization {
        n_cells: (disc.n_cells / 2).max(2),
        substeps: disc.substeps,
    })?;
    Ok(Solution::richardson(&fine, &coarse))
}

fn fit_solution(cfg: &Config, sol: &Solution<f64>) -> Result<FitOutcome, Failure> {
    let samples: Vec<(f64, f64)> = sol.samples.iter().map(|s| (s.t, s.beta)).collect();
    let windowed = cfg.windowed(&samples).map_err(|e| {
        // an out-of-range window is a config mistake, but too few samples
        // for the requested terms is a numeric precondition
        if e.path == "fit.n_terms" {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    })?;
    Ok(FitOutcome {
        fit: fit_half_powers(&windowed, cfg.fit.n_terms),
    })
}

struct FitOutcome {
    fit: heat_content::asymptotics::HalfPowerFit<f64>,
}

fn validated(cfg: &Config) -> Result<BuiltProblem, Failure> {
    let p = cfg.build_problem()?;
    match &p {
        BuiltProblem::OneSided(_) => {}
        BuiltProblem::Interface(q) => q
            .validate()
            .map_err(|e| Failure::Config(format!("problem: {e}")))?,
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn cmd_coeffs(a: CoeffsArgs) -> Result<bool, Failure> {
    let loaded = load(&a.config)?;
    let p = validated(&loaded.cfg)?;
    let consts = constants_for(&a.mutate)?;
    let set = theory_of(&p, &consts);
    let mut report = Report::new(Some(loaded.hash));
    report.theory = Some(TheoryReport::from_set(&set));
    emit(&a.out, &report.to_json())?;
    Ok(true)
}

fn cmd_simulate(a: SimulateArgs) -> Result<bool, Failure> {
    let loaded = load(&a.config)?;
    let p = validated(&loaded.cfg)?;
    let sol = solve(&loaded.cfg, &p, a.grid)?;
    let format = match a.format {
        Some(CliFormat::Csv) => FormatCfg::Csv,
        Some(CliFormat::Json) => FormatCfg::Json,
        None => loaded.cfg.output.format.unwrap_or(FormatCfg::Csv),
    };
    let out = a.out.or_else(|| loaded.cfg.output.path.clone());
    match format {
        FormatCfg::Csv => emit(&out, &to_csv(&sol))?,
        FormatCfg::Json => {
            let mut report = Report::new(Some(loaded.hash));
            report.samples = Some(sample_rows(&sol));
            emit(&out, &report.to_json())?;
        }
    }
    Ok(true)
}

fn cmd_fit(a: RunArgs) -> Result<bool, Failure> {
    let loaded = load(&a.config)?;
    let p = validated(&loaded.cfg)?;
    let sol = solve(&loaded.cfg, &p, a.grid)?;
    let outcome = fit_solution(&loaded.cfg, &sol)?;
    let mut report = Report::new(Some(loaded.hash));
    report.fit = Some(FitReport::from_fit(&outcome.fit));
    emit(&a.out, &report.to_json())?;
    Ok(true)
}

fn cmd_verify(a: VerifyArgs) -> Result<bool, Failure> {
    let loaded = load(&a.config)?;
    let p = validated(&loaded.cfg)?;
    let consts = constants_for(&a.mutate)?;
    let theory = theory_of(&p, &consts);
    let sol = solve(&loaded.cfg, &p, a.grid)?;
    let outcome = fit_solution(&loaded.cfg, &sol)?;

    // relative tolerances, absolute against predictions that vanish
    let tols: Vec<Tol<f64>> = loaded
        .cfg
        .verify
        .tolerances
        .iter()
        .zip(theory.beta.iter())
        .map(|(&tol, &th)| {
            if th.abs() <= 1e-9 {
                Tol::Abs(tol)
            } else {
                Tol::Rel(tol)
            }
        })
        .collect();
    let checks = compare(&outcome.fit, &theory.beta, &tols);

    let mut report = Report::new(Some(loaded.hash));
    report.theory = Some(TheoryReport::from_set(&theory));
    report.fit = Some(FitReport::from_fit(&outcome.fit));
    report.verdicts = Some(
        checks
            .iter()
            .zip(loaded.cfg.verify.tolerances.iter())
            .map(|(c, &tol)| VerdictRow::from_check(c, tol))
            .collect(),
    );
    let pass = checks.iter().all(|c| c.pass);
    emit(&a.out, &report.to_json())?;
    Ok(pass)
}

fn cmd_relations(a: OutArgs) -> Result<bool, Failure> {
    let consts = Constants::published();
    let rels = all_relations();
    let rows: Vec<RelationRow> = rels
        .iter()
        .map(|r| RelationRow {
            name: r.name.clone(),
            holds: r.holds(&consts),
        })
        .collect();
    let report = verify_constant_relations(&consts);
    let doc = RelationsDoc {
        config_hash: None,
        version: report::VERSION,
        total: rows.len(),
        all_hold: report.all_hold(),
        relations: rows,
    };
    emit(&a.out, &doc.to_json())?;
    Ok(doc.all_hold)
}

fn cmd_harness(a: HarnessArgs) -> Result<bool, Failure> {
    let all = harness::run_all(a.seed);
    let known: Vec<&str> = all.iter().map(|v| v.name).collect();
    let verdicts: Vec<heat_content::harness::Verdict> = if a.checks.is_empty() {
        all
    } else {
        for name in &a.checks {
            if !known.contains(&name.as_str()) {
                return Err(Failure::Config(format!(
                    "unknown check {name:?}; available: {}",
                    known.join(", ")
                )));
            }
        }
        all.into_iter()
            .filter(|v| a.checks.iter().any(|n| n == v.name))
            .collect()
    };
    let pass = verdicts.iter().all(|v| v.pass);
    let doc = HarnessDoc {
        config_hash: None,
        version: report::VERSION,
        seed: a.seed,
        verdicts,
    };
    emit(&a.out, &doc.to_json())?;
    Ok(pass)
}
