//! Command-line front end.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::barabanov::{self, bracket_from_field, check_nubound, eccentricity};
use crate::error::Error;
use crate::io::{example1_csv, read_matrix_set, table_csv, trials_csv, FormatError};
use crate::irreducibility::{chi, DEFAULT_CHI_GRID};
use crate::jsr::{bracket, DEFAULT_DEPTH};
use crate::linalg::{MatrixSet, NormKind};
use crate::lipschitz::{example1_sweep, nu_with_depth, verify_theorem, Perturbation, VerificationReport, VerifyConfig};

pub const EXIT_OK: i32 = 0;
/// A certificate could not be produced (χ_lower = 0, reducible input, non-convergence).
pub const EXIT_UNCERTIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
/// At least one trial violated the Lipschitz inequality.
pub const EXIT_VIOLATION: i32 = 3;

const DEFAULT_EPS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    One,
    Two,
    Inf,
}

impl From<KindArg> for NormKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::One => NormKind::One,
            KindArg::Two => NormKind::Two,
            KindArg::Inf => NormKind::Inf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PerturbArg {
    Entrywise,
    Add,
    Drop,
}

impl From<PerturbArg> for Perturbation {
    fn from(p: PerturbArg) -> Self {
        match p {
            PerturbArg::Entrywise => Perturbation::Entrywise,
            PerturbArg::Add => Perturbation::Add,
            PerturbArg::Drop => Perturbation::Drop,
        }
    }
}

/// Joint spectral radius brackets, irreducibility measures and Lipschitz certificates.
#[derive(Debug, Parser)]
#[command(name = "jsr-lipschitz", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Omit the timestamp from JSON reports.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Matrix-set JSON file.
    pub input: PathBuf,

    /// Base vector norm.
    #[arg(long, value_enum, default_value_t = KindArg::Two)]
    pub kind: KindArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-sided bracket on the joint spectral radius.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// Maximal product length.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        n: usize,
    },
    /// Certified measure of irreducibility χ_p.
    Chi {
        #[command(flatten)]
        common: Common,
        /// Product depth (default d − 1).
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CHI_GRID)]
        grid: usize,
    },
    /// Explicit Lipschitz constant ν_p and its sharp variant.
    Nu {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_CHI_GRID)]
        grid: usize,
    },
    /// Numerical Barabanov norm, its eccentricity and the ecc ≤ ν_p check.
    Barabanov {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = barabanov::DEFAULT_GRID)]
        grid: usize,
        /// Grid used for the χ_p certificate in the ν_p check.
        #[arg(long, default_value_t = DEFAULT_CHI_GRID)]
        chi_grid: usize,
        #[arg(long, default_value_t = barabanov::DEFAULT_MAX_ITERS)]
        max_iters: usize,
        #[arg(long, default_value_t = barabanov::DEFAULT_TOL)]
        tol: f64,
    },
    /// Random perturbation trials of |ρ(A) − ρ(B)| ≤ ν_p(A)·H(A, B).
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_CHI_GRID)]
        grid: usize,
        #[arg(long, default_value_t = 0.05)]
        eta: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = PerturbArg::Entrywise)]
        perturb: PerturbArg,
    },
    /// Sweep of the non-irreducible family A_ε = [[1, 1], [ε, 1]].
    Example1 {
        /// Perturbation sizes (repeatable).
        #[arg(long = "eps")]
        eps: Vec<f64>,
        #[arg(long, value_enum, default_value_t = KindArg::Inf)]
        kind: KindArg,
    },
}

/// A finished command: its rendered report and exit status.
#[derive(Debug)]
pub struct Outcome {
    pub report: String,
    pub status: i32,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Uncertified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UncertifiedChi | Error::Reducible | Error::Undecided => Failure::Uncertified(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Exit status for a verification run.
pub fn verify_status(report: &VerificationReport) -> i32 {
    if report.violations > 0 {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

/// Runs a parsed command, writing the report to `out` (or `--output`) and
/// diagnostics to `err`. Returns the process exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config) {
        Ok(outcome) => {
            let written = match &config.output {
                Some(path) => std::fs::write(path, &outcome.report).map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(outcome.report.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(err, "error: {msg}");
                return EXIT_USAGE;
            }
            outcome.status
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Uncertified(msg)) => {
            let _ = writeln!(err, "not certified: {msg}");
            EXIT_UNCERTIFIED
        }
    }
}

fn load(common: &Common) -> Result<(MatrixSet, NormKind), Failure> {
    Ok((read_matrix_set(&common.input)?, common.kind.into()))
}

fn planar(s: &MatrixSet, command: &str) -> Result<(), Failure> {
    if s.dim() != 2 {
        return Err(Failure::Usage(format!(
            "`{command}` needs 2×2 matrices (exact planar geometry); the input has dimension {}",
            s.dim()
        )));
    }
    Ok(())
}

fn depth_p(s: &MatrixSet, p: Option<usize>) -> Result<usize, Failure> {
    match p {
        Some(0) => Err(Failure::Usage("--p must be positive".into())),
        Some(p) => Ok(p),
        None => Ok((s.dim() - 1).max(1)),
    }
}

fn json_report<T: Serialize>(config: &RunConfig, command: &str, result: &T) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert("command".into(), Value::from(command));
    if !config.deterministic {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        doc.insert("generated_at".into(), Value::from(secs));
    }
    doc.insert("result".into(), serde_json::to_value(result).expect("report serializes"));
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("report serializes");
    text.push('\n');
    text
}

fn execute(config: &RunConfig) -> Result<Outcome, Failure> {
    match &config.command {
        Command::Bounds { common, n } => {
            let (s, kind) = load(common)?;
            let interval = bracket(&s, *n, kind)?;
            let report = match config.format {
                Format::Json => json_report(config, "bounds", &json!({ "n": n, "kind": kind, "interval": interval })),
                Format::Csv => table_csv(
                    &["lo", "hi", "lo_witness", "hi_depth"],
                    &[vec![
                        interval.lo.to_string(),
                        interval.hi.to_string(),
                        interval.lo_witness.to_string(),
                        interval.hi_depth.to_string(),
                    ]],
                )?,
                Format::Text => format!(
                    "bracket [{}, {}]\n  lo from word {} (spectral radius)\n  hi from ‖A^k‖^(1/k) at k = {} ({} norm, n = {})\n",
                    interval.lo, interval.hi, interval.lo_witness, interval.hi_depth, kind, n
                ),
            };
            Ok(Outcome { report, status: EXIT_OK })
        }
        Command::Chi { common, p, grid } => {
            let (s, kind) = load(common)?;
            planar(&s, "chi")?;
            let p = depth_p(&s, *p)?;
            let cert = chi(&s, p, kind, *grid)?;
            let report = match config.format {
                Format::Json => json_report(config, "chi", &cert),
                Format::Csv => table_csv(
                    &["p", "kind", "chi_estimate", "chi_lower", "grid_count", "lipschitz_L", "covering_delta"],
                    &[vec![
                        cert.p.to_string(),
                        cert.kind.to_string(),
                        cert.chi_estimate.to_string(),
                        cert.chi_lower.to_string(),
                        cert.grid_count.to_string(),
                        cert.lipschitz_l.to_string(),
                        cert.covering_delta.to_string(),
                    ]],
                )?,
                Format::Text => format!(
                    "chi_{p} estimate  {}\nchi_{p} certified {}\n  grid {} directions, covering radius {:.3e}, L = {}\n",
                    cert.chi_estimate, cert.chi_lower, cert.grid_count, cert.covering_delta, cert.lipschitz_l
                ),
            };
            let status = if cert.certifies() { EXIT_OK } else { EXIT_UNCERTIFIED };
            Ok(Outcome { report, status })
        }
        Command::Nu { common, p, n, grid } => {
            let (s, kind) = load(common)?;
            planar(&s, "nu")?;
            let p = depth_p(&s, *p)?;
            let cert = chi(&s, p, kind, *grid)?;
            let c = nu_with_depth(&s, p, kind, &cert, *n)?;
            let report = match config.format {
                Format::Json => json_report(config, "nu", &c),
                Format::Csv => table_csv(
                    &["p", "kind", "nu", "nu_sharp", "chi_estimate", "chi_lower"],
                    &[vec![
                        p.to_string(),
                        kind.to_string(),
                        c.nu.to_string(),
                        c.nu_sharp.to_string(),
                        cert.chi_estimate.to_string(),
                        cert.chi_lower.to_string(),
                    ]],
                )?,
                Format::Text => format!(
                    "nu_{p}       {}\nnu_{p} sharp {}\n  chi estimate {}, certified {} ({} norm)\n",
                    c.nu, c.nu_sharp, cert.chi_estimate, cert.chi_lower, kind
                ),
            };
            Ok(Outcome { report, status: EXIT_OK })
        }
        Command::Barabanov { common, p, grid, chi_grid, max_iters, tol } => {
            let (s, kind) = load(common)?;
            planar(&s, "barabanov")?;
            let p = depth_p(&s, *p)?;
            let field = barabanov::barabanov_iterate(&s, kind, *grid, *max_iters, *tol)?;
            let ecc = eccentricity(&field);
            let nb = bracket_from_field(&field, &s)?;
            let cert = chi(&s, p, kind, *chi_grid)?;
            let check = check_nubound(&field, &cert, &s).ok();
            let certified = field.converged && check.as_ref().is_some_and(|c| c.pass_nu);
            let report = match config.format {
                Format::Json => json_report(
                    config,
                    "barabanov",
                    &json!({ "field": field, "eccentricity": ecc, "field_bracket": nb, "nu_check": check, "chi": cert }),
                ),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = field
                        .thetas
                        .iter()
                        .zip(&field.values)
                        .map(|(t, v)| vec![t.to_string(), v.to_string()])
                        .collect();
                    table_csv(&["theta", "h"], &rows)?
                }
                Format::Text => {
                    let mut t = String::new();
                    let _ = writeln!(
                        t,
                        "rho_hat   {}\nresidual  {:.3e} ({} after {} iterations)",
                        field.rho_hat,
                        field.residual,
                        if field.converged { "converged" } else { "NOT converged" },
                        field.iterations
                    );
                    let _ = writeln!(t, "alpha/beta from the field: [{}, {}]", nb.beta, nb.alpha);
                    let _ = writeln!(t, "ecc       {} (e- = {}, e+ = {})", ecc.ecc, ecc.e_minus, ecc.e_plus);
                    match &check {
                        Some(c) => {
                            let _ = writeln!(
                                t,
                                "nu_{p}      {} -> {}\nnu_{p} sharp {} -> {}",
                                c.nu,
                                if c.pass_nu { "pass" } else { "FAIL" },
                                c.nu_sharp,
                                if c.pass_sharp { "pass" } else { "FAIL" }
                            );
                        }
                        None => {
                            let _ = writeln!(t, "nu_{p} check skipped: chi_lower = 0 at grid {chi_grid}");
                        }
                    }
                    t
                }
            };
            Ok(Outcome { report, status: if certified { EXIT_OK } else { EXIT_UNCERTIFIED } })
        }
        Command::Verify { common, p, n, grid, eta, trials, seed, perturb } => {
            let (s, kind) = load(common)?;
            planar(&s, "verify")?;
            let cfg = VerifyConfig {
                p: depth_p(&s, *p)?,
                kind,
                eta: *eta,
                trials: *trials,
                seed: *seed,
                depth: *n,
                grid_count: *grid,
                perturbation: (*perturb).into(),
            };
            let report = verify_theorem(&s, &cfg)?;
            let status = verify_status(&report);
            let text = match config.format {
                Format::Json => json_report(config, "verify", &report),
                Format::Csv => trials_csv(&report)?,
                Format::Text => {
                    let nu = report.trials.first().map_or(f64::NAN, |t| t.nu);
                    format!(
                        "trials      {}\nviolations  {}\nnu_{}        {}\nmax lhs/H   {}\n",
                        report.trials.len(),
                        report.violations,
                        cfg.p,
                        nu,
                        report.max_ratio()
                    )
                }
            };
            Ok(Outcome { report: text, status })
        }
        Command::Example1 { eps, kind } => {
            let eps: Vec<f64> = if eps.is_empty() { DEFAULT_EPS.to_vec() } else { eps.clone() };
            let table = example1_sweep(&eps, (*kind).into())?;
            let report = match config.format {
                Format::Json => json_report(config, "example1", &table),
                Format::Csv => example1_csv(&table)?,
                Format::Text => {
                    let mut t = String::from("epsilon      rho_exact        rho_computed     H            ratio\n");
                    for r in &table.rows {
                        let _ = writeln!(
                            t,
                            "{:<12e} {:<16} {:<16} {:<12e} {}",
                            r.epsilon, r.rho_exact, r.rho_computed, r.h, r.ratio
                        );
                    }
                    if let Some(slope) = table.slope {
                        let _ = writeln!(t, "slope of log|Δρ| vs log H: {slope}");
                    }
                    t
                }
            };
            Ok(Outcome { report, status: EXIT_OK })
        }
    }
}
