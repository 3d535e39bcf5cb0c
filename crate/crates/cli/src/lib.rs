//! Command-line front end: state files in, reports out.
//!
//! Exit codes: 0 separable or success, 1 entangled (or a failing selftest),
//! 2 on any input or usage error.

pub mod report;
pub mod state_file;

use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use rank2sep::concurrence::{invariants, schmidt_coefficients};
use rank2sep::linalg::{effective_rank, herm_eig};
use rank2sep::oracles::{
    compare_verdict, harness, ppt_test, random_product_mixture, random_rank2, Ensemble, DEFAULT_PPT_TOL, RNG_ALGORITHM,
};
use rank2sep::separability::pure_verdict;
use rank2sep::{check, check_rank2, generalized_concurrence, PureState, Tolerances, Verdict};
use sha2::{Digest, Sha256};
use thiserror::Error;

use report::{ConcurrenceBlock, InputInfo, OracleBlock, Report, SuiteBlock, ToleranceBlock, VerdictBlock};
use state_file::{parse_state_file, LoadedState, StateFile};

/// Seed used by `selftest` when neither `--seed` nor `RANK2SEP_SEED` is given.
pub const DEFAULT_SELFTEST_SEED: u64 = 20_051_117;
pub const SEED_ENV: &str = "RANK2SEP_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid state: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] rank2sep::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "rank2sep",
    version,
    about = "Separability of rank-two bipartite density matrices"
)]
pub struct Cli {
    /// Residual tolerance for the decision (for `ppt`: the eigenvalue threshold).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Text mode: print only the verdict line.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    MachineReadable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    /// Two random product states mixed with weight p (density_matrix).
    ProductMixture,
    /// Random orthonormal eigenvectors (eigen_pair).
    Generic,
    /// E2 maximally entangled, E1 random orthogonal (eigen_pair).
    Corollary,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide separability and cross-check with the PPT criterion.
    Check { file: String },
    /// Decide separability and print the product decomposition.
    Decompose { file: String },
    /// Generalized concurrence and invariants of a pure state.
    Concurrence { file: String },
    /// Partial-transpose test alone.
    Ppt { file: String },
    /// Emit a random state file.
    Generate {
        #[arg(long, value_enum)]
        kind: GenerateKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the seeded property suites and print pass/fail counts.
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

struct Input {
    info: InputInfo,
    state: LoadedState,
}

fn load(path: &str, stdin: &mut dyn Read, tol: &Tolerances) -> Result<Input, CliError> {
    let mut bytes = Vec::new();
    let io = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    if path == "-" {
        stdin.read_to_end(&mut bytes).map_err(io)?;
    } else {
        bytes = std::fs::read(path).map_err(io)?;
    }
    let (file, state) = parse_state_file(&bytes, tol.validation)?;
    Ok(Input {
        info: InputInfo {
            source: if path == "-" { "<stdin>".into() } else { path.into() },
            sha256: hex::encode(Sha256::digest(&bytes)),
            kind: file.payload.kind().into(),
            n: file.n,
        },
        state,
    })
}

fn decide(state: &LoadedState, tol: &Tolerances) -> Result<Verdict, CliError> {
    Ok(match state {
        LoadedState::Density { rho, n } => check(rho, *n, tol)?,
        LoadedState::Pair(s) => check_rank2(s, tol)?,
        LoadedState::Pure(psi) => pure_verdict(psi, tol.residual)?,
    })
}

fn pure_of(state: &LoadedState, tol: &Tolerances) -> Result<PureState, CliError> {
    match state {
        LoadedState::Pure(psi) => Ok(psi.clone()),
        LoadedState::Density { rho, n } => {
            let es = herm_eig(rho)?;
            match effective_rank(&es.eigenvalues, tol.rank) {
                1 => Ok(PureState::from_vector(*n, &es.eigenvector(0))?),
                rank => Err(CliError::Usage(format!(
                    "concurrence needs a pure state; this density matrix has rank {rank}"
                ))),
            }
        }
        LoadedState::Pair(_) => Err(CliError::Usage(
            "concurrence needs a pure state, not an eigen_pair".into(),
        )),
    }
}

/// Outcome of a command: report or raw output, plus exit code.
enum Output {
    Report(Box<Report>, i32),
    Raw(String),
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Output, CliError> {
    let mut tol = Tolerances::default();
    let mut ppt_tol = DEFAULT_PPT_TOL;
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
        match cli.command {
            Command::Ppt { .. } => ppt_tol = t,
            _ => tol.residual = t,
        }
    }
    let block = ToleranceBlock::new(&tol, ppt_tol);

    match &cli.command {
        Command::Check { file } | Command::Decompose { file } => {
            let decompose = matches!(cli.command, Command::Decompose { .. });
            let input = load(file, stdin, &tol)?;
            let verdict = decide(&input.state, &tol)?;
            let rho = input.state.density_matrix();
            let oracle = compare_verdict(&rho, input.state.dim(), &verdict, ppt_tol)?;
            let mut report = Report::new(if decompose { "decompose" } else { "check" }, block);
            report.verdict = Some(VerdictBlock::new(&verdict, decompose));
            report.oracle = Some(OracleBlock::new(&oracle, true));
            report.input = Some(input.info);
            let code = if verdict.separable { 0 } else { 1 };
            Ok(Output::Report(Box::new(report), code))
        }
        Command::Concurrence { file } => {
            let input = load(file, stdin, &tol)?;
            let psi = pure_of(&input.state, &tol)?;
            let mut report = Report::new("concurrence", block);
            report.concurrence = Some(ConcurrenceBlock {
                concurrence: generalized_concurrence(&psi),
                invariants: invariants(&psi),
                schmidt_coefficients: schmidt_coefficients(&psi)?,
            });
            report.input = Some(input.info);
            Ok(Output::Report(Box::new(report), 0))
        }
        Command::Ppt { file } => {
            let input = load(file, stdin, &tol)?;
            let (holds, min) = ppt_test(&input.state.density_matrix(), input.state.dim(), ppt_tol)?;
            let mut report = Report::new("ppt", block);
            report.oracle = Some(OracleBlock {
                ppt_holds: holds,
                min_pt_eigenvalue: min,
                reconstruction_error: None,
                agreement: None,
            });
            report.input = Some(input.info);
            Ok(Output::Report(Box::new(report), if holds { 0 } else { 1 }))
        }
        Command::Generate { kind, n, p, seed } => {
            if *n < 2 {
                return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
            }
            if !(*p > 0.0 && *p < 1.0) {
                return Err(CliError::Usage(format!("--p must lie in (0, 1), got {p}")));
            }
            let file = match kind {
                GenerateKind::ProductMixture => {
                    let (rho, _) = random_product_mixture(*n, *p, *seed)?;
                    StateFile::density_matrix(&rho, *n)
                }
                GenerateKind::Generic => StateFile::eigen_pair(&random_rank2(*n, *p, *seed, Ensemble::Generic)?),
                GenerateKind::Corollary => {
                    StateFile::eigen_pair(&random_rank2(*n, *p, *seed, Ensemble::MaximallyEntangledE2)?)
                }
            };
            Ok(Output::Raw(file.to_json()))
        }
        Command::Selftest { seed, trials } => {
            let seed = match seed {
                Some(s) => *s,
                None => match std::env::var(SEED_ENV) {
                    Ok(v) => v
                        .trim()
                        .parse()
                        .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer")))?,
                    Err(_) => DEFAULT_SELFTEST_SEED,
                },
            };
            let suites = harness::run_all(seed, *trials, &tol);
            let ok = suites.iter().all(|s| s.ok());
            let mut report = Report::new("selftest", block);
            report.selftest = suites.iter().map(SuiteBlock::from).collect();
            report.provenance.seed = Some(seed);
            report.provenance.rng = Some(RNG_ALGORITHM.into());
            Ok(Output::Report(Box::new(report), if ok { 0 } else { 1 }))
        }
    }
}

/// Runs the tool with explicit streams and returns the exit code.
pub fn run_cli<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, stdin) {
        Ok(Output::Raw(text)) => {
            let _ = writeln!(stdout, "{text}");
            0
        }
        Ok(Output::Report(report, code)) => {
            let _ = match (cli.format, cli.quiet) {
                (Format::MachineReadable, _) => writeln!(stdout, "{}", report.to_json()),
                (Format::Text, true) => writeln!(stdout, "{}", report.headline()),
                (Format::Text, false) => write!(stdout, "{}", report.render_text()),
            };
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
