//! `funcobs` command-line frontend.
//!
//! Exit codes: 0 whenever the analysis ran (verdicts are data), 2 for usage,
//! parse and I/O failures, 1 when the input violates a precondition of the
//! requested operation (e.g. a non-diagonalizable `A` for `design-min`).

pub mod files;
pub mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::functional::{analyze, is_functionally_observable, SystemTriple};
use crate::numeric::RankPolicy;
use crate::placement::{
    construct_min_c, greedy_place, greedy_with_certificate, PlacementProblem,
    DEFAULT_MAX_BRUTE_FORCE,
};
use crate::structural::realization::{field_observability_rank, field_target_rank, seeded_rng};
use crate::structural::{is_sfo, sample_functional_observability, target_controllability};
use files::{from_one_based, read_json, to_one_based, PatternFile, SystemFile};
use report::{
    render_text, CommandResult, DesignResult, FoResult, GainRow, PlaceResult, Report, SfoOracle,
    SfoResult, StateRow, TargetOracle, TargetResult, TOOL_NAME, VERSION,
};

/// Realizations drawn by `check-sfo --oracle`.
pub const SFO_ORACLE_SAMPLES: usize = 100;
/// Field realizations drawn by `check-target-ctrl --oracle`.
pub const TARGET_ORACLE_REALIZATIONS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Fo,
    Sfo,
    Fd,
}

#[derive(Debug, Parser)]
#[command(
    name = "funcobs",
    version,
    about = "Functional observability analysis and sensor placement"
)]
pub struct Cli {
    /// Relative singular-value tolerance for numerical rank (0 = machine default).
    #[arg(long, global = true, default_value_t = 0.0)]
    pub tolerance: f64,
    /// Stability boundary: eigenvalues with Re >= -margin count as unstable.
    #[arg(long, global = true, default_value_t = 0.0)]
    pub margin: f64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Cross-check structural verdicts against random prime-field realizations.
    #[arg(long, global = true)]
    pub oracle: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Functional observability and detectability of a numeric system file.
    CheckFo { file: PathBuf },
    /// Structural functional observability of a pattern file.
    CheckSfo { file: PathBuf },
    /// Greedy minimal sensor selection among the rows of C.
    Place {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Fo)]
        mode: Mode,
        /// Candidate sensor rows (1-based); defaults to every row of C.
        #[arg(long, value_delimiter = ',')]
        candidates: Option<Vec<usize>>,
        /// Compare against the exhaustive optimum (at most 14 candidates).
        #[arg(long)]
        validate_bound: bool,
    },
    /// Minimal output matrix for a diagonalizable A.
    DesignMin { file: PathBuf },
    /// Structural target controllability of the states in --targets.
    CheckTargetCtrl {
        file: PathBuf,
        /// Target states (1-based).
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<usize>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Precondition(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Precondition(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::DimensionMismatch(_) => CliError::Usage(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn load<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> CliResult<T> {
    read_json(path).map_err(CliError::Usage)
}

fn policy(cli: &Cli) -> CliResult<RankPolicy> {
    Ok(RankPolicy::relative(cli.tolerance)?)
}

fn check_margin(margin: f64) -> CliResult<f64> {
    if margin.is_finite() {
        Ok(margin)
    } else {
        Err(CliError::Usage(format!(
            "--margin must be finite, got {margin}"
        )))
    }
}

fn check_fo(cli: &Cli, file: &Path) -> CliResult<CommandResult> {
    let sys = load::<SystemFile>(file)?.triple()?;
    let report = analyze(&sys, &policy(cli)?, cli.margin)?;
    Ok(CommandResult::CheckFo(FoResult::from(report)))
}

fn check_sfo(cli: &Cli, file: &Path) -> CliResult<CommandResult> {
    let triple = load::<PatternFile>(file)?.triple()?;
    let r = is_sfo(&triple);
    let oracle = if cli.oracle {
        let mut rng = seeded_rng(cli.seed);
        let field_rank_o = field_observability_rank(&triple.a, &triple.c, &mut rng);
        let stacked = triple.c.vstack(&triple.f)?;
        let field_rank_of = field_observability_rank(&triple.a, &stacked, &mut rng);
        let sample =
            sample_functional_observability(&triple, SFO_ORACLE_SAMPLES, cli.seed, &policy(cli)?)?;
        Some(SfoOracle {
            field_rank_o,
            field_rank_of,
            agrees: field_rank_o == r.generic_rank_o && field_rank_of == r.generic_rank_of,
            sample,
        })
    } else {
        None
    };
    Ok(CommandResult::CheckSfo(SfoResult {
        sfo: r.sfo,
        generic_rank_o: r.generic_rank_o,
        generic_rank_of: r.generic_rank_of,
        per_functional_state: r
            .per_functional_state
            .iter()
            .map(|s| StateRow {
                state: s.state + 1,
                reached_by_every_max_family: s.reached_by_every_max_family,
                output_reachable: s.output_reachable,
            })
            .collect(),
        fast_path_used: r.fast_path_used,
        oracle,
    }))
}

fn place(
    cli: &Cli,
    file: &Path,
    mode: Mode,
    candidates: Option<&[usize]>,
    validate_bound: bool,
) -> CliResult<CommandResult> {
    let (problem, rows) = match mode {
        Mode::Fo | Mode::Fd => {
            let sys: SystemTriple = load::<SystemFile>(file)?.triple()?;
            let rows = sys.c().nrows();
            let problem = if mode == Mode::Fo {
                PlacementProblem::numeric_fo(sys, policy(cli)?)
            } else {
                PlacementProblem::numeric_fd(sys, policy(cli)?, cli.margin)?
            };
            (problem, rows)
        }
        Mode::Sfo => {
            let triple = load::<PatternFile>(file)?.triple()?;
            let rows = triple.c.nrows();
            (PlacementProblem::structural_sfo(triple), rows)
        }
    };
    let problem = match candidates {
        Some(c) => problem.with_candidates(from_one_based(c, rows, "candidate sensor")?)?,
        None => problem,
    };
    if validate_bound && problem.candidates().len() > DEFAULT_MAX_BRUTE_FORCE {
        return Err(CliError::Precondition(format!(
            "--validate-bound needs at most {DEFAULT_MAX_BRUTE_FORCE} candidates, got {}",
            problem.candidates().len()
        )));
    }
    let result = if validate_bound {
        greedy_with_certificate(&problem, DEFAULT_MAX_BRUTE_FORCE)?
    } else {
        greedy_place(&problem)?
    };
    Ok(CommandResult::Place(PlaceResult {
        mode: problem.kind(),
        candidates: to_one_based(problem.candidates()),
        selected: to_one_based(&result.selected),
        gain_trace: result
            .gain_trace
            .iter()
            .map(|g| GainRow {
                sensor: g.sensor + 1,
                gain: g.gain,
                objective: g.objective,
            })
            .collect(),
        initial_objective: result.initial_objective,
        residual: result.residual,
        feasible: result.feasible,
        bound_certificate: result.bound_certificate,
    }))
}

fn design_min(cli: &Cli, file: &Path) -> CliResult<CommandResult> {
    let input = load::<SystemFile>(file)?;
    let (a, _, f) = input.matrices()?;
    let pol = policy(cli)?;
    let d = construct_min_c(&a, &f, &pol)?;
    let functionally_observable = if d.sensor_count == 0 {
        true
    } else {
        is_functionally_observable(&SystemTriple::new(a, d.c.clone(), f)?, &pol)?.observable
    };
    let c = (0..d.c.nrows())
        .map(|i| d.c.row(i).iter().copied().collect())
        .collect();
    Ok(CommandResult::DesignMin(DesignResult {
        sensor_count: d.sensor_count,
        c,
        basis_condition: d.basis_condition,
        rank_o: d.rank_o,
        rank_of: d.rank_of,
        functionally_observable,
    }))
}

fn check_target_ctrl(cli: &Cli, file: &Path, targets: &[usize]) -> CliResult<CommandResult> {
    let input = load::<PatternFile>(file)?;
    let a = input.state_pattern()?;
    let b = input.input_pattern()?;
    let zero_based = from_one_based(targets, input.n(), "target state")?;
    let set: BTreeSet<usize> = zero_based.iter().copied().collect();
    if set.len() != zero_based.len() {
        return Err(CliError::Usage("--targets contains duplicates".into()));
    }
    let r = target_controllability(&a, &b, &set)?;
    let exact = r.rank_lower == r.rank_upper;
    let mut notes = Vec::new();
    if !exact {
        notes.push(format!(
            "only |S| = n - 1 is decided exactly; the generic rank of the targeted rows lies in [{}, {}]",
            r.rank_lower, r.rank_upper
        ));
    }
    let oracle = if cli.oracle {
        let mut rng = seeded_rng(cli.seed);
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for _ in 0..TARGET_ORACLE_REALIZATIONS {
            *counts
                .entry(field_target_rank(&a, &b, &r.targets, &mut rng))
                .or_default() += 1;
        }
        // ties resolve towards the larger rank: generic rank is the maximum
        let majority_rank = counts
            .iter()
            .max_by_key(|(rank, count)| (**count, **rank))
            .map_or(0, |(rank, _)| *rank);
        Some(TargetOracle {
            realizations: TARGET_ORACLE_REALIZATIONS,
            majority_rank,
            agrees: (r.rank_lower..=r.rank_upper).contains(&majority_rank),
        })
    } else {
        None
    };
    Ok(CommandResult::CheckTargetCtrl(TargetResult {
        targets: to_one_based(&r.targets),
        generic_rank_c: r.generic_rank_c,
        rank_lower: r.rank_lower,
        rank_upper: r.rank_upper,
        exact,
        target_controllable: r.target_controllable,
        oracle,
        notes,
    }))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckFo { .. } => "check-fo",
        Command::CheckSfo { .. } => "check-sfo",
        Command::Place { .. } => "place",
        Command::DesignMin { .. } => "design-min",
        Command::CheckTargetCtrl { .. } => "check-target-ctrl",
    }
}

/// Runs a parsed command and assembles its report.
pub fn execute(cli: &Cli) -> CliResult<Report> {
    let margin = check_margin(cli.margin)?;
    policy(cli)?;
    let result = match &cli.command {
        Command::CheckFo { file } => check_fo(cli, file)?,
        Command::CheckSfo { file } => check_sfo(cli, file)?,
        Command::Place {
            file,
            mode,
            candidates,
            validate_bound,
        } => place(cli, file, *mode, candidates.as_deref(), *validate_bound)?,
        Command::DesignMin { file } => design_min(cli, file)?,
        Command::CheckTargetCtrl { file, targets } => check_target_ctrl(cli, file, targets)?,
    };
    Ok(Report {
        tool: TOOL_NAME.into(),
        version: VERSION.into(),
        command: command_name(&cli.command).into(),
        seed: cli.seed,
        tolerance: cli.tolerance,
        margin,
        result,
    })
}

pub fn format_report(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(report).expect("reports serialize") + "\n"
        }
        OutputFormat::Text => render_text(report),
    }
}

/// Parses `args`, runs the command, prints the report and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            print!("{}", format_report(&report, cli.format));
            0
        }
        Err(e) => {
            eprintln!("funcobs: {}", e.message());
            e.exit_code()
        }
    }
}
