//! The `qcomplement` command line.
//!
//! Exit codes: 0 on success, 1 on errors that are not about the input
//! (unreadable file, unknown candidate), 2 on parse or validation errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{CatalogConfig, CatalogId};
use crate::error::Error;
use crate::linalg::Tolerances;
use crate::model::Experiment;
use crate::report::Report;
use crate::scenario::{parse_scenario, ScenarioDocument};

#[derive(Debug, Parser)]
#[command(
    name = "qcomplement",
    version,
    about = "Which-result or interference? Classify intermediate observables of finite quantum experiments."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Outcome probabilities at the final moment.
    Simulate(Common),
    /// Classify candidate observables.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Only this candidate.
        #[arg(long)]
        candidate: Option<String>,
    },
    /// Witness state for one candidate.
    Witness {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        candidate: String,
    },
    /// Probabilities and classifications together.
    Report(Common),
    /// Built-in scenarios.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// List the built-in scenarios.
    List,
    /// Print a built-in scenario as a scenario file.
    Export {
        id: String,
        #[command(flatten)]
        params: CatalogParams,
    },
}

#[derive(Debug, Args)]
struct CatalogParams {
    /// Preparator angle in degrees (Mach-Zehnder).
    #[arg(long)]
    theta: Option<f64>,
    /// Screen bins (two-slit).
    #[arg(long)]
    bins: Option<usize>,
    /// Spin axis x,y,z (Stern-Gerlach).
    #[arg(long, value_parser = parse_axis)]
    axis: Option<[f64; 3]>,
}

fn parse_axis(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|v| format!("expected x,y,z, got {} values", v.len()))
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file.
    #[arg(long, conflicts_with = "catalog", required_unless_present = "catalog")]
    scenario: Option<PathBuf>,
    /// Built-in scenario id.
    #[arg(long)]
    catalog: Option<String>,
    #[command(flatten)]
    params: CatalogParams,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Override the matrix tolerance.
    #[arg(long)]
    atol: Option<f64>,
    /// Override the probability tolerance.
    #[arg(long)]
    prob_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

enum Failure {
    /// Exit code 1.
    Runtime(String),
    /// Exit code 2.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownCandidate(_) | Error::WitnessMismatch { .. } => {
                Failure::Runtime(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Loaded {
    name: Option<String>,
    experiment: Experiment,
    tolerances: Tolerances,
}

fn config(id: CatalogId, params: &CatalogParams) -> CatalogConfig {
    let mut cfg = CatalogConfig::new(id);
    if let Some(theta) = params.theta {
        cfg.theta_deg = theta;
    }
    if let Some(bins) = params.bins {
        cfg.bins = bins;
    }
    if let Some(axis) = &params.axis {
        cfg.axis = *axis;
    }
    cfg
}

fn load(common: &Common) -> Result<Loaded, Failure> {
    let (name, experiment, mut tolerances) = match (&common.scenario, &common.catalog) {
        (Some(path), _) => {
            let bytes = std::fs::read(path)
                .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
            let s = parse_scenario(&bytes).map_err(|e| Failure::Input(e.to_string()))?;
            let name = s
                .document
                .name
                .clone()
                .or_else(|| path.file_stem().map(|n| n.to_string_lossy().into_owned()));
            (name, s.experiment, s.tolerances)
        }
        (None, Some(id)) => {
            let id: CatalogId = id.parse()?;
            let exp = config(id, &common.params).build()?;
            (Some(id.as_str().to_string()), exp, Tolerances::default())
        }
        (None, None) => return Err(Failure::Input("give --scenario or --catalog".into())),
    };
    if let Some(atol) = common.atol {
        tolerances.atol_matrix = atol;
    }
    if let Some(p) = common.prob_tol {
        tolerances.prob_tol = p;
    }
    tolerances.validate()?;
    Ok(Loaded {
        name,
        experiment,
        tolerances,
    })
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Table => report.to_table(),
        Format::Json => report.to_json(),
    }
}

fn execute(command: Command) -> Result<String, Failure> {
    match command {
        Command::Simulate(common) => {
            let l = load(&common)?;
            let r = Report::simulate(&l.experiment, &l.tolerances, l.name.as_deref())?;
            Ok(render(&r, common.format))
        }
        Command::Classify { common, candidate } => {
            let l = load(&common)?;
            let r = Report::classify(
                &l.experiment,
                &l.tolerances,
                l.name.as_deref(),
                candidate.as_deref(),
            )?;
            Ok(render(&r, common.format))
        }
        Command::Witness { common, candidate } => {
            let l = load(&common)?;
            let r = Report::classify(
                &l.experiment,
                &l.tolerances,
                l.name.as_deref(),
                Some(&candidate),
            )?;
            Ok(render(&r, common.format))
        }
        Command::Report(common) => {
            let l = load(&common)?;
            let r = Report::full(&l.experiment, &l.tolerances, l.name.as_deref())?;
            Ok(render(&r, common.format))
        }
        Command::Catalog {
            action: CatalogAction::List,
        } => {
            let width = CatalogId::ALL
                .iter()
                .map(|id| id.as_str().len())
                .max()
                .unwrap_or(0);
            Ok(CatalogId::ALL
                .iter()
                .map(|id| format!("{:<width$}  {}\n", id.as_str(), id.summary(), width = width))
                .collect())
        }
        Command::Catalog {
            action: CatalogAction::Export { id, params },
        } => {
            let id: CatalogId = id.parse()?;
            let exp = config(id, &params).build()?;
            let doc = ScenarioDocument::from_experiment(
                &exp,
                &Tolerances::default(),
                Some(id.as_str()),
                Some(id.summary()),
            );
            let mut s = doc.to_json_pretty();
            s.push('\n');
            Ok(s)
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
