//! `ccf`: lower and upper posterior expectations of common-cause failure
//! rates, with JSON or plain-text reports.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ccf_cli::config::AnalysisConfig;
use ccf_cli::fixtures;
use ccf_cli::pipeline::{build_elicitation, run_analysis, CliError};
use ccf_cli::render::{render_report, render_table};
use ccf_cli::report::ReportDocument;

#[derive(Parser)]
#[command(name = "ccf", version, about = "Common-cause failure rate bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analysis described by a JSON configuration file.
    Analyze {
        /// Path to the JSON analysis configuration.
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Rerun a built-in case study.
    Reproduce {
        /// Case study name.
        #[arg(value_enum)]
        case: CaseName,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print hypothetical-data tables for choosing prior weight bounds.
    Elicit {
        #[command(subcommand)]
        table: ElicitCommand,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Series expansion order override.
    #[arg(long)]
    taylor_order: Option<u32>,
    /// Optimizer refinement tolerance override.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Output format; analyses default to json, elicitation to table.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseName {
    KellyAtwood,
    Network,
}

#[derive(Subcommand)]
enum ElicitCommand {
    /// Alpha-factor table: hypothetical event counts against a draft
    /// Dirichlet box.
    Alpha {
        /// Path to the draft configuration (same schema as analyze).
        #[arg(long)]
        config: PathBuf,
        /// Hypothetical number of observed events.
        #[arg(long)]
        events: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Marginal-rate table: hypothetical failure-free time against a draft
    /// Gamma box.
    Rate {
        /// Path to the draft configuration (same schema as analyze).
        #[arg(long)]
        config: PathBuf,
        /// Hypothetical number of observed events.
        #[arg(long, default_value_t = 0)]
        events: u64,
        /// Hypothetical exposure time.
        #[arg(long)]
        exposure: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Analyze { config, common } => {
            let mut parsed = AnalysisConfig::load(&config)?;
            apply_overrides(&mut parsed, &common);
            let report = run_analysis(&parsed)?;
            finish_report(report, &common)
        }
        Command::Reproduce { case, common } => {
            let mut case = match case {
                CaseName::KellyAtwood => fixtures::kelly_atwood(),
                CaseName::Network => fixtures::network(),
            };
            apply_overrides(&mut case.config, &common);
            let report = fixtures::reproduce(&case)?;
            finish_report(report, &common)
        }
        Command::Elicit { table } => run_elicit(table),
    }
}

fn apply_overrides(config: &mut AnalysisConfig, common: &CommonArgs) {
    if let Some(order) = common.taylor_order {
        config.taylor_order = order;
    }
    if let Some(tolerance) = common.tolerance {
        config.optimizer.refinement_tolerance = tolerance;
    }
}

/// Writes the report and derives the exit code: 0 when converged, 4 when
/// the optimizer ran out of budget (the partial report is still written).
fn finish_report(report: ReportDocument, common: &CommonArgs) -> Result<ExitCode, CliError> {
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report)?,
        Format::Table => render_report(&report),
    };
    write_output(&text, common.output.as_deref())?;
    if report.diagnostics.converged {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: optimizer did not converge; partial report written");
        Ok(ExitCode::from(4))
    }
}

fn run_elicit(command: ElicitCommand) -> Result<ExitCode, CliError> {
    use ccf_cli::config::{ElicitationConfig, MarginalConfig};
    let (config_path, request, common) = match command {
        ElicitCommand::Alpha { config, events, common } => (
            config,
            ElicitationConfig {
                alpha_events: Some(events),
                rate_hypothetical: None,
            },
            common,
        ),
        ElicitCommand::Rate { config, events, exposure, common } => (
            config,
            ElicitationConfig {
                alpha_events: None,
                rate_hypothetical: Some(MarginalConfig {
                    m: events,
                    t: exposure,
                    time_unit: None,
                }),
            },
            common,
        ),
    };
    let config = AnalysisConfig::load(&config_path)?;
    let section = build_elicitation(&config, &request)?;
    let table = section
        .alpha
        .or(section.rate)
        .expect("one table was requested");
    let text = match common.format.unwrap_or(Format::Table) {
        Format::Json => {
            let mut json = serde_json::to_string_pretty(&table)
                .map_err(|e| CliError::Schema(e.to_string()))?;
            json.push('\n');
            json
        }
        Format::Table => render_table(&table),
    };
    write_output(&text, common.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn to_json(report: &ReportDocument) -> Result<String, CliError> {
    let mut json = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Schema(e.to_string()))?;
    json.push('\n');
    Ok(json)
}

fn write_output(text: &str, path: Option<&std::path::Path>) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
