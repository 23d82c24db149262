use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::commands::{
    cmd_angles, cmd_invariant, cmd_modes, cmd_spectrum, cmd_susy, default_convention, spectrum_series,
    spectrum_table, verify_spectrum,
};
use crate::config::{Convention, H2Mode, OutputFormat, RunConfig};
use crate::error::{CliError, CliResult};
use crate::validation;

#[derive(Debug, Parser)]
#[command(name = "qbounce", version, about = "Quantum bouncing ball: eigenmodes, Ermakov-Lewis invariant, isospectral SUSY family")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Ground-state constants [default: exact, or paper for invariant/angles]
    #[arg(long, global = true, value_enum)]
    pub convention: Option<Convention>,
    /// Deformation parameter of the isospectral family
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub grid_min: f64,
    #[arg(long, global = true, default_value_t = 12.0, allow_negative_numbers = true)]
    pub grid_max: f64,
    #[arg(long, global = true, default_value_t = 1201)]
    pub grid_points: usize,
    /// Quadrature tolerance
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Output file, or `-`/`stdout` [validate: VALIDATION.md]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenmodes psi_n on the grid plus the (n, S_n, N_n) table
    Modes {
        /// Highest mode [default: 5, or 1 with paper constants]
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Ermakov-Lewis invariant along the grid
    Invariant {
        #[arg(long, value_enum, default_value = "consistent")]
        h2: H2Mode,
    },
    /// Dynamical, geometric and total Lewis angles versus the upper limit T
    Angles,
    /// I0, V(s; lambda), psi_1 and phi_1 on the grid
    Susy,
    /// Finite-difference spectra of V = s and V(s; lambda)
    Spectrum {
        /// Box length
        #[arg(long = "L", default_value_t = 40.0, allow_negative_numbers = true)]
        length: f64,
        /// Interior grid points
        #[arg(long, default_value_t = 4000)]
        points: usize,
        /// Number of levels compared
        #[arg(long, default_value_t = 6)]
        k: usize,
    },
    /// Run the acceptance checks and write a markdown report
    Validate,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Modes { .. } => "modes",
            Command::Invariant { .. } => "invariant",
            Command::Angles => "angles",
            Command::Susy => "susy",
            Command::Spectrum { .. } => "spectrum",
            Command::Validate => "validate",
        }
    }
}

/// What a subcommand produced, before it is written anywhere.
struct Outcome {
    data: String,
    summary: Vec<String>,
    meta: serde_json::Value,
    verification: CliResult<()>,
}

fn config(global: &GlobalArgs, command: &Command) -> RunConfig {
    RunConfig {
        convention: global.convention.unwrap_or_else(|| default_convention(command.name())),
        lambda: global.lambda,
        grid_min: global.grid_min,
        grid_max: global.grid_max,
        grid_points: global.grid_points,
        tolerance: global.tol,
        output_format: global.format,
    }
}

fn execute(cfg: &RunConfig, command: &Command) -> CliResult<Outcome> {
    let fmt = cfg.output_format;
    Ok(match *command {
        Command::Modes { n_max } => {
            let default_n = if cfg.convention == Convention::Paper { 1 } else { 5 };
            let out = cmd_modes(cfg, n_max.unwrap_or(default_n))?;
            let summary = out
                .table
                .iter()
                .map(|r| format!("n = {}, {:?}: S_n = {:.8}, N_n = {:.8}", r.n, r.convention, r.energy, r.norm))
                .collect();
            Outcome {
                data: out.series.render(fmt),
                summary,
                meta: json!({ "table": out.table }),
                verification: Ok(()),
            }
        }
        Command::Invariant { h2 } => {
            let out = cmd_invariant(cfg, h2)?;
            let mut summary = vec![format!(
                "h^2 used = {}, consistent h^2 = {:.10}, mean I = {:.12}, spread = {:e}, relative spread = {:e}",
                out.h_squared_used, out.h_squared, out.mean, out.spread, out.relative_spread
            )];
            summary.extend(out.warning(h2));
            Outcome {
                data: out.series.render(fmt),
                summary,
                meta: json!({
                    "h2_mode": h2,
                    "h_squared": out.h_squared,
                    "h_squared_used": out.h_squared_used,
                    "mean": out.mean,
                    "spread": out.spread,
                    "relative_spread": out.relative_spread,
                }),
                verification: out.verify(h2),
            }
        }
        Command::Angles => {
            let out = cmd_angles(cfg)?;
            let summary = vec![format!(
                "max |dyn + geo - total| = {:e} (relative {:e}), total nondecreasing: {}",
                out.max_additivity_error, out.max_relative_additivity_error, out.total_nondecreasing
            )];
            Outcome {
                data: out.series.render(fmt),
                summary,
                meta: json!({
                    "max_additivity_error": out.max_additivity_error,
                    "max_relative_additivity_error": out.max_relative_additivity_error,
                    "total_nondecreasing": out.total_nondecreasing,
                }),
                verification: out.verify(),
            }
        }
        Command::Susy => {
            let out = cmd_susy(cfg)?;
            let summary = vec![format!(
                "lambda = {}, N(lambda) = {:.12}, I0 at grid end = {:.12}, trapezoid int phi_1^2 = {:.10}",
                out.lambda, out.deformed_norm, out.i0_final, out.phi_norm_trapezoid
            )];
            Outcome {
                data: out.series.render(fmt),
                summary,
                meta: json!({
                    "lambda": out.lambda,
                    "deformed_norm": out.deformed_norm,
                    "i0_final": out.i0_final,
                    "phi_norm_trapezoid": out.phi_norm_trapezoid,
                }),
                verification: Ok(()),
            }
        }
        Command::Spectrum { length, points, k } => {
            let cmp = cmd_spectrum(cfg, length, points, k)?;
            let data = match fmt {
                OutputFormat::Csv => spectrum_series(&cmp)?.to_csv(),
                OutputFormat::Json => {
                    let mut text = serde_json::to_string_pretty(&cmp).expect("comparison serializes");
                    text.push('\n');
                    text
                }
            };
            Outcome {
                data,
                summary: spectrum_table(&cmp).lines().map(str::to_owned).collect(),
                meta: json!({ "max_pairwise_gap": cmp.max_pairwise_gap, "max_reference_deviation": cmp.max_reference_deviation() }),
                verification: verify_spectrum(&cmp),
            }
        }
        Command::Validate => unreachable!("handled separately"),
    })
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn is_stdout(p: &Path) -> bool {
    p.as_os_str() == "-" || p.as_os_str() == "stdout"
}

fn write_data(out: Option<&Path>, data: &str, meta: serde_json::Value) -> CliResult<()> {
    match out {
        None => std::io::stdout().write_all(data.as_bytes())?,
        Some(p) if is_stdout(p) => std::io::stdout().write_all(data.as_bytes())?,
        Some(p) => {
            std::fs::write(p, data)?;
            let mut text = serde_json::to_string_pretty(&meta).expect("meta serializes");
            text.push('\n');
            std::fs::write(sidecar_path(p), text)?;
        }
    }
    Ok(())
}

fn validate(out: Option<&Path>) -> CliResult<()> {
    let criteria = validation::run_all();
    for c in &criteria {
        eprintln!("{}", c.summary_line());
    }
    let path = out.unwrap_or(Path::new("VALIDATION.md"));
    let report = validation::render_markdown(&criteria);
    if is_stdout(path) {
        std::io::stdout().write_all(report.as_bytes())?;
    } else {
        std::fs::write(path, report)?;
    }
    let failed: Vec<String> = criteria.iter().filter(|c| !c.passed()).map(|c| c.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("criteria {} failed", failed.join(", "))))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Command::Validate = cli.command {
        return validate(cli.global.out.as_deref());
    }
    let cfg = config(&cli.global, &cli.command);
    let outcome = execute(&cfg, &cli.command)?;
    let meta = json!({
        "command": cli.command.name(),
        "config": cfg,
        "summary": outcome.meta,
        "version": env!("CARGO_PKG_VERSION"),
    });
    write_data(cli.global.out.as_deref(), &outcome.data, meta)?;
    for line in &outcome.summary {
        eprintln!("{line}");
    }
    outcome.verification
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qbounce: {e}");
            e.exit_code()
        }
    }
}
