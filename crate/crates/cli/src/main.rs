use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cqed_cli::config::Ref;
use cqed_cli::quantity::{self, Kind};
use cqed_cli::{execute, load_config, presets, CliError, RunSpec};

/// Closed-system cavity QED time evolution.
#[derive(Parser)]
#[command(name = "cqed", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a configured system and write observables as CSV.
    Run(RunArgs),
    /// List the bundled presets with their coupling ratios.
    ListPresets,
    /// Print the config file of a preset.
    ShowPreset { name: String },
}

#[derive(Args)]
struct RunArgs {
    /// Config file (TOML).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Name of a bundled preset.
    #[arg(long)]
    preset: Option<String>,
    /// End of the time window, e.g. "5 ps" (bare numbers are seconds).
    #[arg(long, value_name = "TIME")]
    t_max: Option<String>,
    /// Number of time steps (the grid has steps + 1 points).
    #[arg(long)]
    steps: Option<usize>,
    /// Override the rotating-wave approximation setting.
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "true", value_name = "BOOL")]
    rwa: Option<bool>,
    /// Subsystem A for the concurrence column: comma-separated emitter or
    /// mode labels, or 1-based partition positions (emitters first).
    #[arg(long, value_name = "A-LIST")]
    bipartition: Option<String>,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Suppress the diagnostics summary on standard error.
    #[arg(long)]
    quiet: bool,
}

fn spec_for(args: &RunArgs) -> Result<RunSpec, CliError> {
    let mut spec = match (&args.config, &args.preset) {
        (Some(path), _) => load_config(path)?,
        (None, Some(name)) => presets::load(name)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    if let Some(t) = &args.t_max {
        let t = quantity::parse(t, Kind::Time)
            .map_err(|m| CliError::Invalid { key: "--t-max".into(), message: m })?;
        spec.set_t_end(t)?;
    }
    if let Some(steps) = args.steps {
        spec.set_steps(steps)?;
    }
    if let Some(rwa) = args.rwa {
        spec.set_rwa(rwa);
    }
    if let Some(list) = &args.bipartition {
        let refs: Vec<Ref> = list.split(',').filter(|s| !s.trim().is_empty()).map(Ref::from).collect();
        spec.set_bipartition(&refs)?;
    }
    Ok(spec)
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let spec = spec_for(&args)?;
    let report = execute(&spec)?;
    match &args.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            report.write_csv(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            report
                .write_csv(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e))?;
        }
    }
    let d = &report.diagnostics;
    if !args.quiet {
        eprintln!(
            "{}: dimension {}, {} rows, eigen-residual {:.2e} (relative {:.2e}), norm drift {:.2e}, energy drift {:.2e}",
            spec.name,
            d.dimension,
            report.rows.len(),
            d.eigen_residual,
            d.eigen_residual / d.h_max,
            d.norm_drift,
            d.energy_drift
        );
    }
    d.check()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::ListPresets => presets::listing().map(|text| print!("{text}")),
        Command::ShowPreset { name } => presets::find(&name).map(|p| print!("{}", p.source)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
