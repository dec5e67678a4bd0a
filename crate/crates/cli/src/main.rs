use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use curlforce_cli::checks;
use curlforce_cli::presets;
use curlforce_cli::run::{run_scenario, run_sweep, Overrides, Vary};
use curlforce_cli::scenario::{parse_scenario, Format, Scenario};
use curlforce_cli::CliError;

#[derive(Parser)]
#[command(name = "curlforce", version, about = "Integrate and classify curl-force trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a preset by name.
    Run {
        target: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Classify trapping over a parameter grid.
    Sweep {
        target: String,
        /// Axis as key=start:stop:count; repeat for a cartesian grid.
        #[arg(long, required = true)]
        vary: Vec<String>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Built-in scenarios.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Run the self-check suite; exits 1 if anything fails.
    Check,
}

#[derive(Subcommand)]
enum PresetAction {
    List,
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Drive the rotating models with 2ωt instead of 2Γωt.
    #[arg(long)]
    freeze_gamma_phase: bool,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    r_escape: Option<f64>,
}

impl From<Flags> for Overrides {
    fn from(f: Flags) -> Self {
        Overrides {
            out_dir: f.out_dir,
            format: f.format,
            rtol: f.rtol,
            dt: f.dt,
            t_end: f.t_end,
            freeze_gamma_phase: f.freeze_gamma_phase,
            horizon: f.horizon,
            r_escape: f.r_escape,
        }
    }
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "jsonl" => Ok(Format::Jsonl),
        _ => Err(format!("expected csv or jsonl, got `{s}`")),
    }
}

/// A path to an existing file is read as a scenario; anything else is
/// looked up among the presets.
fn load(target: &str, flags: Flags) -> Result<Scenario, CliError> {
    let path = Path::new(target);
    let mut sc = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        parse_scenario(&text)?
    } else if presets::source(target).is_some() {
        presets::load(target)?
    } else if target.ends_with(".json") {
        return Err(CliError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        ));
    } else {
        presets::load(target)?
    };
    Overrides::from(flags).apply(&mut sc)?;
    Ok(sc)
}

fn execute(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Run { target, flags } => {
            let sc = load(&target, flags)?;
            let out = run_scenario(&sc)?;
            let s = &out.summary;
            println!(
                "{}: {:?} at t={:.4}, {} samples; h20 {:?}, h200 {:?}",
                s.scenario,
                s.termination,
                s.t_final,
                s.samples,
                s.verdict_h20.classification,
                s.verdict_h200.classification
            );
            println!("wrote {} and {}", out.trajectory_path.display(), out.summary_path.display());
        }
        Command::Sweep { target, vary, flags } => {
            let sc = load(&target, flags)?;
            let axes = vary.iter().map(|v| v.parse::<Vary>()).collect::<Result<Vec<_>, _>>()?;
            let (rows, path) = run_sweep(&sc, &axes)?;
            println!("{} grid points; wrote {}", rows.len(), path.display());
        }
        Command::Presets { action: PresetAction::List } => {
            for name in presets::names() {
                let sc = presets::load(name)?;
                println!("{name}\t{}", sc.model.id());
            }
        }
        Command::Check => {
            let mut failed = 0;
            for outcome in checks::run_all() {
                println!("{}", outcome.line());
                failed += usize::from(!outcome.passed);
            }
            if failed > 0 {
                println!("{failed} check(s) failed");
                return Ok(ExitCode::from(1));
            }
            println!("all checks passed");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command).context("curlforce") {
        Ok(code) => code,
        Err(err) => {
            let code = err.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            eprintln!("error: {:#}", err);
            ExitCode::from(code as u8)
        }
    }
}
