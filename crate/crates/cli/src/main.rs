use clap::{Parser, Subcommand};
use sim_cli::presets::{describe, preset, PRESET_NAMES};
use sim_cli::runner::{run_scenario, RunError};
use sim_cli::scenario::{parse_scenario, parse_scenario_json, Engine, Scenario};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sim",
    version,
    about = "Two-qubit cavity dynamics: scenario runner and figure presets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its outputs.
    Run {
        scenario: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Override the engine declared in the scenario.
        #[arg(long)]
        engine: Option<Engine>,
        /// Treat the scenario file as JSON instead of the INI form.
        #[arg(long)]
        json: bool,
    },
    /// Run a named builtin preset.
    Figure {
        preset: String,
        #[arg(long)]
        out: PathBuf,
        /// Override the preset's engine.
        #[arg(long)]
        engine: Option<Engine>,
    },
    /// List the builtin figure presets.
    ListFigures,
    /// Parse and validate a scenario file without running it.
    Validate {
        scenario: PathBuf,
        /// Treat the scenario file as JSON instead of the INI form.
        #[arg(long)]
        json: bool,
    },
}

fn load_scenario(path: &Path, json: bool) -> Result<Scenario, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let parsed = if json {
        parse_scenario_json(&text)
    } else {
        parse_scenario(&text)
    };
    parsed.map_err(|e| format!("{}: {e}", path.display()))
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("SIM_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .map_err(|_| format!("SIM_THREADS must be a positive integer, got '{raw}'"))?;
    if threads == 0 {
        return Err("SIM_THREADS must be at least 1".to_string());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("cannot configure the thread pool: {e}"))
}

fn execute(scenario: &Scenario, out: &Path) -> Result<(), RunError> {
    let outcome = run_scenario(scenario, out)?;
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    for file in &outcome.files {
        println!("wrote {}", file.display());
    }
    println!("done in {:.1} ms", outcome.wall_time_ms);
    Ok(())
}

fn run(cli: Cli) -> Result<(), (u8, String)> {
    match cli.command {
        Command::Run {
            scenario,
            out,
            engine,
            json,
        } => {
            let mut s = load_scenario(&scenario, json).map_err(|e| (2, e))?;
            if let Some(engine) = engine {
                s.engine = engine;
                s.validate().map_err(|e| (2, e.to_string()))?;
            }
            execute(&s, &out).map_err(|e| (e.exit_code(), e.to_string()))
        }
        Command::Figure {
            preset: name,
            out,
            engine,
        } => {
            let mut s = preset(&name).ok_or_else(|| {
                (
                    2,
                    format!(
                        "unknown preset '{name}'; run 'sim list-figures' for the catalog"
                    ),
                )
            })?;
            if let Some(engine) = engine {
                s.engine = engine;
                s.validate().map_err(|e| (2, e.to_string()))?;
            }
            execute(&s, &out).map_err(|e| (e.exit_code(), e.to_string()))
        }
        Command::ListFigures => {
            for name in PRESET_NAMES {
                println!("{name:8} {}", describe(name).expect("catalog is complete"));
            }
            Ok(())
        }
        Command::Validate { scenario, json } => {
            let s = load_scenario(&scenario, json).map_err(|e| (2, e))?;
            println!(
                "ok: engine={}, k={}, {} time samples",
                s.engine.name(),
                s.model.k,
                s.time.steps
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
